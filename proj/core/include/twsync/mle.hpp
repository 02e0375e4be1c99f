#pragma once

#include <optional>
#include <span>
#include <utility>

#include "twsync/clock_model.hpp"
#include "twsync/empirical.hpp"
#include "twsync/numerics.hpp"
#include "twsync/protocol.hpp"

namespace twsync {

// Joint ML estimate of (alpha, tau) from the TOR vector X = t_r_hat - t'_D 1,
// plus offset estimates built on it.
//
// tau2 is empty when BE - CD vanishes relative to CF - DE; alpha2 is still
// reported in that case. Predicted variances are the CRLBs evaluated at the
// estimates and are empty when sigma_r = 0 (the bounds need inv(Omega_X)).
struct MleEstimate {
  double alpha2 = 0.0;
  std::optional<double> tau2;
  std::optional<double> alpha2_var;
  std::optional<double> tau2_var;
  std::optional<double> gamma21;
  std::optional<double> gamma22;
  QuadForms forms{};

  bool degenerate() const { return !tau2.has_value(); }
};

// Relative threshold on |BE - CD| / |CF - DE| below which tau2 is undefined.
inline constexpr double kDegenerateDelayRatio = 1e-30;

// Estimators assume TOR variance sigma_r^2 (not alpha^2 sigma_r^2). The point
// estimates do not depend on Omega_X for this model (the mean lies in
// span{1, delta} and Omega_X is compound symmetric), so sigma_r = 0 falls back
// to identity weighting for them.
//
// Throws std::invalid_argument on a malformed observation or schedule.
MleEstimate estimate_mle(const ObservationSet& obs, const NoiseModel& noise);

// (c_alpha, c_tau) at the given estimates. Throws SingularCovariance when
// sigma_r = 0.
std::pair<double, double> predicted_variances(std::span<const double> delays,
                                              const NoiseModel& noise,
                                              double alpha_hat, double tau_hat);

// Throws OffsetUnavailable when obs has no t_a_hat.
inline GammaPair estimate_gamma_mle(const ObservationSet& obs, double alpha2,
                                    double tau2) {
  return estimate_gamma(obs, alpha2, tau2);
}

}  // namespace twsync
