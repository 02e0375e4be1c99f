#pragma once

#include <optional>
#include <stdexcept>

#include "twsync/clock_model.hpp"
#include "twsync/protocol.hpp"

namespace twsync {

// Raised when an offset estimate is requested from observations that do not
// carry the perfect-clock TOA.
class OffsetUnavailable : public std::runtime_error {
 public:
  OffsetUnavailable()
      : std::runtime_error(
            "offset estimation unavailable: observation has no t_a_hat") {}
};

struct Alpha1Estimate {
  double alpha1;
  double alpha1_var;  // 1 / A
};

struct GammaPair {
  double averaged;  // mean of the per-reply offset estimates
  double direct;    // t'_D - alpha (t_a_hat - tau)
};

struct EmpiricalEstimate {
  double alpha1;
  double alpha1_var;
  double tau1;
  std::optional<double> gamma11;
  std::optional<double> gamma12;
};

// Weighted combination of the N-1 pairwise drift estimates
//   (t_{n+1} - t_1) / (delta_{n+1} - delta_1)
// with the weights 1^T inv(Omega) that make it the ML estimate given those
// pairs. The weights are evaluated in closed form; see alpha1_cov for the
// covariance they invert. For N = 2 this is the single ratio.
//
// Throws std::invalid_argument on a malformed observation or a delay
// schedule that is not strictly increasing.
Alpha1Estimate estimate_alpha1(const ObservationSet& obs,
                               const NoiseModel& noise);

// Plain average of the per-reply delay estimates
//   (t_n - t'_D - alpha1 delta_n) / (2 alpha1).
// Throws std::invalid_argument if alpha1 <= 0.
double estimate_tau1(const ObservationSet& obs, double alpha1);

// Offset estimates from a drift/delay pair. Used with the empirical pair here
// and with the ML pair in mle.hpp. Throws OffsetUnavailable without t_a_hat.
GammaPair estimate_gamma(const ObservationSet& obs, double alpha, double tau);

inline GammaPair estimate_gamma_empirical(const ObservationSet& obs,
                                          double alpha1, double tau1) {
  return estimate_gamma(obs, alpha1, tau1);
}

// All empirical estimates; offsets are left empty when t_a_hat is missing.
EmpiricalEstimate estimate_empirical(const ObservationSet& obs,
                                     const NoiseModel& noise);

}  // namespace twsync
