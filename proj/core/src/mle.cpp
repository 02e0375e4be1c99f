#include "twsync/mle.hpp"

#include <cmath>
#include <vector>

#include "twsync/crlb.hpp"

namespace twsync {

MleEstimate estimate_mle(const ObservationSet& obs, const NoiseModel& noise) {
  obs.check_shape();
  validate_delays(obs.delays);

  std::vector<double> x(obs.n());
  for (std::size_t k = 0; k < obs.n(); ++k) {
    x[k] = obs.t_r_hat[k] - obs.t_d_prime;
  }

  const bool has_cov = noise.sigma_r2() > 0.0;
  const CovX cov = has_cov ? CovX(noise.sigma_a2(), noise.sigma_r2(), obs.n())
                           : CovX(0.0, 1.0, obs.n());
  const QuadForms q = quad_forms(cov, obs.delays, x);

  MleEstimate out;
  out.forms = q;
  // Omega is compound symmetric, so BE - CD = det * slope and
  // CF - DE = det * intercept of the least-squares line X ~ delta. The raw
  // products cancel badly; the fitted line does not.
  const double det = information_determinant(cov, obs.delays);
  const LineFit fit = fit_line(obs.delays, x);
  out.alpha2 = fit.slope;
  const double intercept = fit.intercept;
  const double drift_num = det * out.alpha2;
  const double delay_num = det * intercept;
  if (std::abs(drift_num) > kDegenerateDelayRatio * std::abs(delay_num)) {
    out.tau2 = intercept / (2.0 * out.alpha2);
  }

  if (has_cov) {
    const auto bounds = predicted_variances(obs.delays, noise, out.alpha2,
                                            out.tau2.value_or(0.0));
    out.alpha2_var = bounds.first;
    if (out.tau2) out.tau2_var = bounds.second;
  }

  if (obs.t_a_hat && out.tau2) {
    const auto gamma = estimate_gamma(obs, out.alpha2, *out.tau2);
    out.gamma21 = gamma.averaged;
    out.gamma22 = gamma.direct;
  }
  return out;
}

std::pair<double, double> predicted_variances(std::span<const double> delays,
                                              const NoiseModel& noise,
                                              double alpha_hat,
                                              double tau_hat) {
  const CrlbReport report = crlb_alpha_tau(alpha_hat, tau_hat, delays, noise);
  return {report.c_alpha, report.c_tau};
}

}  // namespace twsync
