#include "twsync/empirical.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "twsync/numerics.hpp"

namespace twsync {

Alpha1Estimate estimate_alpha1(const ObservationSet& obs,
                               const NoiseModel& noise) {
  obs.check_shape();
  validate_delays(obs.delays);

  const std::size_t n = obs.n();
  const double delta1 = obs.delays.front();
  const double t1 = obs.t_r_hat.front();

  // Spacings d_k = delta_{k+1} - delta_1, k = 1..N-1.
  double spacing_sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) spacing_sum += obs.delays[k] - delta1;
  const double spacing_mean = spacing_sum / static_cast<double>(n);

  // sigma_r^2 * inv(Omega) 1 has entries d_k (d_k - sum(d) / N).
  double weighted = 0.0;
  double weight_sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = obs.delays[k] - delta1;
    const double pairwise = (obs.t_r_hat[k] - t1) / d;
    const double w = d * (d - spacing_mean);
    weighted += w * pairwise;
    weight_sum += w;
  }
  // weight_sum equals sum((delta - mean(delta))^2) > 0 for a valid schedule.
  double alpha = weighted / weight_sum;

  // Same weights applied to the pairwise residuals, once.
  double correction = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double d = obs.delays[k] - delta1;
    const double w = d * (d - spacing_mean);
    correction += w * std::fma(-alpha, d, obs.t_r_hat[k] - t1) / d;
  }
  alpha += correction / weight_sum;
  return {alpha, noise.sigma_r2() / weight_sum};
}

double estimate_tau1(const ObservationSet& obs, double alpha1) {
  obs.check_shape();
  if (!(alpha1 > 0.0)) {
    throw std::invalid_argument("drift estimate must be > 0, got " +
                                std::to_string(alpha1));
  }
  std::vector<double> x(obs.n());
  for (std::size_t k = 0; k < obs.n(); ++k) {
    x[k] = obs.t_r_hat[k] - obs.t_d_prime;
  }
  return mean_intercept(x, obs.delays, alpha1) / (2.0 * alpha1);
}

GammaPair estimate_gamma(const ObservationSet& obs, double alpha, double tau) {
  obs.check_shape();
  if (!obs.t_a_hat) throw OffsetUnavailable();
  const double t_a_hat = *obs.t_a_hat;

  double sum = 0.0;
  for (std::size_t k = 0; k < obs.n(); ++k) {
    sum += obs.t_r_hat[k] - alpha * (t_a_hat + obs.delays[k] + tau);
  }
  return {sum / static_cast<double>(obs.n()),
          obs.t_d_prime - alpha * (t_a_hat - tau)};
}

EmpiricalEstimate estimate_empirical(const ObservationSet& obs,
                                     const NoiseModel& noise) {
  const auto [alpha1, alpha1_var] = estimate_alpha1(obs, noise);
  EmpiricalEstimate out{alpha1, alpha1_var, estimate_tau1(obs, alpha1),
                        std::nullopt, std::nullopt};
  if (obs.t_a_hat) {
    const auto gamma = estimate_gamma(obs, out.alpha1, out.tau1);
    out.gamma11 = gamma.averaged;
    out.gamma12 = gamma.direct;
  }
  return out;
}

}  // namespace twsync
