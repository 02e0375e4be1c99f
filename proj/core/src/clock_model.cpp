#include "twsync/clock_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twsync {

ClockParams ClockParams::from_ppm(double nu_ppm, double gamma_s) {
  if (!std::isfinite(nu_ppm) || !std::isfinite(gamma_s)) {
    throw std::invalid_argument("clock parameters must be finite");
  }
  const double alpha = 1.0 + nu_ppm * 1e-6;
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("clock drift gives alpha <= 0 (nu_ppm = " +
                                std::to_string(nu_ppm) + ")");
  }
  return ClockParams(nu_ppm, alpha, gamma_s);
}

double local_from_true(double t, const ClockParams& clock) {
  return clock.alpha() * t + clock.gamma();
}

double true_from_local(double t_prime, const ClockParams& clock) {
  return (t_prime - clock.gamma()) / clock.alpha();
}

void validate_delays(std::span<const double> delays) {
  if (delays.size() < 2) {
    throw std::invalid_argument("at least two reply delays are required, got " +
                                std::to_string(delays.size()));
  }
  for (std::size_t i = 0; i < delays.size(); ++i) {
    if (!std::isfinite(delays[i]) || !(delays[i] > 0.0)) {
      throw std::invalid_argument("reply delay " + std::to_string(i + 1) +
                                  " must be finite and > 0");
    }
    if (i > 0 && !(delays[i] > delays[i - 1])) {
      throw std::invalid_argument(
          "reply delays must be strictly increasing (index " +
          std::to_string(i + 1) + ")");
    }
  }
}

ProtocolConfig::ProtocolConfig(double t_d_prime, std::vector<double> delays,
                               double tau)
    : t_d_prime_(t_d_prime), delays_(std::move(delays)), tau_(tau) {
  if (!std::isfinite(t_d_prime_)) {
    throw std::invalid_argument("departure time must be finite");
  }
  if (!std::isfinite(tau_) || tau_ < 0.0) {
    throw std::invalid_argument("propagation delay must be finite and >= 0");
  }
  validate_delays(delays_);
}

NoiseModel::NoiseModel(double sigma_a, double sigma_r)
    : sigma_a_(sigma_a), sigma_r_(sigma_r) {
  if (!std::isfinite(sigma_a_) || sigma_a_ < 0.0) {
    throw std::invalid_argument("sigma_a must be finite and >= 0");
  }
  if (!std::isfinite(sigma_r_) || sigma_r_ < 0.0) {
    throw std::invalid_argument("sigma_r must be finite and >= 0");
  }
}

}  // namespace twsync
