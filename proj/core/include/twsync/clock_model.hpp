#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace twsync {

// Linear model of an imperfect clock relative to a perfect one:
//   t' = alpha * t + gamma,  alpha = 1 + nu,  nu = nu_ppm * 1e-6.
// All times are seconds.
class ClockParams {
 public:
  // Throws std::invalid_argument unless both inputs are finite and the
  // resulting alpha is strictly positive.
  static ClockParams from_ppm(double nu_ppm, double gamma_s);

  // Perfect clock: alpha = 1, gamma = 0.
  ClockParams() = default;

  double alpha() const { return alpha_; }
  double nu() const { return alpha_ - 1.0; }
  double nu_ppm() const { return nu_ppm_; }
  double gamma() const { return gamma_; }

  friend bool operator==(const ClockParams&, const ClockParams&) = default;

 private:
  ClockParams(double nu_ppm, double alpha, double gamma)
      : nu_ppm_(nu_ppm), alpha_(alpha), gamma_(gamma) {}

  double nu_ppm_ = 0.0;
  double alpha_ = 1.0;
  double gamma_ = 0.0;
};

// Reading of the imperfect clock at true time t.
double local_from_true(double t, const ClockParams& clock);

// True time at which the imperfect clock reads t_prime.
double true_from_local(double t_prime, const ClockParams& clock);

// Parameters of one two-way exchange.
//
// t_d_prime: departure time of the initiating signal on the imperfect clock.
// delays:    reply waits delta_1 < ... < delta_N on the perfect clock, N >= 2.
// tau:       one-way propagation delay (simulation ground truth).
class ProtocolConfig {
 public:
  // Throws std::invalid_argument on N < 2, non-positive or non-increasing
  // delays, negative tau, or non-finite values.
  ProtocolConfig(double t_d_prime, std::vector<double> delays, double tau);

  double t_d_prime() const { return t_d_prime_; }
  std::span<const double> delays() const { return delays_; }
  double tau() const { return tau_; }
  std::size_t n() const { return delays_.size(); }

  friend bool operator==(const ProtocolConfig&,
                         const ProtocolConfig&) = default;

 private:
  double t_d_prime_;
  std::vector<double> delays_;
  double tau_;
};

// Standard deviations of the arrival-time estimation errors.
// sigma_a applies to the TOA measured on the perfect clock, sigma_r to each
// TOR measured on the imperfect clock. Zero is allowed for simulation; every
// quantity that needs the inverse covariance requires sigma_r > 0.
class NoiseModel {
 public:
  NoiseModel(double sigma_a, double sigma_r);

  double sigma_a() const { return sigma_a_; }
  double sigma_r() const { return sigma_r_; }
  double sigma_a2() const { return sigma_a_ * sigma_a_; }
  double sigma_r2() const { return sigma_r_ * sigma_r_; }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  double sigma_a_;
  double sigma_r_;
};

// Throws std::invalid_argument if delays are not a valid reply schedule.
void validate_delays(std::span<const double> delays);

}  // namespace twsync
