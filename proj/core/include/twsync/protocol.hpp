#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "twsync/clock_model.hpp"

namespace twsync {

// Timestamps available to the imperfect-clock transceiver after one exchange.
//
// t_a_hat is the TOA measured by the perfect-clock side and echoed back in the
// replies; it is absent when the replies do not carry it, in which case only
// drift and delay can be estimated. t_r_hat[n] is the n-th TOR on the
// imperfect clock. t_d_prime and delays echo the protocol parameters the
// estimators need.
struct ObservationSet {
  std::optional<double> t_a_hat;
  std::vector<double> t_r_hat;
  double t_d_prime = 0.0;
  std::vector<double> delays;

  std::size_t n() const { return t_r_hat.size(); }

  // Throws std::invalid_argument if t_r_hat and delays differ in length or
  // hold fewer than two entries.
  void check_shape() const;

  friend bool operator==(const ObservationSet&,
                         const ObservationSet&) = default;
};

// Seed for the simulation noise. Every trial index owns an independent
// stream; the k-th draw of trial t depends only on (seed, t, k).
struct RngSpec {
  std::uint64_t seed = 0;

  std::mt19937_64 stream(std::uint64_t trial) const;
};

// Draw order inside a trial stream: eps_A first, then eps'_R for n = 1..N.
// Every exchange consumes exactly N + 1 standard normals, whatever the sigmas.
ObservationSet run_exchange(const ProtocolConfig& config,
                            const ClockParams& clock, const NoiseModel& noise,
                            const RngSpec& rng, std::uint64_t trial);

// Same exchange with every measurement error set to zero.
ObservationSet ideal_observations(const ProtocolConfig& config,
                                  const ClockParams& clock);

// delta_k = k * delta_max / n for k = 1..n. Throws std::invalid_argument on
// n < 2 or delta_max <= 0.
std::vector<double> linear_delays(std::size_t n, double delta_max);

}  // namespace twsync
