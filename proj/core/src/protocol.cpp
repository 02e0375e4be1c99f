#include "twsync/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace twsync {
namespace {

// Exchange with caller-supplied errors. eps_r holds the TOR errors on the
// imperfect clock, already scaled.
ObservationSet assemble(const ProtocolConfig& config, const ClockParams& clock,
                        double eps_a, std::span<const double> eps_r) {
  const double alpha = clock.alpha();
  const double t_d_prime = config.t_d_prime();
  const double tau = config.tau();

  ObservationSet obs;
  obs.t_d_prime = t_d_prime;
  obs.delays.assign(config.delays().begin(), config.delays().end());

  // Step 1-2: true arrival at the perfect-clock side, then its estimate.
  const double t_a = true_from_local(t_d_prime, clock) + tau;
  obs.t_a_hat = t_a + eps_a;

  // Step 3-4: replies leave after delta_n (on the perfect clock) and their
  // arrivals are read on the imperfect clock.
  obs.t_r_hat.resize(config.n());
  for (std::size_t n = 0; n < config.n(); ++n) {
    const double delta = config.delays()[n];
    obs.t_r_hat[n] =
        t_d_prime + alpha * (2.0 * tau + delta) + alpha * eps_a + eps_r[n];
  }
  return obs;
}

}  // namespace

void ObservationSet::check_shape() const {
  if (t_r_hat.size() != delays.size()) {
    throw std::invalid_argument(
        "observation has " + std::to_string(t_r_hat.size()) +
        " TORs but " + std::to_string(delays.size()) + " reply delays");
  }
  if (t_r_hat.size() < 2) {
    throw std::invalid_argument("at least two TORs are required");
  }
}

std::mt19937_64 RngSpec::stream(std::uint64_t trial) const {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

ObservationSet run_exchange(const ProtocolConfig& config,
                            const ClockParams& clock, const NoiseModel& noise,
                            const RngSpec& rng, std::uint64_t trial) {
  auto engine = rng.stream(trial);
  std::normal_distribution<double> unit(0.0, 1.0);

  const double eps_a = noise.sigma_a() * unit(engine);
  // TOR error std on the imperfect clock is alpha * sigma_r.
  const double sigma_r_local = clock.alpha() * noise.sigma_r();
  std::vector<double> eps_r(config.n());
  for (double& e : eps_r) e = sigma_r_local * unit(engine);

  return assemble(config, clock, eps_a, eps_r);
}

ObservationSet ideal_observations(const ProtocolConfig& config,
                                  const ClockParams& clock) {
  const std::vector<double> zeros(config.n(), 0.0);
  return assemble(config, clock, 0.0, zeros);
}

std::vector<double> linear_delays(std::size_t n, double delta_max) {
  if (n < 2) {
    throw std::invalid_argument("the reply schedule needs N >= 2, got " +
                                std::to_string(n));
  }
  if (!std::isfinite(delta_max) || !(delta_max > 0.0)) {
    throw std::invalid_argument("delta_max must be finite and > 0");
  }
  std::vector<double> delays(n);
  for (std::size_t k = 1; k <= n; ++k) {
    delays[k - 1] = delta_max * (static_cast<double>(k) / static_cast<double>(n));
  }
  return delays;
}

}  // namespace twsync
