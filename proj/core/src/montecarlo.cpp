#include "twsync/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "twsync/crlb.hpp"
#include "twsync/empirical.hpp"
#include "twsync/mle.hpp"

namespace twsync {
namespace {

constexpr std::array<std::string_view, kEstimatorCount> kEstimatorNames = {
    "alpha1", "alpha2", "tau1", "tau2", "gamma11", "gamma12", "gamma21",
    "gamma22"};

constexpr std::array<std::pair<SweepAxis, std::string_view>, 4> kAxisNames = {{
    {SweepAxis::kSigmaA, "sigma_a"},
    {SweepAxis::kSigmaR, "sigma_r"},
    {SweepAxis::kDeltaMax, "delta_n_max"},
    {SweepAxis::kReplies, "n_replies"},
}};

using TrialResult = std::array<std::optional<double>, kEstimatorCount>;

void set(TrialResult& r, Estimator e, std::optional<double> v) {
  r[static_cast<std::size_t>(e)] = v;
}

double truth_of(const Scenario& s, Estimator e) {
  switch (e) {
    case Estimator::kAlpha1:
    case Estimator::kAlpha2:
      return s.clock.alpha();
    case Estimator::kTau1:
    case Estimator::kTau2:
      return s.config.tau();
    default:
      return s.clock.gamma();
  }
}

EstimatorSummary summarize(const std::vector<TrialResult>& results,
                           std::size_t index, double truth) {
  EstimatorSummary out;
  out.truth = truth;
  double sum = 0.0;
  for (const auto& r : results) {
    if (r[index]) {
      sum += *r[index];
      ++out.successes;
    } else {
      ++out.failures;
    }
  }
  if (out.successes == 0) {
    out.mean = out.bias = out.std_dev = std::nan("");
    return out;
  }
  out.mean = sum / static_cast<double>(out.successes);
  out.bias = out.mean - truth;
  double ss = 0.0;
  for (const auto& r : results) {
    if (r[index]) ss += (*r[index] - out.mean) * (*r[index] - out.mean);
  }
  out.std_dev = out.successes > 1
                    ? std::sqrt(ss / static_cast<double>(out.successes - 1))
                    : 0.0;
  return out;
}

}  // namespace

std::string_view estimator_name(Estimator e) {
  return kEstimatorNames[static_cast<std::size_t>(e)];
}

void Scenario::validate() const {
  if (trials < 2) {
    throw std::invalid_argument("a scenario needs at least 2 trials");
  }
}

std::optional<double> EstimatorStats::predicted_std(Estimator e) const {
  switch (e) {
    case Estimator::kAlpha1:
      return kappa_alpha1;
    case Estimator::kAlpha2:
      return kappa_alpha2;
    case Estimator::kTau2:
      return kappa_tau2;
    default:
      return std::nullopt;
  }
}

std::array<std::optional<double>, kEstimatorCount> evaluate_trial(
    const Scenario& s, std::uint64_t trial) {
  const ObservationSet obs =
      run_exchange(s.config, s.clock, s.noise, s.rng, trial);
  TrialResult r;

  const Alpha1Estimate a1 = estimate_alpha1(obs, s.noise);
  set(r, Estimator::kAlpha1, a1.alpha1);
  if (a1.alpha1 > 0.0) {
    const double tau1 = estimate_tau1(obs, a1.alpha1);
    set(r, Estimator::kTau1, tau1);
    const GammaPair g1 = estimate_gamma_empirical(obs, a1.alpha1, tau1);
    set(r, Estimator::kGamma11, g1.averaged);
    set(r, Estimator::kGamma12, g1.direct);
  }

  const MleEstimate mle = estimate_mle(obs, s.noise);
  set(r, Estimator::kAlpha2, mle.alpha2);
  set(r, Estimator::kTau2, mle.tau2);
  set(r, Estimator::kGamma21, mle.gamma21);
  set(r, Estimator::kGamma22, mle.gamma22);
  return r;
}

EstimatorStats run_trials(const Scenario& s, unsigned threads) {
  s.validate();
  const std::size_t m = s.trials;
  std::vector<TrialResult> results(m);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(1, m / 256)));

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) results[t] = evaluate_trial(s, t);
  };
  if (threads <= 1) {
    run_range(0, m);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (m + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(m, w * chunk);
      const std::size_t end = std::min(m, begin + chunk);
      workers.emplace_back(run_range, begin, end);
    }
  }

  EstimatorStats stats;
  stats.trials = m;
  for (Estimator e : kAllEstimators) {
    const auto i = static_cast<std::size_t>(e);
    stats.per_estimator[i] = summarize(results, i, truth_of(s, e));
  }
  stats.low_snr = is_low_snr(stats[Estimator::kTau2].failures, m);

  if (s.noise.sigma_r() > 0.0) {
    const auto ideal = ideal_observations(s.config, s.clock);
    stats.kappa_alpha1 = std::sqrt(estimate_alpha1(ideal, s.noise).alpha1_var);
    const CrlbReport bound = crlb_alpha_tau(s.clock.alpha(), s.config.tau(),
                                            s.config.delays(), s.noise);
    stats.kappa_alpha2 = std::sqrt(bound.c_alpha);
    stats.kappa_tau2 = std::sqrt(bound.c_tau);
  }
  return stats;
}

std::string_view axis_name(SweepAxis axis) {
  for (const auto& [a, name] : kAxisNames) {
    if (a == axis) return name;
  }
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name) {
  for (const auto& [a, n] : kAxisNames) {
    if (n == name) return a;
  }
  return std::nullopt;
}

std::string legal_axis_names() {
  std::string out;
  for (const auto& [a, name] : kAxisNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("sweep grid must be strictly increasing");
    }
  }
  base.validate();
}

bool SweepTable::all_succeeded() const {
  return std::all_of(points.begin(), points.end(),
                     [](const SweepPoint& p) { return p.stats.has_value(); });
}

Scenario scenario_at(const SweepSpec& spec, double value) {
  const Scenario& base = spec.base;
  const ProtocolConfig& cfg = base.config;
  switch (spec.axis) {
    case SweepAxis::kSigmaA:
      return {base.clock, cfg, NoiseModel(value, base.noise.sigma_r()),
              base.trials, base.rng};
    case SweepAxis::kSigmaR:
      return {base.clock, cfg, NoiseModel(base.noise.sigma_a(), value),
              base.trials, base.rng};
    case SweepAxis::kDeltaMax: {
      if (!std::isfinite(value) || !(value > 0.0)) {
        throw std::invalid_argument("delta_n_max must be > 0");
      }
      const double scale = value / cfg.delays().back();
      std::vector<double> delays(cfg.delays().begin(), cfg.delays().end());
      for (double& d : delays) d *= scale;
      // Pin the last delay to the grid value exactly.
      delays.back() = value;
      return {base.clock, ProtocolConfig(cfg.t_d_prime(), delays, cfg.tau()),
              base.noise, base.trials, base.rng};
    }
    case SweepAxis::kReplies: {
      if (!(value >= 2.0) || value != std::floor(value)) {
        throw std::invalid_argument("n_replies must be an integer >= 2");
      }
      auto delays =
          linear_delays(static_cast<std::size_t>(value), cfg.delays().back());
      return {base.clock,
              ProtocolConfig(cfg.t_d_prime(), std::move(delays), cfg.tau()),
              base.noise, base.trials, base.rng};
    }
  }
  throw std::invalid_argument("unknown sweep axis");
}

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  SweepTable table{spec.axis, spec.base.rng.seed, {}};
  for (double value : spec.grid) {
    SweepPoint point;
    point.value = value;
    try {
      point.stats = run_trials(scenario_at(spec, value), threads);
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    table.points.push_back(std::move(point));
  }
  return table;
}

}  // namespace twsync
