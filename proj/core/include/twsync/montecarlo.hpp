#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twsync/clock_model.hpp"
#include "twsync/protocol.hpp"

namespace twsync {

enum class Estimator : std::size_t {
  kAlpha1,
  kAlpha2,
  kTau1,
  kTau2,
  kGamma11,
  kGamma12,
  kGamma21,
  kGamma22,
};
inline constexpr std::size_t kEstimatorCount = 8;

// Stable lowercase name used in reports ("alpha1", "tau2", "gamma21", ...).
std::string_view estimator_name(Estimator e);
inline constexpr std::array<Estimator, kEstimatorCount> kAllEstimators = {
    Estimator::kAlpha1,  Estimator::kAlpha2,  Estimator::kTau1,
    Estimator::kTau2,    Estimator::kGamma11, Estimator::kGamma12,
    Estimator::kGamma21, Estimator::kGamma22};

struct Scenario {
  ClockParams clock;
  ProtocolConfig config;
  NoiseModel noise;
  std::size_t trials;
  RngSpec rng;

  // Throws std::invalid_argument when trials < 2.
  void validate() const;
};

// Sample statistics of one estimator. Trials where the estimator is undefined
// (degenerate tau2 and the offsets built on it) are counted in `failures` and
// left out of mean and std.
struct EstimatorSummary {
  double truth = 0.0;
  double mean = 0.0;
  double bias = 0.0;
  double std_dev = 0.0;  // divisor M - 1
  std::size_t successes = 0;
  std::size_t failures = 0;
};

struct EstimatorStats {
  std::array<EstimatorSummary, kEstimatorCount> per_estimator{};
  std::size_t trials = 0;

  // Predicted standard deviations: sqrt(1/A), sqrt(c_alpha), sqrt(c_tau) at
  // the true parameters. Empty when sigma_r = 0.
  std::optional<double> kappa_alpha1;
  std::optional<double> kappa_alpha2;
  std::optional<double> kappa_tau2;

  // More than 1% of trials hit the degenerate tau2 path.
  bool low_snr = false;

  const EstimatorSummary& operator[](Estimator e) const {
    return per_estimator[static_cast<std::size_t>(e)];
  }
  std::optional<double> predicted_std(Estimator e) const;
};

// True when more than 1% of trials were degenerate.
inline bool is_low_snr(std::size_t degenerate, std::size_t trials) {
  return 100 * degenerate > trials;
}

// One trial: every estimator applied to one simulated exchange. Entries are
// empty where the estimator is undefined for that trial.
std::array<std::optional<double>, kEstimatorCount> evaluate_trial(
    const Scenario& s, std::uint64_t trial);

// Runs trials 0..M-1. Trials are split across `threads` workers (0 picks the
// hardware concurrency); each trial draws from its own stream and the
// reduction runs in trial order, so the result does not depend on `threads`.
EstimatorStats run_trials(const Scenario& s, unsigned threads = 0);

enum class SweepAxis { kSigmaA, kSigmaR, kDeltaMax, kReplies };

std::string_view axis_name(SweepAxis axis);
// Returns std::nullopt for an unknown name.
std::optional<SweepAxis> parse_axis(std::string_view name);
// Comma-separated list of legal axis names, for error messages.
std::string legal_axis_names();

struct SweepSpec {
  SweepAxis axis;
  std::vector<double> grid;
  Scenario base;

  // Throws std::invalid_argument for an empty or non-increasing grid.
  void validate() const;
};

struct SweepPoint {
  double value = 0.0;
  std::optional<EstimatorStats> stats;
  std::string error;  // set when stats is empty
};

struct SweepTable {
  SweepAxis axis;
  std::uint64_t seed = 0;
  std::vector<SweepPoint> points;

  bool all_succeeded() const;
};

// Scenario at one grid point. sigma axes replace the noise std; the
// delta_max axis rescales the schedule so its last delay equals the value;
// the replies axis regenerates a linear schedule with the base's last delay.
// Throws std::invalid_argument when the value is not valid for the axis.
Scenario scenario_at(const SweepSpec& spec, double value);

// Every grid point reuses the base seed, so point k and point j see the same
// per-trial noise streams (common random numbers) and grid order does not
// matter. Failures at a point are recorded and the sweep continues.
SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

}  // namespace twsync
