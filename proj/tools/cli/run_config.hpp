#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twsync/montecarlo.hpp"

namespace twsync::cli {

// Bad config content. key() is "section.key", or empty for syntax errors
// that are not tied to a key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// One noise role: either a direct std or an (SNR, bandwidth) pair that is
// turned into a std through the TOA bound.
struct NoiseRole {
  std::optional<double> sigma_s;
  std::optional<double> snr_db;
  std::optional<double> beta_hz;

  // Std in seconds.
  double resolve() const;
  bool operator==(const NoiseRole&) const = default;
};

struct SweepConfig {
  SweepAxis axis = SweepAxis::kSigmaA;
  std::vector<double> values;
  bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
  double nu_ppm = 20.0;
  double gamma_s = 1e-6;

  double tau_s = 100e-9;
  double t_d_prime_s = 0.0;
  // Explicit schedule; when empty the linear (n, delta_max_s) form is used.
  std::optional<std::vector<double>> delays_s;
  std::size_t n = 4;
  double delta_max_s = 1e-3;

  NoiseRole noise_a{0.1e-9, std::nullopt, std::nullopt};
  NoiseRole noise_r{0.1e-9, std::nullopt, std::nullopt};

  std::size_t trials = 10000;
  std::uint64_t seed = 20240601;

  std::optional<SweepConfig> sweep;

  bool operator==(const RunConfig&) const = default;

  std::vector<double> delays() const;
  ClockParams clock() const;
  ProtocolConfig protocol() const;
  NoiseModel noise() const;
  Scenario scenario() const;
  // Throws ConfigError when the config has no [sweep] section.
  SweepSpec sweep_spec() const;
};

// Parses the sectioned key = value format. Missing keys keep their defaults.
// Throws ConfigError naming the offending key.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

}  // namespace twsync::cli
