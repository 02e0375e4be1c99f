#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "csv_io.hpp"
#include "twsync/crlb.hpp"

namespace twsync::cli {
namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"clock", {"nu_ppm", "gamma_s"}},
      {"protocol", {"tau_s", "t_d_prime_s", "delays_s", "n", "delta_max_s", "schedule"}},
      {"noise",
       {"sigma_a_s", "sigma_r_s", "snr_db", "beta_hz", "snr_a_db", "beta_a_hz",
        "snr_r_db", "beta_r_hz"}},
      {"run", {"trials", "seed"}},
      {"sweep", {"axis", "values"}},
  };
  return keys;
}

using Entries = std::map<std::string, std::string>;  // "section.key" -> value

double number(const Entries& e, const std::string& key) {
  const auto v = parse_double(e.at(key));
  if (!v) throw ConfigError(key, "is not a finite number: '" + e.at(key) + "'");
  return *v;
}

std::vector<double> number_list(const Entries& e, const std::string& key) {
  std::vector<double> out;
  for (auto item : split(e.at(key), ',')) {
    const auto v = parse_double(item);
    if (!v) throw ConfigError(key, "has a bad list entry '" + std::string(item) + "'");
    out.push_back(*v);
  }
  return out;
}

std::uint64_t integer(const Entries& e, const std::string& key) {
  const auto v = parse_u64(e.at(key));
  if (!v) throw ConfigError(key, "is not a non-negative integer: '" + e.at(key) + "'");
  return *v;
}

// Reads one noise role from its direct key, its own SNR pair, or the shared
// snr_db/beta_hz pair. Exactly one form is allowed.
NoiseRole read_role(const Entries& e, char role, const NoiseRole& fallback) {
  const std::string sigma = std::string("noise.sigma_") + role + "_s";
  const std::string snr = std::string("noise.snr_") + role + "_db";
  const std::string beta = std::string("noise.beta_") + role + "_hz";
  const bool has_sigma = e.count(sigma) > 0;
  const bool has_own = e.count(snr) || e.count(beta);
  const bool has_shared = e.count("noise.snr_db") || e.count("noise.beta_hz");

  if (has_sigma + has_own + has_shared > 1) {
    throw ConfigError(has_sigma ? sigma : snr,
                      std::string("conflicts: give either a direct sigma or one "
                                  "SNR/bandwidth pair for role ") + role);
  }
  NoiseRole out;
  if (has_sigma) {
    out.sigma_s = number(e, sigma);
  } else if (has_own || has_shared) {
    const std::string s = has_own ? snr : "noise.snr_db";
    const std::string b = has_own ? beta : "noise.beta_hz";
    if (!e.count(s)) throw ConfigError(s, "is missing; it is needed together with " + b);
    if (!e.count(b)) throw ConfigError(b, "is missing; it is needed together with " + s);
    out.snr_db = number(e, s);
    out.beta_hz = number(e, b);
  } else {
    out = fallback;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key.empty() ? message : key + " " + message),
      key_(std::move(key)) {}

double NoiseRole::resolve() const {
  if (sigma_s) return *sigma_s;
  const double snr = std::pow(10.0, *snr_db / 10.0);
  return std::sqrt(toa_crlb(snr, *beta_hz));
}

std::vector<double> RunConfig::delays() const {
  return delays_s ? *delays_s : linear_delays(n, delta_max_s);
}

ClockParams RunConfig::clock() const {
  return ClockParams::from_ppm(nu_ppm, gamma_s);
}

ProtocolConfig RunConfig::protocol() const {
  return ProtocolConfig(t_d_prime_s, delays(), tau_s);
}

NoiseModel RunConfig::noise() const {
  return NoiseModel(noise_a.resolve(), noise_r.resolve());
}

Scenario RunConfig::scenario() const {
  return {clock(), protocol(), noise(), trials, RngSpec{seed}};
}

SweepSpec RunConfig::sweep_spec() const {
  if (!sweep) throw ConfigError("sweep", "section is missing from the config");
  return {sweep->axis, sweep->values, scenario()};
}

RunConfig parse_config(std::istream& in) {
  Entries entries;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);

    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("", where + ": unterminated section header");
      section = std::string(trim(text.substr(1, text.size() - 2)));
      if (!known_keys().count(section)) {
        throw ConfigError(section, "is an unknown section (" + where + ")");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", where + ": expected 'key = value'");
    }
    const std::string key(trim(text.substr(0, eq)));
    if (section.empty()) {
      throw ConfigError(key, "appears outside any section (" + where + ")");
    }
    const std::string full = section + "." + key;
    if (!known_keys().at(section).count(key)) {
      throw ConfigError(full, "is an unknown key (" + where + ")");
    }
    if (!entries.emplace(full, std::string(trim(text.substr(eq + 1)))).second) {
      throw ConfigError(full, "is given twice (" + where + ")");
    }
  }

  RunConfig c;
  auto has = [&](const char* key) { return entries.count(key) > 0; };

  if (has("clock.nu_ppm")) c.nu_ppm = number(entries, "clock.nu_ppm");
  if (has("clock.gamma_s")) c.gamma_s = number(entries, "clock.gamma_s");
  try {
    c.clock();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("clock.nu_ppm", std::string("is invalid: ") + e.what());
  }

  if (has("protocol.tau_s")) c.tau_s = number(entries, "protocol.tau_s");
  if (has("protocol.t_d_prime_s")) c.t_d_prime_s = number(entries, "protocol.t_d_prime_s");
  const bool schedule_form =
      has("protocol.n") || has("protocol.delta_max_s") || has("protocol.schedule");
  if (has("protocol.delays_s")) {
    if (schedule_form) {
      throw ConfigError("protocol.delays_s",
                        "conflicts with n/delta_max_s/schedule; give one form");
    }
    c.delays_s = number_list(entries, "protocol.delays_s");
  } else {
    if (has("protocol.schedule") && entries.at("protocol.schedule") != "linear") {
      throw ConfigError("protocol.schedule", "must be 'linear'");
    }
    if (has("protocol.n")) c.n = integer(entries, "protocol.n");
    if (has("protocol.delta_max_s")) c.delta_max_s = number(entries, "protocol.delta_max_s");
    if (c.n < 2) throw ConfigError("protocol.n", "must be >= 2");
    if (!(c.delta_max_s > 0.0)) throw ConfigError("protocol.delta_max_s", "must be > 0");
  }
  try {
    validate_delays(c.delays());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("protocol.delays_s", std::string("is invalid: ") + e.what());
  }
  if (!(c.tau_s >= 0.0)) throw ConfigError("protocol.tau_s", "must be >= 0");

  c.noise_a = read_role(entries, 'a', c.noise_a);
  c.noise_r = read_role(entries, 'r', c.noise_r);
  for (const auto& [role, name] : {std::pair{&c.noise_a, "a"}, std::pair{&c.noise_r, "r"}}) {
    const std::string tag = name;
    if (role->sigma_s && !(*role->sigma_s >= 0.0)) {
      throw ConfigError("noise.sigma_" + tag + "_s", "must be >= 0");
    }
    if (role->beta_hz && !(*role->beta_hz > 0.0)) {
      throw ConfigError(has("noise.beta_hz") ? "noise.beta_hz" : "noise.beta_" + tag + "_hz",
                        "must be > 0");
    }
  }

  if (has("run.trials")) c.trials = integer(entries, "run.trials");
  if (c.trials < 1) throw ConfigError("run.trials", "must be ≥ 1");
  if (has("run.seed")) c.seed = integer(entries, "run.seed");

  if (has("sweep.axis") || has("sweep.values")) {
    if (!has("sweep.axis")) throw ConfigError("sweep.axis", "is missing");
    if (!has("sweep.values")) throw ConfigError("sweep.values", "is missing");
    const auto axis = parse_axis(entries.at("sweep.axis"));
    if (!axis) {
      throw ConfigError("sweep.axis", "names an unknown axis '" + entries.at("sweep.axis") +
                                          "'; legal axes: " + legal_axis_names());
    }
    c.sweep = SweepConfig{*axis, number_list(entries, "sweep.values")};
    if (c.trials < 2) throw ConfigError("run.trials", "must be >= 2 for a sweep");
    try {
      SweepSpec{c.sweep->axis, c.sweep->values, c.scenario()}.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sweep.values", std::string("are invalid: ") + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const RunConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string out;
    for (double x : v) {
      if (!out.empty()) out += ", ";
      out += format_double(x);
    }
    return out;
  };
  auto role = [](std::ostringstream& out, const NoiseRole& r, char name) {
    if (r.sigma_s) {
      out << "sigma_" << name << "_s = " << format_double(*r.sigma_s) << "\n";
    } else {
      out << "snr_" << name << "_db = " << format_double(*r.snr_db) << "\n"
          << "beta_" << name << "_hz = " << format_double(*r.beta_hz) << "\n";
    }
  };

  std::ostringstream out;
  out << "[clock]\n"
      << "nu_ppm = " << format_double(c.nu_ppm) << "\n"
      << "gamma_s = " << format_double(c.gamma_s) << "\n\n"
      << "[protocol]\n"
      << "tau_s = " << format_double(c.tau_s) << "\n"
      << "t_d_prime_s = " << format_double(c.t_d_prime_s) << "\n";
  if (c.delays_s) {
    out << "delays_s = " << list(*c.delays_s) << "\n";
  } else {
    out << "n = " << c.n << "\n"
        << "delta_max_s = " << format_double(c.delta_max_s) << "\n"
        << "schedule = linear\n";
  }
  out << "\n[noise]\n";
  role(out, c.noise_a, 'a');
  role(out, c.noise_r, 'r');
  out << "\n[run]\n"
      << "trials = " << c.trials << "\n"
      << "seed = " << c.seed << "\n";
  if (c.sweep) {
    out << "\n[sweep]\n"
        << "axis = " << axis_name(c.sweep->axis) << "\n"
        << "values = " << list(c.sweep->values) << "\n";
  }
  return out.str();
}

}  // namespace twsync::cli
