// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any fails.
//
//   twsync_acceptance [--tool PATH] [--work DIR] [criterion ...]
//
// With --tool, criterion 10 also runs the built executable twice per command
// and compares the written files.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "test_support.hpp"
#include "twsync/crlb.hpp"
#include "twsync/empirical.hpp"
#include "twsync/mle.hpp"
#include "twsync/montecarlo.hpp"
#include "twsync/numerics.hpp"

namespace {

using namespace twsync;
using testing::default_scenario;
using testing::rel_err;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages; everything else goes to a summary.
class Checker {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
  }
  Outcome done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, std::to_string(failures_) + "/" + std::to_string(checks_) +
                       " checks failed: " + messages_};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::string messages_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Options {
  std::string tool;
  std::filesystem::path work = std::filesystem::temp_directory_path() / "twsync_acceptance";
};

// Lazily shared default run for criteria 3, 4 and 9.
const EstimatorStats& default_run() {
  static const EstimatorStats stats = run_trials(default_scenario(10000));
  return stats;
}

Outcome toa_anchor(const Options&) {
  Checker c;
  const double s10 = std::sqrt(toa_crlb(std::pow(10.0, 1.0), 45.14e9));
  const double s30 = std::sqrt(toa_crlb(std::pow(10.0, 3.0), 45.14e9));
  c.check(rel_err(s10, 7.0e-12) <= 0.02, fmt("10 dB gives %.4g s", s10));
  c.check(rel_err(s30, 0.70e-12) <= 0.02, fmt("30 dB gives %.4g s", s30));
  return c.done(fmt("sqrt(c_T) = %.4g ps at 10 dB, %.4g ps at 30 dB", s10 * 1e12,
                    s30 * 1e12));
}

Outcome error_free(const Options&) {
  Checker c;
  testing::SetupGenerator gen(1002);
  double worst_rel = 0.0, worst_gamma = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto s = gen.next_exact();
    const auto obs = ideal_observations(s.config, s.clock);
    const auto emp = estimate_empirical(obs, s.noise);
    const auto mle = estimate_mle(obs, s.noise);
    const double alpha = s.clock.alpha(), tau = s.config.tau(), gamma = s.clock.gamma();

    const double rels[] = {rel_err(emp.alpha1, alpha), rel_err(mle.alpha2, alpha),
                           rel_err(emp.tau1, tau),
                           mle.tau2 ? rel_err(*mle.tau2, tau) : INFINITY};
    for (double r : rels) {
      worst_rel = std::max(worst_rel, r);
      c.check(r <= 1e-12, "config " + std::to_string(i) + fmt(": rel err %.3g", r));
    }
    for (const auto& g : {emp.gamma11, emp.gamma12, mle.gamma21, mle.gamma22}) {
      const double e = g ? std::abs(*g - gamma) : INFINITY;
      worst_gamma = std::max(worst_gamma, e);
      c.check(e <= 1e-15, "config " + std::to_string(i) + fmt(": offset err %.3g s", e));
    }
  }
  return c.done(fmt("100 configs, worst rel err %.3g, worst offset err %.3g s",
                    worst_rel, worst_gamma));
}

Outcome mle_drift(const Options&) {
  const auto& st = default_run();
  const double kappa = std::sqrt(crlb_alpha_tau(1.00002, 100e-9,
                                                linear_delays(4, 1e-3),
                                                NoiseModel(0.1e-9, 0.1e-9))
                                     .c_alpha);
  Checker c;
  c.check(rel_err(kappa, 1.78885e-7) <= 1e-5, fmt("bound %.6g", kappa));
  const double ratio = st[Estimator::kAlpha2].std_dev / kappa;
  c.check(std::abs(ratio - 1.0) <= 0.07, fmt("std/bound %.4f", ratio));
  return c.done(fmt("std %.5g vs bound %.5g (ratio %.4f), M = 10000",
                    st[Estimator::kAlpha2].std_dev, kappa, ratio));
}

Outcome mle_delay(const Options&) {
  const auto& st = default_run();
  Checker c;
  c.check(st.kappa_tau2.has_value(), "no delay bound");
  const double kappa = st.kappa_tau2.value_or(NAN);
  c.check(std::abs(kappa - 79.06e-12) <= 0.01e-12, fmt("bound %.6g", kappa));
  const double ratio = st[Estimator::kTau2].std_dev / kappa;
  c.check(std::abs(ratio - 1.0) <= 0.07, fmt("std/bound %.4f", ratio));
  c.check(st[Estimator::kTau2].failures == 0, "degenerate trials at defaults");
  return c.done(fmt("std %.5g ps vs bound %.5g ps (ratio %.4f)",
                    st[Estimator::kTau2].std_dev * 1e12, kappa * 1e12, ratio));
}

Outcome empirical_is_optimal(const Options&) {
  Checker c;
  testing::SetupGenerator gen(1005);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto s = gen.next(64);
    const auto obs = ideal_observations(s.config, s.clock);
    const double inv_a = estimate_alpha1(obs, s.noise).alpha1_var;
    const double c_alpha =
        crlb_alpha_tau(s.clock.alpha(), s.config.tau(), s.config.delays(), s.noise).c_alpha;
    const double r = rel_err(inv_a, c_alpha);
    worst = std::max(worst, r);
    c.check(r <= 1e-9, "config " + std::to_string(i) + fmt(": rel %.3g", r));
  }
  return c.done(fmt("100 configs, worst rel diff %.3g", worst));
}

Outcome inverse_oracle(const Options&) {
  Checker c;
  testing::SetupGenerator gen(1006);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = gen.uniform_n(1, 64);
    const CovX cov(std::pow(gen.log_uniform(0.01e-9, 1e-9), 2),
                   std::pow(gen.log_uniform(0.01e-9, 1e-9), 2), n);
    const auto dense = generic_spd_inverse(DenseSymMatrix::from_cov(cov));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> unit(n, 0.0);
      unit[j] = 1.0;
      const auto col = covx_inv_apply(cov, unit);
      for (std::size_t k = 0; k < n; ++k) {
        const double r = rel_err(col[k], dense(k, j));
        worst = std::max(worst, r);
        c.check(r <= 1e-10, "n=" + std::to_string(n) + fmt(": rel %.3g", r));
      }
    }
  }
  return c.done(fmt("100 configs up to N = 64, worst elementwise rel diff %.3g", worst));
}

SweepTable sweep_defaults(SweepAxis axis, std::vector<double> grid) {
  SweepSpec spec{axis, std::move(grid), default_scenario(10000)};
  return run_sweep(spec);
}

Outcome drift_bound_ignores_sigma_a(const Options&) {
  Checker c;
  const auto table = sweep_defaults(SweepAxis::kSigmaA, {0.01e-9, 0.1e-9, 1e-9});
  c.check(table.all_succeeded(), "sweep point failed");
  std::vector<double> bounds;
  std::string ratios;
  for (const auto& p : table.points) {
    if (!p.stats) continue;
    const auto s = scenario_at({SweepAxis::kSigmaA, {p.value}, default_scenario(10000)},
                               p.value);
    bounds.push_back(
        crlb_alpha_tau(s.clock.alpha(), s.config.tau(), s.config.delays(), s.noise).c_alpha);
    const double kappa = std::sqrt(bounds.back());
    c.check(p.stats->kappa_alpha2 == kappa, "reported bound differs from c_alpha");
    for (Estimator e : {Estimator::kAlpha1, Estimator::kAlpha2}) {
      const double ratio = (*p.stats)[e].std_dev / kappa;
      ratios += fmt(" %.3f", ratio);
      c.check(std::abs(ratio - 1.0) <= 0.07,
              std::string(estimator_name(e)) + fmt(" at sigma_a %.3g: ratio %.4f", p.value, ratio));
    }
  }
  for (double b : bounds) c.check(b == bounds.front(), "c_alpha not bit-identical");
  return c.done(fmt("c_alpha = %.17g at every point; std/bound", bounds.front()) + ratios);
}

// Log-log least-squares slope.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (double v : x) lx.push_back(std::log(v));
  for (double v : y) ly.push_back(std::log(v));
  return fit_line(lx, ly).slope;
}

Outcome trends(const Options&) {
  Checker c;
  const std::vector<double> sigma_grid = {0.01e-9, 0.1e-9, 1e-9};

  auto strictly_increasing = [&](const SweepTable& t, Estimator e) {
    for (std::size_t k = 1; k < t.points.size(); ++k) {
      const double prev = (*t.points[k - 1].stats)[e].std_dev;
      const double cur = (*t.points[k].stats)[e].std_dev;
      c.check(cur > prev, std::string(axis_name(t.axis)) + " " +
                              std::string(estimator_name(e)) +
                              fmt(": %.4g then %.4g", prev, cur));
    }
  };

  const auto by_sigma_a = sweep_defaults(SweepAxis::kSigmaA, sigma_grid);
  const auto by_sigma_r = sweep_defaults(SweepAxis::kSigmaR, sigma_grid);
  const auto by_delta = sweep_defaults(SweepAxis::kDeltaMax, {1e-4, 1e-3, 1e-2});
  const auto by_n = sweep_defaults(SweepAxis::kReplies, {2, 4, 8, 16});
  for (const auto* t : {&by_sigma_a, &by_sigma_r, &by_delta, &by_n}) {
    c.check(t->all_succeeded(), std::string(axis_name(t->axis)) + " sweep point failed");
    if (!t->all_succeeded()) return c.done("");
  }

  for (Estimator e : {Estimator::kTau1, Estimator::kTau2, Estimator::kGamma11,
                      Estimator::kGamma12, Estimator::kGamma21, Estimator::kGamma22}) {
    strictly_increasing(by_sigma_a, e);
  }
  strictly_increasing(by_sigma_r, Estimator::kAlpha1);
  strictly_increasing(by_sigma_r, Estimator::kAlpha2);

  std::vector<double> deltas, kappas, sims;
  for (const auto& p : by_delta.points) {
    deltas.push_back(p.value);
    kappas.push_back(p.stats->kappa_alpha2.value_or(NAN));
    sims.push_back((*p.stats)[Estimator::kAlpha2].std_dev);
  }
  const double slope = loglog_slope(deltas, kappas);
  c.check(std::abs(slope + 1.0) <= 0.02, fmt("kappa_alpha2 slope %.4f", slope));

  for (Estimator e : kAllEstimators) {
    for (std::size_t k = 1; k < by_n.points.size(); ++k) {
      const double prev = (*by_n.points[k - 1].stats)[e].std_dev;
      const double cur = (*by_n.points[k].stats)[e].std_dev;
      c.check(cur <= prev, std::string("n_replies ") + std::string(estimator_name(e)) +
                               fmt(" at N=%g: %.4g after %.4g", by_n.points[k].value, cur, prev));
    }
  }
  return c.done(fmt("kappa_alpha2 slope %.5f (simulated %.4f); all orderings hold", slope,
                    loglog_slope(deltas, sims)));
}

Outcome unbiased(const Options&) {
  Checker c;
  const auto& st = default_run();
  const double m = static_cast<double>(st.trials);
  double worst = 0.0;
  for (Estimator e : kAllEstimators) {
    const auto& s = st[e];
    const double z = std::abs(s.mean - s.truth) / (s.std_dev / std::sqrt(m));
    worst = std::max(worst, z);
    c.check(z <= 3.0, std::string(estimator_name(e)) + fmt(": |bias| = %.3g std errors", z));
  }
  return c.done(fmt("largest |bias| = %.3g standard errors over 8 estimators", worst));
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism(const Options& opt) {
  using namespace twsync::cli;
  Checker c;
  const std::string config_text =
      "[run]\ntrials = 2000\nseed = 5150\n"
      "[sweep]\naxis = sigma_r\nvalues = 1e-11, 1e-10, 1e-9\n";
  std::istringstream in(config_text);
  const RunConfig config = parse_config(in);

  using Command = std::function<int(std::ostream&, std::ostream&)>;
  const std::map<std::string, Command> commands = {
      {"simulate", [&](std::ostream& o, std::ostream& e) { return cmd_simulate(config, o, e); }},
      {"estimate",
       [&](std::ostream& o, std::ostream& e) { return cmd_estimate(config, std::nullopt, o, e); }},
      {"crlb", [&](std::ostream& o, std::ostream& e) { return cmd_crlb(config, o, e); }},
      {"sweep", [&](std::ostream& o, std::ostream& e) { return cmd_sweep(config, o, e, 1); }},
  };
  for (const auto& [name, run] : commands) {
    std::ostringstream a, b, err;
    run(a, err);
    run(b, err);
    c.check(!a.str().empty() && a.str() == b.str(), name + " output differs in process");
  }
  std::ostringstream one_thread, many_threads, err;
  cmd_sweep(config, one_thread, err, 1);
  cmd_sweep(config, many_threads, err, 7);
  c.check(one_thread.str() == many_threads.str(), "sweep output depends on thread count");

  std::string how = "in-process commands";
  if (!opt.tool.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.work);
    const fs::path conf = opt.work / "determinism.conf";
    std::ofstream(conf) << config_text;
    for (const auto& [name, run] : commands) {
      std::string outputs[2];
      for (int i = 0; i < 2; ++i) {
        const fs::path out = opt.work / (name + std::to_string(i) + ".csv");
        const std::string cmd = "\"" + opt.tool + "\" " + name + " --config \"" +
                                conf.string() + "\" --out \"" + out.string() + "\"";
        c.check(std::system(cmd.c_str()) == 0, name + " exited nonzero");
        outputs[i] = read_file(out);
      }
      c.check(!outputs[0].empty() && outputs[0] == outputs[1], name + " files differ");
    }
    how += " and executable output files";
  }
  return c.done(how + " byte-identical across repeat runs");
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)(const Options&);
};

const Criterion kCriteria[] = {
    {1, "TOA bound anchors", toa_anchor},
    {2, "error-free exactness", error_free},
    {3, "MLE drift efficiency", mle_drift},
    {4, "MLE delay efficiency", mle_delay},
    {5, "empirical drift meets bound", empirical_is_optimal},
    {6, "structured inverse matches dense", inverse_oracle},
    {7, "drift bound independent of sigma_a", drift_bound_ignores_sigma_a},
    {8, "trend suite", trends},
    {9, "unbiasedness", unbiased},
    {10, "determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--tool" && i + 1 < argc) {
      opt.tool = argv[++i];
    } else if (arg == "--work" && i + 1 < argc) {
      opt.work = argv[++i];
    } else {
      char* end = nullptr;
      const long id = std::strtol(arg.c_str(), &end, 10);
      if (*end != '\0' || id < 1 || id > 10) {
        std::fprintf(stderr, "usage: %s [--tool PATH] [--work DIR] [criterion ...]\n", argv[0]);
        return 2;
      }
      only.insert(static_cast<int>(id));
    }
  }

  int failed = 0;
  for (const auto& crit : kCriteria) {
    if (!only.empty() && !only.count(crit.id)) continue;
    Outcome o;
    try {
      o = crit.run(opt);
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", crit.id, crit.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
