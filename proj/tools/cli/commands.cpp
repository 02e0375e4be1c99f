#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <unistd.h>

#include "twsync/crlb.hpp"
#include "twsync/empirical.hpp"
#include "twsync/mle.hpp"
#include "twsync/montecarlo.hpp"

namespace twsync::cli {
namespace {

void write_estimate_row(std::ostream& out, std::uint64_t trial,
                        const ObservationSet& obs, const NoiseModel& noise) {
  const Alpha1Estimate a1 = estimate_alpha1(obs, noise);
  std::optional<double> tau1;
  GammaPair g1{};
  bool have_g1 = false;
  if (a1.alpha1 > 0.0) {
    tau1 = estimate_tau1(obs, a1.alpha1);
    if (obs.t_a_hat) {
      g1 = estimate_gamma_empirical(obs, a1.alpha1, *tau1);
      have_g1 = true;
    }
  }
  const MleEstimate mle = estimate_mle(obs, noise);

  out << trial << ',' << format_double(a1.alpha1) << ','
      << format_double(mle.alpha2) << ',' << format_optional(tau1) << ','
      << format_optional(mle.tau2) << ','
      << (have_g1 ? format_double(g1.averaged) : "") << ','
      << (have_g1 ? format_double(g1.direct) : "") << ','
      << format_optional(mle.gamma21) << ',' << format_optional(mle.gamma22)
      << ',' << (mle.degenerate() ? 1 : 0) << '\n';
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Scenario s = config.scenario();
  out << "trial,t_a_hat_s,r_index,t_r_hat_s\n";
  for (std::uint64_t t = 0; t < s.trials; ++t) {
    const ObservationSet obs = run_exchange(s.config, s.clock, s.noise, s.rng, t);
    const std::string t_a = format_double(*obs.t_a_hat);
    for (std::size_t k = 0; k < obs.n(); ++k) {
      out << t << ',' << t_a << ',' << k + 1 << ','
          << format_double(obs.t_r_hat[k]) << '\n';
    }
  }
  return 0;
}

int cmd_estimate(const RunConfig& config,
                 const std::optional<ObservationTable>& observations,
                 std::ostream& out, std::ostream& err) {
  const Scenario s = config.scenario();
  if (observations && !observations->has_t_a_hat) {
    err << "warning: observations have no t_a_hat_s column; offset estimates "
           "are left empty\n";
  }
  out << "trial,alpha1,alpha2,tau1_s,tau2_s,gamma11_s,gamma12_s,gamma21_s,"
         "gamma22_s,degenerate\n";
  if (observations) {
    for (std::size_t i = 0; i < observations->observations.size(); ++i) {
      write_estimate_row(out, observations->trials[i],
                         observations->observations[i], s.noise);
    }
  } else {
    for (std::uint64_t t = 0; t < s.trials; ++t) {
      write_estimate_row(out, t,
                         run_exchange(s.config, s.clock, s.noise, s.rng, t),
                         s.noise);
    }
  }
  return 0;
}

int cmd_crlb(const RunConfig& config, std::ostream& out, std::ostream&) {
  const ClockParams clock = config.clock();
  const ProtocolConfig protocol = config.protocol();
  const NoiseModel noise = config.noise();
  const CrlbReport r =
      crlb_alpha_tau(clock.alpha(), protocol.tau(), protocol.delays(), noise);

  auto line = [&out](const char* key, double v) {
    out << key << '=' << format_double(v) << '\n';
  };
  line("alpha", clock.alpha());
  line("tau_s", protocol.tau());
  line("sigma_a_s", noise.sigma_a());
  line("sigma_r_s", noise.sigma_r());
  line("c_alpha", r.c_alpha);
  line("sqrt_c_alpha", std::sqrt(r.c_alpha));
  line("c_tau_s2", r.c_tau);
  line("sqrt_c_tau_s", std::sqrt(r.c_tau));
  line("fim_alpha_alpha", r.fim.aa);
  line("fim_alpha_tau", r.fim.at);
  line("fim_tau_tau", r.fim.tt);
  return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err,
              unsigned threads) {
  const SweepSpec spec = config.sweep_spec();
  const SweepTable table = run_sweep(spec, threads);
  const std::string axis(axis_name(table.axis));

  out << "axis,value,estimator,std_sim,std_pred,bias,failures,trials,seed\n";
  int code = 0;
  for (const SweepPoint& p : table.points) {
    if (!p.stats) {
      err << "error: sweep point " << axis << '=' << format_double(p.value)
          << " failed: " << p.error << '\n';
      code = 1;
      continue;
    }
    for (Estimator e : kAllEstimators) {
      const EstimatorSummary& st = (*p.stats)[e];
      out << axis << ',' << format_double(p.value) << ',' << estimator_name(e)
          << ',' << format_double(st.std_dev) << ','
          << format_optional(p.stats->predicted_std(e)) << ','
          << format_double(st.bias) << ',' << st.failures << ','
          << p.stats->trials << ',' << table.seed << '\n';
    }
    if (p.stats->low_snr) {
      err << "warning: sweep point " << axis << '=' << format_double(p.value)
          << " is low-SNR (" << (*p.stats)[Estimator::kTau2].failures
          << " degenerate trials)\n";
    }
  }
  return code;
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

}  // namespace twsync::cli
