#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace twsync::cli;

  CLI::App app{"Two-way clock drift, offset and delay estimation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string obs_path;
  unsigned threads = 0;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run config file")->required();
    cmd->add_option("--out", out_path, "Output file (default: standard output)");
    cmd->add_option("--seed", seed, "Override run.seed");
  };
  auto* simulate = app.add_subcommand("simulate", "Simulated observations as CSV");
  auto* estimate = app.add_subcommand("estimate", "Per-trial estimates as CSV");
  auto* crlb = app.add_subcommand("crlb", "Cramer-Rao bounds at the config");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep as CSV");
  for (auto* cmd : {simulate, estimate, crlb, sweep}) common(cmd);
  estimate->add_option("--obs", obs_path, "Observation CSV from 'simulate'");
  sweep->add_option("--threads", threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = load_config(config_path);
    if (seed) config.seed = *seed;

    std::ostringstream out;
    int code = 0;
    if (*simulate) {
      code = cmd_simulate(config, out, std::cerr);
    } else if (*estimate) {
      std::optional<ObservationTable> obs;
      if (!obs_path.empty()) {
        std::ifstream in(obs_path);
        if (!in) throw CsvError("cannot read observation CSV '" + obs_path + "'");
        obs = read_observations(in, config.protocol());
      }
      code = cmd_estimate(config, obs, out, std::cerr);
    } else if (*crlb) {
      code = cmd_crlb(config, out, std::cerr);
    } else {
      code = cmd_sweep(config, out, std::cerr, threads);
    }

    if (out_path.empty()) {
      std::cout << out.str() << std::flush;
    } else {
      write_atomically(out_path, out.str());
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
