#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "csv_io.hpp"
#include "run_config.hpp"

namespace twsync::cli {

// Each command writes its table to `out` and diagnostics to `err`, and
// returns the process exit code. Hard failures throw (ConfigError, CsvError,
// std::exception) before anything is written to `out`.

// trial,t_a_hat_s,r_index,t_r_hat_s; one row per (trial, reply).
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Estimates per trial. Without `observations` the exchanges are simulated
// from the config first.
int cmd_estimate(const RunConfig& config,
                 const std::optional<ObservationTable>& observations,
                 std::ostream& out, std::ostream& err);

// key=value lines: bounds, information matrix and the resolved noise stds.
int cmd_crlb(const RunConfig& config, std::ostream& out, std::ostream& err);

// One row per (grid point, estimator). Failed points are reported on `err`,
// left out of the table, and make the exit code nonzero.
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err,
              unsigned threads = 0);

// Writes via a sibling temporary file and rename, so `path` either keeps its
// old content or gets all of `content`.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace twsync::cli
