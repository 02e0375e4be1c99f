#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twsync/protocol.hpp"

namespace twsync::cli {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

// Whole-string parses; std::nullopt on junk, trailing text or overflow.
std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_u64(std::string_view text);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

struct ObservationTable {
  std::vector<std::uint64_t> trials;
  std::vector<ObservationSet> observations;
  bool has_t_a_hat = false;
};

// Reads the simulate output format. t_a_hat_s may be missing as a column.
// Rows of one trial must be contiguous with r_index 1..N. Delays and t'_D
// come from `config`; every trial must carry exactly config.n() replies.
ObservationTable read_observations(std::istream& in,
                                   const ProtocolConfig& config);

}  // namespace twsync::cli
