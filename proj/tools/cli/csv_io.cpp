#include "csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

namespace twsync::cli {
namespace {

constexpr std::string_view kTrial = "trial";
constexpr std::string_view kTa = "t_a_hat_s";
constexpr std::string_view kIndex = "r_index";
constexpr std::string_view kTr = "t_r_hat_s";

std::string at_line(std::size_t line) {
  return "observation CSV line " + std::to_string(line) + ": ";
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size()) {
    return std::nullopt;
  }
  return v;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

ObservationTable read_observations(std::istream& in,
                                   const ProtocolConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw CsvError("observation CSV is empty");
  ++line_no;

  std::map<std::string, std::size_t, std::less<>> column;
  const auto header = split(line, ',');
  const std::size_t width = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) column[std::string(header[i])] = i;
  for (auto name : {kTrial, kIndex, kTr}) {
    if (!column.count(name)) {
      throw CsvError("observation CSV has no '" + std::string(name) + "' column");
    }
  }

  ObservationTable table;
  table.has_t_a_hat = column.count(kTa) > 0;
  const std::size_t n = config.n();

  auto finish = [&](std::size_t line_at) {
    if (table.observations.empty()) return;
    const auto& last = table.observations.back();
    if (last.t_r_hat.size() != n) {
      throw CsvError(at_line(line_at) + "trial " +
                     std::to_string(table.trials.back()) + " has N = " +
                     std::to_string(last.t_r_hat.size()) +
                     " replies, config expects N = " + std::to_string(n));
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != width) {
      throw CsvError(at_line(line_no) + "expected " +
                     std::to_string(width) + " fields, got " +
                     std::to_string(cells.size()));
    }
    const auto trial = parse_u64(cells[column.find(kTrial)->second]);
    const auto index = parse_u64(cells[column.find(kIndex)->second]);
    const auto t_r = parse_double(cells[column.find(kTr)->second]);
    if (!trial || !index || !t_r) {
      throw CsvError(at_line(line_no) + "malformed trial, r_index or t_r_hat_s");
    }

    if (table.trials.empty() || table.trials.back() != *trial) {
      finish(line_no - 1);
      ObservationSet obs;
      obs.t_d_prime = config.t_d_prime();
      obs.delays.assign(config.delays().begin(), config.delays().end());
      if (table.has_t_a_hat) {
        obs.t_a_hat = parse_double(cells[column.find(kTa)->second]);
        if (!obs.t_a_hat) throw CsvError(at_line(line_no) + "malformed t_a_hat_s");
      }
      table.trials.push_back(*trial);
      table.observations.push_back(std::move(obs));
    }
    auto& obs = table.observations.back();
    if (*index != obs.t_r_hat.size() + 1) {
      throw CsvError(at_line(line_no) + "r_index " + std::to_string(*index) +
                     " out of sequence for trial " + std::to_string(*trial));
    }
    if (obs.t_r_hat.size() == n) {
      throw CsvError(at_line(line_no) + "trial " + std::to_string(*trial) +
                     " has more than N = " + std::to_string(n) + " replies");
    }
    obs.t_r_hat.push_back(*t_r);
  }
  finish(line_no);
  if (table.observations.empty()) throw CsvError("observation CSV has no rows");
  return table;
}

}  // namespace twsync::cli
