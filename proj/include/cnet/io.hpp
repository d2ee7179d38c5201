#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cnet/engine.hpp"
#include "cnet/params.hpp"

namespace cnet::io {

namespace fs = std::filesystem;

#ifndef CNET_VERSION
#define CNET_VERSION "0.0.0"
#endif

inline constexpr const char* kVersion = CNET_VERSION;

/// Unknown key, malformed value or failed validation, with its location.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& message, std::string key, int line)
      : std::invalid_argument(message), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  std::string key_;
  int line_;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& message, fs::path path)
      : std::runtime_error(message + ": " + path.string()), path_(std::move(path)) {}

  const fs::path& path() const noexcept { return path_; }

 private:
  fs::path path_;
};

/// The recognized configuration keys, in canonical order.
const std::vector<std::string>& config_keys();

bool is_integer_key(std::string_view key);

/// Assigns one parameter from its textual value; throws ConfigError.
void set_parameter(Parameters& p, std::string_view key, std::string_view value, int line = 0);

/// `key=value` per line, `#` comments, blank lines ignored. Missing keys keep
/// their defaults; the result is validated.
Parameters parse_config_text(std::string_view text);
Parameters parse_config(const fs::path& path);

/// Canonical config text that parses back to exactly `p`.
std::string format_config(const Parameters& p);

/// Six significant digits, C locale, "nan" for NaN.
std::string format_number(double x);

std::vector<fs::path> emit_timeseries(const RunResult& result, const fs::path& dir);
std::vector<fs::path> emit_distributions(const RunResult& result, const fs::path& dir);
fs::path emit_report(const RunResult& result, const fs::path& dir);

/// Writes every data file plus manifest.json and returns the inventory.
std::vector<fs::path> emit_all(const RunResult& result, const fs::path& dir,
                               const std::string& started_at, const std::string& finished_at);

/// ISO-8601 UTC timestamp of the current time.
std::string utc_now();

struct GridSpec {
  std::string key;
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;
};

/// Parses "key=start:stop:steps"; throws ConfigError.
GridSpec parse_grid(std::string_view text);

/// Parameter sets of the grid, each validated before anything runs.
std::vector<Parameters> expand_grid(const Parameters& base, const GridSpec& grid);

/// Directory name for one grid point, e.g. "alpha=0.6".
std::string grid_label(const GridSpec& grid, const Parameters& p);

struct SweepRow {
  std::string value;
  double mean_avalanche = 0.0;
  long bankrupt_d = 0;
  long bankrupt_u = 0;
  long bankrupt_b = 0;
  double mean_avg_output_d = 0.0;
};

SweepRow summarize(const std::string& value, const RunResult& result);

/// Runs every grid point into `dir/key=value/` and writes `sweep_summary.csv`.
fs::path sweep(const Parameters& base, const GridSpec& grid, const fs::path& dir);

}  // namespace cnet::io
