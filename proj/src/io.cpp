#include "cnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cnet/stats.hpp"

namespace cnet::io {

using json = nlohmann::json;

namespace {

struct Field {
  std::function<void(Parameters&, std::string_view, int)> set;
  std::function<std::string(const Parameters&)> get;
};

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, int line,
                            const char* expected) {
  std::string msg = "malformed value '" + std::string(value) + "' for key '" + std::string(key) +
                    "' (expected " + expected + ")";
  if (line > 0) msg += " at line " + std::to_string(line);
  throw ConfigError(msg, std::string(key), line);
}

template <class T>
T parse_number(std::string_view key, std::string_view value, int line, const char* expected) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (!value.empty() && value.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || first == last) bad_value(key, value, line, expected);
  return out;
}

Field real_field(double Parameters::*member) {
  return {[member](Parameters& p, std::string_view v, int line) {
            p.*member = parse_number<double>("", v, line, "a real number");
          },
          [member](const Parameters& p) { return shortest(p.*member); }};
}

Field int_field(int Parameters::*member) {
  return {[member](Parameters& p, std::string_view v, int line) {
            p.*member = parse_number<int>("", v, line, "an integer");
          },
          [member](const Parameters& p) { return std::to_string(p.*member); }};
}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = {
      {"phi", real_field(&Parameters::phi)},
      {"beta", real_field(&Parameters::beta)},
      {"gamma", real_field(&Parameters::gamma)},
      {"delta_d", real_field(&Parameters::delta_d)},
      {"delta_u", real_field(&Parameters::delta_u)},
      {"k", real_field(&Parameters::k)},
      {"alpha", real_field(&Parameters::alpha)},
      {"r_u", real_field(&Parameters::r_u)},
      {"r_d", real_field(&Parameters::r_d)},
      {"r_bb", real_field(&Parameters::r_bb)},
      {"w", real_field(&Parameters::w)},
      {"p", real_field(&Parameters::p)},
      {"n_agents", int_field(&Parameters::n_agents)},
      {"horizon", int_field(&Parameters::horizon)},
      {"a0", real_field(&Parameters::a0)},
      {"e0", real_field(&Parameters::e0)},
      {"seed",
       {[](Parameters& p, std::string_view v, int line) {
          p.seed = parse_number<std::uint64_t>("", v, line, "a non-negative integer");
        },
        [](const Parameters& p) { return std::to_string(p.seed); }}},
  };
  return table;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out << content;
  out.close();
  if (!out) throw IoError("write failed", path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory", dir);
}

std::string values_csv(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    out += format_number(v);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const std::vector<stats::Bin>& bins) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (const auto& b : bins) {
    out += format_number(b.lo) + ',' + format_number(b.hi) + ',' + std::to_string(b.count) + '\n';
  }
  return out;
}

json params_json(const Parameters& p) {
  json j = json::object();
  for (const auto& key : config_keys()) {
    const auto& f = fields().find(key)->second;
    if (is_integer_key(key)) {
      j[key] = key == "seed" ? json(p.seed) : json(std::stoll(f.get(p)));
    } else {
      j[key] = std::stod(f.get(p));
    }
  }
  return j;
}

json report_json(const stats::TestReport& r) {
  return {{"statistic", r.statistic},
          {"p_value", r.p_value},
          {"reject_at_1pct", r.reject_at_1pct},
          {"n", r.n}};
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json size_summary(const std::vector<double>& values) {
  json j;
  j["n"] = values.size();
  try {
    const auto m = stats::moments(values);
    j["mean"] = m.mean;
    j["skewness"] = optional_json(m.skewness);
    j["excess_kurtosis"] = optional_json(m.excess_kurtosis);
    j["bera_jarque"] = report_json(stats::bera_jarque(values));
  } catch (const std::invalid_argument& e) {
    j["bera_jarque"] = nullptr;
    j["note"] = e.what();
  }
  return j;
}

json lagged(const std::vector<double>& x, const std::vector<double>& y, std::size_t max_lag) {
  json arr = json::array();
  try {
    const auto cc = stats::cross_correlation(x, y, max_lag);
    const auto lag0 = static_cast<long>(max_lag);
    for (std::size_t k = 0; k < cc.size(); ++k) {
      arr.push_back({{"lag", static_cast<long>(k) - lag0}, {"correlation", optional_json(cc[k])}});
    }
  } catch (const std::invalid_argument&) {
    return nullptr;
  }
  return arr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "phi", "beta", "gamma", "delta_d", "delta_u", "k",       "alpha", "r_u", "r_d",
      "r_bb", "w",   "p",     "n_agents", "horizon", "a0",    "e0",    "seed"};
  return keys;
}

bool is_integer_key(std::string_view key) {
  return key == "n_agents" || key == "horizon" || key == "seed";
}

void set_parameter(Parameters& p, std::string_view key, std::string_view value, int line) {
  const auto it = fields().find(key);
  if (it == fields().end()) {
    std::string msg = "unknown key '" + std::string(key) + "'";
    if (line > 0) msg += " at line " + std::to_string(line);
    throw ConfigError(msg, std::string(key), line);
  }
  try {
    it->second.set(p, value, line);
  } catch (const ConfigError&) {
    bad_value(key, value, line, is_integer_key(key) ? "an integer" : "a real number");
  }
}

Parameters parse_config_text(std::string_view text) {
  Parameters p;
  std::map<std::string, int, std::less<>> line_of;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected key=value at line " + std::to_string(line), std::string(raw),
                        line);
    }
    const auto key = trim(raw.substr(0, eq));
    const auto value = trim(raw.substr(eq + 1));
    set_parameter(p, key, value, line);
    line_of[std::string(key)] = line;
  }
  const auto violations = check_params(p);
  if (!violations.empty()) {
    // Name the first offending key and the line it came from, if any.
    std::string key;
    for (const auto& k : config_keys()) {
      if (violations.front().rfind(k + " ", 0) == 0) {
        key = k;
        break;
      }
    }
    const auto it = line_of.find(key);
    const int at = it == line_of.end() ? 0 : it->second;
    std::string msg = ParameterError(violations).what();
    if (at > 0) msg += " (key '" + key + "' at line " + std::to_string(at) + ")";
    throw ConfigError(msg, key, at);
  }
  return p;
}

Parameters parse_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string format_config(const Parameters& p) {
  std::string out;
  for (const auto& key : config_keys()) {
    out += key + "=" + fields().find(key)->second.get(p) + "\n";
  }
  return out;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::vector<fs::path> emit_timeseries(const RunResult& result, const fs::path& dir) {
  ensure_dir(dir);
  std::string out =
      "t,avg_Y_d,bankrupt_d,bankrupt_u,bankrupt_b,avalanche,total_loans,total_interbank,"
      "mean_rate_d,mean_rate_u,median_A_d,median_A_u,mean_E\n";
  for (const auto& r : result.records) {
    out += std::to_string(r.t) + ',' + format_number(r.avg_output_d) + ',' +
           std::to_string(r.bankrupt_d) + ',' + std::to_string(r.bankrupt_u) + ',' +
           std::to_string(r.bankrupt_b) + ',' + std::to_string(r.avalanche) + ',' +
           format_number(r.total_loans) + ',' + format_number(r.total_interbank) + ',' +
           format_number(r.mean_rate_d) + ',' + format_number(r.mean_rate_u) + ',' +
           format_number(r.median_A_d) + ',' + format_number(r.median_A_u) + ',' +
           format_number(r.mean_E) + '\n';
  }
  const auto path = dir / "timeseries.csv";
  write_file(path, out);
  return {path};
}

std::vector<fs::path> emit_distributions(const RunResult& result, const fs::path& dir) {
  ensure_dir(dir);
  std::vector<fs::path> files;
  auto put = [&](const std::string& name, const std::string& content) {
    files.push_back(dir / name);
    write_file(files.back(), content);
  };

  put("networth_d.csv", values_csv(result.final_networth_d));
  put("networth_u.csv", values_csv(result.final_networth_u));
  put("equity_b.csv", values_csv(result.final_equity_b));

  std::string growth = "g_networth,g_output\n";
  for (std::size_t k = 0; k < result.growth_networth.size(); ++k) {
    growth += format_number(result.growth_networth[k]) + ',' +
              format_number(result.growth_output[k]) + '\n';
  }
  put("growth_rates.csv", growth);

  const auto avalanches = stats::avalanche_series(result.records).values;
  put("avalanches.csv", values_csv(avalanches));

  put("hist_networth_d.csv", histogram_csv(stats::histogram(result.final_networth_d)));
  put("hist_networth_u.csv", histogram_csv(stats::histogram(result.final_networth_u)));
  put("hist_equity_b.csv", histogram_csv(stats::histogram(result.final_equity_b)));
  put("hist_log_networth_d.csv", histogram_csv(stats::log_histogram(result.final_networth_d)));
  put("hist_log_networth_u.csv", histogram_csv(stats::log_histogram(result.final_networth_u)));
  put("hist_log_equity_b.csv", histogram_csv(stats::log_histogram(result.final_equity_b)));
  put("hist_growth_rates.csv", histogram_csv(stats::histogram(result.growth_networth)));
  put("hist_avalanches.csv", histogram_csv(stats::histogram(avalanches)));
  return files;
}

fs::path emit_report(const RunResult& result, const fs::path& dir) {
  ensure_dir(dir);
  json j;
  j["downstream_size"] = size_summary(result.final_networth_d);
  j["upstream_size"] = size_summary(result.final_networth_u);
  j["bank_size"] = size_summary(result.final_equity_b);
  j["avalanches"] = size_summary(stats::avalanche_series(result.records).values);

  json g;
  g["n"] = result.growth_networth.size();
  g["window"] = result.growth_window;
  g["window_shortened"] = result.growth_window < kGrowthWindow;
  try {
    const auto fit = stats::compare_fits(result.growth_networth);
    const auto m = stats::moments(result.growth_networth);
    g["laplace"] = {{"location", fit.laplace.location},
                    {"scale", fit.laplace.scale},
                    {"loglik", fit.laplace.loglik}};
    g["normal"] = {{"mean", fit.normal.mean}, {"sd", fit.normal.sd}, {"loglik", fit.normal.loglik}};
    g["laplace_preferred"] = fit.laplace_preferred;
    g["excess_kurtosis"] = optional_json(m.excess_kurtosis);
  } catch (const std::invalid_argument& e) {
    g["laplace_preferred"] = nullptr;
    g["note"] = e.what();
  }
  j["growth_rates"] = g;

  std::vector<double> d, u, b;
  for (const auto& r : result.records) {
    d.push_back(r.bankrupt_d);
    u.push_back(r.bankrupt_u);
    b.push_back(r.bankrupt_b);
  }
  j["cross_correlation"] = {{"downstream_upstream", lagged(d, u, 5)},
                            {"downstream_bank", lagged(d, b, 5)},
                            {"upstream_bank", lagged(u, b, 5)}};
  j["run"] = {{"version", kVersion},
              {"seed", result.params.seed},
              {"parameters", params_json(result.params)},
              {"periods", result.records.size()}};

  const auto path = dir / "report.json";
  write_file(path, j.dump(2) + "\n");
  return path;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<fs::path> emit_all(const RunResult& result, const fs::path& dir,
                               const std::string& started_at, const std::string& finished_at) {
  ensure_dir(dir);
  std::vector<fs::path> files = emit_timeseries(result, dir);
  auto dist = emit_distributions(result, dir);
  files.insert(files.end(), dist.begin(), dist.end());
  files.push_back(emit_report(result, dir));
  const auto config_path = dir / "effective_config.txt";
  const std::string config = format_config(result.params);
  write_file(config_path, config);
  files.push_back(config_path);

  json m;
  m["version"] = kVersion;
  m["seed"] = result.params.seed;
  m["parameters"] = params_json(result.params);
  m["config"] = config;
  m["started_at"] = started_at;
  m["finished_at"] = finished_at;
  json inventory = json::array();
  for (const auto& f : files) inventory.push_back(f.filename().string());
  inventory.push_back("manifest.json");
  m["files"] = inventory;
  const auto manifest = dir / "manifest.json";
  write_file(manifest, m.dump(2) + "\n");
  files.push_back(manifest);
  return files;
}

GridSpec parse_grid(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("grid must look like key=start:stop:steps", std::string(text), 0);
  }
  GridSpec g;
  g.key = std::string(trim(text.substr(0, eq)));
  if (fields().find(g.key) == fields().end()) {
    throw ConfigError("unknown sweep key '" + g.key + "'", g.key, 0);
  }
  const auto range = text.substr(eq + 1);
  const auto c1 = range.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : range.find(':', c1 + 1);
  if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
    throw ConfigError("grid range must look like start:stop:steps", g.key, 0);
  }
  g.start = parse_number<double>(g.key, trim(range.substr(0, c1)), 0, "a number");
  g.stop = parse_number<double>(g.key, trim(range.substr(c1 + 1, c2 - c1 - 1)), 0, "a number");
  g.steps = parse_number<int>(g.key, trim(range.substr(c2 + 1)), 0, "an integer step count");
  if (g.steps < 2) throw ConfigError("sweep needs at least 2 steps", g.key, 0);
  return g;
}

std::vector<Parameters> expand_grid(const Parameters& base, const GridSpec& grid) {
  if (grid.steps < 2) throw ConfigError("sweep needs at least 2 steps", grid.key, 0);
  std::vector<Parameters> out;
  for (int s = 0; s < grid.steps; ++s) {
    const double v =
        grid.start + (grid.stop - grid.start) * static_cast<double>(s) / (grid.steps - 1);
    Parameters p = base;
    const std::string text =
        is_integer_key(grid.key) ? std::to_string(std::llround(v)) : shortest(v);
    set_parameter(p, grid.key, text);
    const auto violations = check_params(p);
    if (!violations.empty()) {
      throw ConfigError("grid point " + grid.key + "=" + text + " is invalid: " +
                            ParameterError(violations).what(),
                        grid.key, 0);
    }
    out.push_back(p);
  }
  return out;
}

std::string grid_label(const GridSpec& grid, const Parameters& p) {
  const auto& f = fields().find(grid.key)->second;
  if (is_integer_key(grid.key)) return grid.key + "=" + f.get(p);
  return grid.key + "=" + format_number(std::stod(f.get(p)));
}

SweepRow summarize(const std::string& value, const RunResult& result) {
  SweepRow row;
  row.value = value;
  double aval = 0.0, out = 0.0;
  for (const auto& r : result.records) {
    aval += r.avalanche;
    out += r.avg_output_d;
    row.bankrupt_d += r.bankrupt_d;
    row.bankrupt_u += r.bankrupt_u;
    row.bankrupt_b += r.bankrupt_b;
  }
  const double n = static_cast<double>(std::max<std::size_t>(result.records.size(), 1));
  row.mean_avalanche = aval / n;
  row.mean_avg_output_d = out / n;
  return row;
}

fs::path sweep(const Parameters& base, const GridSpec& grid, const fs::path& dir) {
  const auto points = expand_grid(base, grid);
  ensure_dir(dir);
  std::string summary =
      "value,mean_avalanche,bankrupt_d,bankrupt_u,bankrupt_b,mean_avg_Y_d\n";
  for (const auto& p : points) {
    const auto label = grid_label(grid, p);
    const auto started = utc_now();
    const auto result = run(p);
    emit_all(result, dir / label, started, utc_now());
    const auto row = summarize(label.substr(grid.key.size() + 1), result);
    summary += row.value + ',' + format_number(row.mean_avalanche) + ',' +
               std::to_string(row.bankrupt_d) + ',' + std::to_string(row.bankrupt_u) + ',' +
               std::to_string(row.bankrupt_b) + ',' + format_number(row.mean_avg_output_d) + '\n';
  }
  const auto path = dir / "sweep_summary.csv";
  write_file(path, summary);
  return path;
}

}  // namespace cnet::io
