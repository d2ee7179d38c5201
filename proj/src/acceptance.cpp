#include "cnet/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "cnet/engine.hpp"
#include "cnet/io.hpp"
#include "cnet/rng.hpp"
#include "cnet/stats.hpp"

namespace cnet::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool audit_ok = false;
  std::string audit_message;
  RunResult result;
};

std::vector<double> column(const std::vector<PeriodRecord>& records, int PeriodRecord::*field) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.*field);
  return out;
}

bool rejects_and_right_skewed(const std::vector<double>& values) {
  try {
    const auto jb = stats::bera_jarque(values);
    const auto m = stats::moments(values);
    return jb.reject_at_1pct && m.skewness && *m.skewness > 0.0;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

bool positive_corr(const std::vector<double>& x, const std::vector<double>& y, double threshold) {
  const auto c = stats::pearson(x, y);
  return c && *c > threshold;
}

std::string tally(int count, std::size_t total, int need) {
  return std::to_string(count) + "/" + std::to_string(total) + " (need " + std::to_string(need) +
         ")";
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Portable Gaussian and Laplace draws for the calibration checks.
double normal_draw(RngStream& rng) {
  const double u1 = rng.uniform_open();
  const double u2 = rng.uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double laplace_draw(RngStream& rng) {
  const double u = rng.uniform_open() - 0.5;
  return u < 0.0 ? std::log(1.0 + 2.0 * u) : -std::log(1.0 - 2.0 * u);
}

}  // namespace

std::string format_line(const CriterionResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + "  [" + std::to_string(r.id) + "] " + r.name +
         ": " + r.detail;
}

bool audit_failed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (r.id == 7 && !r.passed) return true;
  }
  return false;
}

std::vector<CriterionResult> run_acceptance(const Options& options) {
  std::vector<CriterionResult> out;
  const std::size_t panel = options.seeds.size();

  const auto panel_start = Clock::now();
  std::vector<SeedOutcome> runs;
  for (auto seed : options.seeds) {
    SeedOutcome o;
    o.seed = seed;
    Parameters p = options.base;
    p.seed = seed;
    try {
      o.result = run(p);
      o.audit_ok = true;
    } catch (const AuditError& e) {
      o.audit_message = e.what();
    }
    runs.push_back(std::move(o));
  }
  const double panel_seconds = seconds_since(panel_start);

  // 1. Right-skewed, non-normal size distributions.
  {
    int d = 0, u = 0, b = 0;
    for (const auto& o : runs) {
      if (!o.audit_ok) continue;
      d += rejects_and_right_skewed(o.result.final_networth_d);
      u += rejects_and_right_skewed(o.result.final_networth_u);
      b += rejects_and_right_skewed(o.result.final_equity_b);
    }
    const bool ok = d >= 8 && u >= 7 && b >= 7 && panel_seconds < 60.0;
    std::ostringstream detail;
    detail.precision(3);
    detail << "downstream " << tally(d, panel, 8) << ", upstream " << tally(u, panel, 7)
           << ", banks " << tally(b, panel, 7) << ", panel " << panel_seconds << " s (limit 60 s)";
    out.push_back({1, "non-normal right-skewed size distributions", ok, detail.str()});
  }

  // 2. Laplace growth rates.
  {
    int hits = 0;
    for (const auto& o : runs) {
      if (!o.audit_ok) continue;
      try {
        const auto& g = o.result.growth_networth;
        const auto fit = stats::compare_fits(g);
        const auto m = stats::moments(g);
        hits += fit.laplace_preferred && m.excess_kurtosis && *m.excess_kurtosis > 0.5;
      } catch (const std::invalid_argument&) {
      }
    }
    out.push_back({2, "Laplace growth rates (loglik and excess kurtosis > 0.5)", hits >= 8,
                   tally(hits, panel, 8)});
  }

  // 3. Cross-sector bankruptcy correlation at lag 0.
  {
    int all_pairs = 0, du = 0;
    for (const auto& o : runs) {
      if (!o.audit_ok) continue;
      const auto d = column(o.result.records, &PeriodRecord::bankrupt_d);
      const auto u = column(o.result.records, &PeriodRecord::bankrupt_u);
      const auto b = column(o.result.records, &PeriodRecord::bankrupt_b);
      all_pairs += positive_corr(d, u, 0.0) && positive_corr(d, b, 0.0) && positive_corr(u, b, 0.0);
      du += positive_corr(d, u, 0.1);
    }
    out.push_back({3, "cross-sector bankruptcy correlation", all_pairs >= 8 && du >= 7,
                   "all pairs > 0: " + tally(all_pairs, panel, 8) +
                       ", downstream-upstream > 0.1: " + tally(du, panel, 7)});
  }

  // 4. Fat-tailed avalanches.
  {
    int hits = 0;
    for (const auto& o : runs) {
      if (!o.audit_ok) continue;
      const auto a = stats::avalanche_series(o.result.records).values;
      try {
        const auto jb = stats::bera_jarque(a);
        const auto m = stats::moments(a);
        hits += jb.reject_at_1pct && m.excess_kurtosis && *m.excess_kurtosis > 0.0;
      } catch (const std::invalid_argument&) {
      }
    }
    out.push_back({4, "fat-tailed avalanche distribution", hits >= 8, tally(hits, panel, 8)});
  }

  // 5. Endogenous fluctuations of average downstream output.
  {
    int hits = 0;
    for (const auto& o : runs) {
      if (!o.audit_ok) continue;
      std::vector<double> y;
      for (const auto& r : o.result.records) {
        if (r.t >= 101 && r.t <= 1000) y.push_back(r.avg_output_d);
      }
      if (y.size() < 3) continue;
      const auto m = stats::moments(y);
      const double cv = std::sqrt(m.variance) / m.mean;
      bool up = false, down = false;
      for (std::size_t k = 1; k < y.size(); ++k) {
        up = up || y[k] > y[k - 1];
        down = down || y[k] < y[k - 1];
      }
      hits += cv > 0.01 && up && down;
    }
    out.push_back({5, "fluctuations without aggregate shocks", hits == static_cast<int>(panel),
                   tally(hits, panel, static_cast<int>(panel))});
  }

  // 6. Simultaneous failures in all three sectors.
  {
    int hits = 0;
    for (const auto& o : runs) {
      if (!o.audit_ok) continue;
      bool seen = false;
      for (const auto& r : o.result.records) {
        seen = seen || (r.bankrupt_d > 0 && r.bankrupt_u > 0 && r.bankrupt_b > 0);
      }
      hits += seen;
    }
    out.push_back({6, "contagion across all three sectors", hits >= 6, tally(hits, panel, 6)});
  }

  // 7. Accounting audit.
  {
    int ok = 0;
    std::string first_failure;
    for (const auto& o : runs) {
      ok += o.audit_ok;
      if (!o.audit_ok && first_failure.empty()) {
        first_failure = "; seed " + std::to_string(o.seed) + ": " + o.audit_message;
      }
    }
    out.push_back({7, "accounting identities within 1e-9", ok == static_cast<int>(panel),
                   tally(ok, panel, static_cast<int>(panel)) + first_failure});
  }

  // 8. Determinism and performance.
  {
    Parameters p = options.base;
    p.seed = options.seeds.empty() ? 1 : options.seeds.front();
    bool identical = false;
    double run_seconds = 0.0;
    std::string note;
    try {
      const auto t0 = Clock::now();
      const auto r1 = run(p);
      run_seconds = seconds_since(t0);
      const auto r2 = run(p);
      const auto dir = options.scratch_dir.empty()
                           ? std::filesystem::temp_directory_path() / "cnet_acceptance"
                           : options.scratch_dir;
      const auto a = io::emit_all(r1, dir / "first", io::utc_now(), io::utc_now());
      const auto b = io::emit_all(r2, dir / "second", io::utc_now(), io::utc_now());
      identical = a.size() == b.size();
      for (std::size_t k = 0; identical && k < a.size(); ++k) {
        if (a[k].filename() == "manifest.json") {
          auto ja = nlohmann::json::parse(read_all(a[k]));
          auto jb = nlohmann::json::parse(read_all(b[k]));
          for (auto* j : {&ja, &jb}) {
            j->erase("started_at");
            j->erase("finished_at");
          }
          identical = ja == jb;
        } else {
          identical = read_all(a[k]) == read_all(b[k]);
        }
        if (!identical) note = ", differs: " + a[k].filename().string();
      }
    } catch (const std::exception& e) {
      note = std::string(", error: ") + e.what();
    }
    std::ostringstream detail;
    detail.precision(3);
    detail << "byte-identical " << (identical ? "yes" : "no") << ", full run " << run_seconds
           << " s (limit 5 s)" << note;
    out.push_back({8, "determinism and performance", identical && run_seconds < 5.0, detail.str()});
  }

  // 9. Statistics-layer calibration.
  if (options.include_calibration) {
    RngStream rng(20240601);
    constexpr int kReplications = 1000;
    constexpr int kSampleSize = 1000;
    int rejections = 0;
    std::vector<double> sample(kSampleSize);
    for (int r = 0; r < kReplications; ++r) {
      for (auto& x : sample) x = normal_draw(rng);
      rejections += stats::bera_jarque(sample).reject_at_1pct;
    }
    const double rate = static_cast<double>(rejections) / kReplications;

    constexpr int kTrials = 100;
    constexpr int kPoints = 100000;
    int laplace_ok = 0, normal_ok = 0;
    std::vector<double> big(kPoints);
    for (int trial = 0; trial < kTrials; ++trial) {
      for (auto& x : big) x = laplace_draw(rng);
      laplace_ok += stats::compare_fits(big).laplace_preferred;
      for (auto& x : big) x = normal_draw(rng);
      normal_ok += !stats::compare_fits(big).laplace_preferred;
    }
    const bool ok = rate >= 0.003 && rate <= 0.03 && laplace_ok == kTrials && normal_ok == kTrials;
    std::ostringstream detail;
    detail << "JB false rejections " << rejections << "/" << kReplications
           << " (need 0.3%-3%), Laplace preferred on Laplace data " << laplace_ok << "/" << kTrials
           << ", Gaussian preferred on Gaussian data " << normal_ok << "/" << kTrials;
    out.push_back({9, "statistics layer calibration", ok, detail.str()});
  }
  return out;
}

}  // namespace cnet::acceptance
