#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cnet/cascade.hpp"
#include "cnet/params.hpp"
#include "cnet/rng.hpp"
#include "cnet/state.hpp"

namespace cnet {

/// Per-period aggregates.
struct PeriodRecord {
  int t = 0;
  double avg_output_d = 0.0;  // mean effective downstream output
  int bankrupt_d = 0;
  int bankrupt_u = 0;
  int bankrupt_b = 0;
  int avalanche = 0;  // bankrupt_d + bankrupt_u + bankrupt_b
  double total_loans = 0.0;
  double total_interbank = 0.0;
  double mean_rate_d = 0.0;
  double mean_rate_u = 0.0;
  double median_A_d = 0.0;  // start-of-period medians used for pricing
  double median_A_u = 0.0;
  double mean_E = 0.0;  // end of period, after replacement
};

/// Raised when an accounting identity fails to close within tolerance.
class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative tolerance of every accounting audit.
inline constexpr double kAuditTolerance = 1e-9;

struct StepResult {
  PeriodRecord record;
  std::vector<cascade::ReplacementEvent> replacements;
  std::vector<bool> replaced_downstream;
  std::vector<double> effective_output_d;  // per downstream slot, before replacement
};

/// Advances `state` by one period and audits every flow of that period.
/// Throws AuditError on an identity violation.
StepResult step(EconomyState& state, RngStream& rng, const Parameters& p);

struct RunResult {
  Parameters params;
  std::vector<PeriodRecord> records;
  std::vector<double> final_networth_d;
  std::vector<double> final_networth_u;
  std::vector<double> final_equity_b;
  // Pooled ln-differences of downstream net worth over the last
  // min(100, horizon - 1) transitions, replacement-adjacent transitions masked.
  std::vector<double> growth_networth;
  // Matching ln-differences of effective output; NaN where output was zero.
  std::vector<double> growth_output;
  int growth_window = 0;  // number of transitions pooled
  std::vector<cascade::ReplacementEvent> replacements;
};

inline constexpr int kGrowthWindow = 100;

/// End-of-period downstream cross-section used for growth pooling.
struct GrowthSnapshot {
  std::vector<double> net_worth;   // after replacement
  std::vector<double> output;      // effective output produced this period
  std::vector<bool> replaced;      // slot refilled at the end of this period
};

/// Pools ln-differences between consecutive snapshots, skipping every
/// transition into or out of a period in which the slot was replaced.
void pool_growth(const std::vector<GrowthSnapshot>& snapshots, std::vector<double>& networth,
                 std::vector<double>& output);

RunResult run(const Parameters& p);

/// Stateful wrapper for incremental stepping.
class Simulation {
 public:
  explicit Simulation(const Parameters& p);

  StepResult step() { return cnet::step(state_, rng_, params_); }

  const EconomyState& state() const noexcept { return state_; }
  const Parameters& params() const noexcept { return params_; }
  const RngStream& rng() const noexcept { return rng_; }

 private:
  Parameters params_;
  EconomyState state_;
  RngStream rng_;
};

}  // namespace cnet
