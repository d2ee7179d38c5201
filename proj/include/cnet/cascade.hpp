#pragma once

#include <cstddef>
#include <vector>

#include "cnet/params.hpp"
#include "cnet/state.hpp"

namespace cnet::cascade {

/// Unpaid obligations of a failed firm: magnitude is -A at failure.
struct Shortfall {
  AgentRef debtor;
  double magnitude = 0.0;
  std::vector<Claim> claims;
};

struct Resolution {
  std::vector<double> write_offs;  // aligned with Shortfall::claims
  double unallocated = 0.0;        // shortfall with nobody to bear it
};

/// Pari passu: each creditor loses magnitude * claim / sum(claims), capped at
/// its claim, so the total written off is min(magnitude, sum(claims)).
Resolution resolve_firm_bankruptcy(const Shortfall& shortfall);

/// r_bd * wage_bill_d + r_bu * wage_bill_u - r_d * D
double bank_profit(double rate_d, double wage_bill_d, double rate_u, double wage_bill_u,
                   double deposit_rate, double deposits);

struct EquityUpdate {
  double equity = 0.0;
  bool failed = false;  // strictly negative equity
};

/// E = E_prev + profit - bad_debt + ib
EquityUpdate update_bank_equity(double previous, double profit, double bad_debt, double ib);

double aggregate_bad_debt(double firm_write_offs, double interbank_write_offs);

struct ReplacementEvent {
  int t = 0;
  Sector sector = Sector::downstream;
  std::size_t index = 0;
};

/// Refills every flagged slot in place with a new entrant holding the entry
/// endowment. Returns one event per replacement.
std::vector<ReplacementEvent> replace_agents(EconomyState& state,
                                             const std::vector<bool>& failed_downstream,
                                             const std::vector<bool>& failed_upstream,
                                             const std::vector<bool>& failed_banks,
                                             const Parameters& p);

}  // namespace cnet::cascade
