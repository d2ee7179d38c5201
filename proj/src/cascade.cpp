#include "cnet/cascade.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cnet::cascade {

Resolution resolve_firm_bankruptcy(const Shortfall& shortfall) {
  if (!(shortfall.magnitude > 0.0)) {
    throw std::invalid_argument("resolve_firm_bankruptcy: shortfall must be positive");
  }
  Resolution r;
  r.write_offs.resize(shortfall.claims.size(), 0.0);
  const double total = std::accumulate(
      shortfall.claims.begin(), shortfall.claims.end(), 0.0,
      [](double acc, const Claim& c) { return acc + c.amount; });
  if (!(total > 0.0)) {
    r.unallocated = shortfall.magnitude;
    return r;
  }
  if (shortfall.magnitude >= total) {
    for (std::size_t c = 0; c < shortfall.claims.size(); ++c) {
      r.write_offs[c] = shortfall.claims[c].amount;
    }
    r.unallocated = shortfall.magnitude - total;
    return r;
  }
  const double share = shortfall.magnitude / total;
  for (std::size_t c = 0; c < shortfall.claims.size(); ++c) {
    r.write_offs[c] = std::min(shortfall.claims[c].amount, shortfall.claims[c].amount * share);
  }
  return r;
}

double bank_profit(double rate_d, double wage_bill_d, double rate_u, double wage_bill_u,
                   double deposit_rate, double deposits) {
  return rate_d * wage_bill_d + rate_u * wage_bill_u - deposit_rate * deposits;
}

EquityUpdate update_bank_equity(double previous, double profit, double bad_debt, double ib) {
  const double next = previous + profit - bad_debt + ib;
  return {next, next < 0.0};
}

double aggregate_bad_debt(double firm_write_offs, double interbank_write_offs) {
  return firm_write_offs + interbank_write_offs;
}

std::vector<ReplacementEvent> replace_agents(EconomyState& state,
                                             const std::vector<bool>& failed_downstream,
                                             const std::vector<bool>& failed_upstream,
                                             const std::vector<bool>& failed_banks,
                                             const Parameters& p) {
  std::vector<ReplacementEvent> events;
  for (std::size_t i = 0; i < state.downstream.size(); ++i) {
    if (failed_downstream[i]) {
      state.downstream[i] = new_downstream_firm(i, p);
      events.push_back({state.t, Sector::downstream, i});
    }
  }
  for (std::size_t j = 0; j < state.upstream.size(); ++j) {
    if (failed_upstream[j]) {
      state.upstream[j] = new_upstream_firm(j, p);
      events.push_back({state.t, Sector::upstream, j});
    }
  }
  for (std::size_t z = 0; z < state.banks.size(); ++z) {
    if (failed_banks[z]) {
      state.banks[z] = new_bank(z, p);
      events.push_back({state.t, Sector::bank, z});
    }
  }
  return events;
}

}  // namespace cnet::cascade
