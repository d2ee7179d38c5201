#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cnet/state.hpp"
#include "cnet/topology.hpp"

namespace cnet::interbank {

/// supply - demand: positive is lendable excess, negative a liquidity deficit.
double net_position(double supply, double demand);

struct Flow {
  std::size_t lender = 0;
  std::size_t borrower = 0;
  double amount = 0.0;
};

/// One ascending-index sweep over the ring. Each deficit bank asks each of its
/// two neighbors for half its deficit; each leg is capped by what that
/// neighbor still has to lend. Unmet halves are not re-routed.
std::vector<Flow> match_neighbors(std::span<const double> positions, const Topology& topology);

/// Net interbank cash-flow term of the equity law:
///   (1 + r_bb) lent_prev - (1 + r_bb) borrowed_prev + borrowed_cur - lent_cur
/// with the inbound repayment leg zeroed when the borrower of last period
/// defaulted. Throws std::invalid_argument if a bank is both lender and
/// borrower within one period.
double settle_interbank(double lent_prev, double borrowed_prev, double lent_cur,
                        double borrowed_cur, double r_bb, bool counterparty_defaulted = false);

/// Clears the open book after bank failures.
///
/// A surviving lender whose borrower failed keeps its position (the
/// repayment leg still appears in next period's settlement) and is charged
/// (1 + r_bb) * amount as bad debt, returned per bank index. A surviving
/// borrower whose lender failed has the position cancelled. Failed banks
/// lose their own positions.
std::vector<double> write_off_interbank(std::span<Bank> banks, const std::vector<bool>& failed,
                                        double r_bb);

/// Applies matched flows to the current-period interbank fields and books.
void apply_flows(std::span<Bank> banks, std::span<const Flow> flows, int period);

}  // namespace cnet::interbank
