#pragma once

#include <span>
#include <vector>

namespace cnet::credit {

/// Loan rate k * (A / median)^(-k); the median firm pays exactly k.
double interest_rate(double net_worth, double median, double k);

/// Sample median; mean of the two middle order statistics for even sizes.
double sector_median(std::span<const double> net_worths);

/// max(E, 0) / alpha
double credit_supply(double equity, double alpha);

/// Common rationing factor min(1, supply / total demand); 1 when nothing is demanded.
double rationing_factor(std::span<const double> demands, double supply);

/// Proportional allocation: demand_i * min(1, supply / sum(demand)).
std::vector<double> ration(std::span<const double> demands, double supply);

/// Deposits as the balance-sheet residual, floored at zero:
/// max(0, loans + ib_lent - equity - ib_borrowed).
double residual_deposits(double loans, double ib_lent, double equity, double ib_borrowed);

}  // namespace cnet::credit
