#include "cnet/credit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cnet::credit {

double interest_rate(double net_worth, double median, double k) {
  if (!(net_worth > 0.0) || !(median > 0.0)) {
    throw std::invalid_argument("interest_rate: net worth and median must be positive");
  }
  return k * std::pow(net_worth / median, -k);
}

double sector_median(std::span<const double> net_worths) {
  if (net_worths.empty()) throw std::invalid_argument("sector_median: empty sample");
  std::vector<double> v(net_worths.begin(), net_worths.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double credit_supply(double equity, double alpha) { return std::max(equity, 0.0) / alpha; }

double rationing_factor(std::span<const double> demands, double supply) {
  const double total = std::accumulate(demands.begin(), demands.end(), 0.0);
  if (!(total > 0.0)) return 1.0;
  return std::min(1.0, std::max(supply, 0.0) / total);
}

std::vector<double> ration(std::span<const double> demands, double supply) {
  const double f = rationing_factor(demands, supply);
  std::vector<double> out(demands.size());
  std::transform(demands.begin(), demands.end(), out.begin(), [f](double d) { return d * f; });
  return out;
}

double residual_deposits(double loans, double ib_lent, double equity, double ib_borrowed) {
  return std::max(0.0, loans + ib_lent - equity - ib_borrowed);
}

}  // namespace cnet::credit
