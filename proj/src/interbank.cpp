#include "cnet/interbank.hpp"

#include <algorithm>
#include <stdexcept>

namespace cnet::interbank {

double net_position(double supply, double demand) { return supply - demand; }

std::vector<Flow> match_neighbors(std::span<const double> positions, const Topology& topology) {
  if (positions.size() != topology.size()) {
    throw std::invalid_argument("match_neighbors: one position per bank required");
  }
  std::vector<double> excess(positions.size());
  std::transform(positions.begin(), positions.end(), excess.begin(),
                 [](double x) { return std::max(x, 0.0); });

  std::vector<Flow> flows;
  for (std::size_t z = 0; z < positions.size(); ++z) {
    if (!(positions[z] < 0.0)) continue;
    const double request = -positions[z] / 2.0;
    for (std::size_t nb : topology.neighbors(z)) {
      const double leg = std::min(request, excess[nb]);
      if (leg > 0.0) {
        excess[nb] -= leg;
        flows.push_back({nb, z, leg});
      }
    }
  }
  return flows;
}

double settle_interbank(double lent_prev, double borrowed_prev, double lent_cur,
                        double borrowed_cur, double r_bb, bool counterparty_defaulted) {
  if (lent_prev != 0.0 && borrowed_prev != 0.0) {
    throw std::invalid_argument("settle_interbank: lender and borrower in the previous period");
  }
  if (lent_cur != 0.0 && borrowed_cur != 0.0) {
    throw std::invalid_argument("settle_interbank: lender and borrower in the current period");
  }
  const double inbound = counterparty_defaulted ? 0.0 : (1.0 + r_bb) * lent_prev;
  return inbound - (1.0 + r_bb) * borrowed_prev + borrowed_cur - lent_cur;
}

std::vector<double> write_off_interbank(std::span<Bank> banks, const std::vector<bool>& failed,
                                        double r_bb) {
  std::vector<double> bad_debt(banks.size(), 0.0);
  for (std::size_t z = 0; z < banks.size(); ++z) {
    auto& book = banks[z].positions;
    if (failed[z]) {
      book.clear();
      continue;
    }
    std::erase_if(book, [&](const InterbankPosition& pos) {
      if (!failed[pos.counterparty]) return false;
      if (pos.direction == Direction::lent) {
        bad_debt[z] += (1.0 + r_bb) * pos.amount;
        return false;
      }
      return true;
    });
  }
  return bad_debt;
}

void apply_flows(std::span<Bank> banks, std::span<const Flow> flows, int period) {
  for (const auto& f : flows) {
    auto& lender = banks[f.lender];
    auto& borrower = banks[f.borrower];
    lender.ib_lent_cur += f.amount;
    borrower.ib_borrowed_cur += f.amount;
    lender.positions.push_back({f.borrower, f.amount, Direction::lent, period});
    borrower.positions.push_back({f.lender, f.amount, Direction::borrowed, period});
  }
}

}  // namespace cnet::interbank
