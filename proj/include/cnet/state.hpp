#pragma once

#include <cstddef>
#include <vector>

#include "cnet/params.hpp"
#include "cnet/topology.hpp"

namespace cnet {

enum class Sector { downstream, upstream, bank };

struct AgentRef {
  Sector sector = Sector::downstream;
  std::size_t index = 0;

  bool operator==(const AgentRef&) const = default;
};

/// One period's production plan of a downstream firm.
struct Plan {
  double output = 0.0;              // Y
  double labor = 0.0;               // N = delta_d * Y
  double intermediate_order = 0.0;  // Q = gamma * Y
  double effective_output = 0.0;    // after credit rationing and delivery shortfalls
};

/// One-period bank loan financing a wage bill.
struct Loan {
  double principal = 0.0;
  double rate = 0.0;
  double repayment_due = 0.0;  // (1 + rate) * principal
};

Loan make_loan(double principal, double rate);

struct Claim {
  AgentRef creditor;
  double amount = 0.0;
};

struct DownstreamFirm {
  std::size_t id = 0;
  double net_worth = 0.0;
  Plan plan;
  Loan loan;
  double rate = 0.0;
  double price = 0.0;
  double delivered = 0.0;  // intermediates received from both suppliers
  double profit = 0.0;
  int age = 0;
};

struct UpstreamFirm {
  std::size_t id = 0;
  double net_worth = 0.0;
  double demand = 0.0;
  double delivered = 0.0;
  double labor = 0.0;
  Loan loan;
  double rate = 0.0;
  double write_offs = 0.0;  // commercial claims lost to failed customers
  double profit = 0.0;
  int age = 0;
};

enum class Direction { lent, borrowed };

struct InterbankPosition {
  std::size_t counterparty = 0;
  double amount = 0.0;
  Direction direction = Direction::lent;
  int opened_at = 0;
};

struct Bank {
  std::size_t id = 0;
  double equity = 0.0;
  double supply = 0.0;
  double loans_extended = 0.0;
  double deposits = 0.0;
  double bad_debt = 0.0;
  double ib_lent_prev = 0.0;
  double ib_borrowed_prev = 0.0;
  double ib_lent_cur = 0.0;
  double ib_borrowed_cur = 0.0;
  double ib_flow = 0.0;
  double profit = 0.0;
  int age = 0;
  // Positions opened this period; settled next period.
  std::vector<InterbankPosition> positions;
  // Interbank write-offs booked into next period's bad debt.
  double pending_ib_bad_debt = 0.0;
};

struct EconomyState {
  int t = 1;
  std::vector<DownstreamFirm> downstream;
  std::vector<UpstreamFirm> upstream;
  std::vector<Bank> banks;
  Topology topology;
  double median_d = 0.0;
  double median_u = 0.0;
};

DownstreamFirm new_downstream_firm(std::size_t id, const Parameters& p);
UpstreamFirm new_upstream_firm(std::size_t id, const Parameters& p);
Bank new_bank(std::size_t id, const Parameters& p);

/// Fresh economy at t = 1 with every agent at its entry endowment.
EconomyState init_economy(const Parameters& p);

}  // namespace cnet
