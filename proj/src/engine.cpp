#include "cnet/engine.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <sstream>

#include "cnet/credit.hpp"
#include "cnet/firm.hpp"
#include "cnet/interbank.hpp"

namespace cnet {

namespace {

// |lhs - rhs| <= tol * max(1, |terms|...). Scaling by the largest term keeps
// the check meaningful when large flows nearly cancel.
void audit(double lhs, double rhs, std::initializer_list<double> terms, int t,
           const char* what, std::size_t index) {
  double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  for (double x : terms) scale = std::max(scale, std::abs(x));
  if (!(std::abs(lhs - rhs) <= kAuditTolerance * scale)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "audit failure at t=" << t << " (" << what << ", agent " << index + 1
        << "): " << lhs << " != " << rhs;
    throw AuditError(msg.str());
  }
}

void audit_le(double lhs, double rhs, int t, const char* what, std::size_t index) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  if (!(lhs <= rhs + kAuditTolerance * scale)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "audit failure at t=" << t << " (" << what << ", agent " << index + 1
        << "): " << lhs << " > " << rhs;
    throw AuditError(msg.str());
  }
}

}  // namespace

StepResult step(EconomyState& state, RngStream& rng, const Parameters& p) {
  const std::size_t n = state.downstream.size();
  const Topology& topo = state.topology;
  auto& down = state.downstream;
  auto& up = state.upstream;
  auto& banks = state.banks;
  const int t = state.t;

  // Roll the interbank book: positions opened last period fall due now.
  for (auto& b : banks) {
    b.ib_lent_prev = 0.0;
    b.ib_borrowed_prev = 0.0;
    for (const auto& pos : b.positions) {
      (pos.direction == Direction::lent ? b.ib_lent_prev : b.ib_borrowed_prev) += pos.amount;
    }
    b.positions.clear();
    b.ib_lent_cur = 0.0;
    b.ib_borrowed_cur = 0.0;
    b.loans_extended = 0.0;
    b.bad_debt = 0.0;
  }

  // (1) medians and loan rates from start-of-period net worths.
  std::vector<double> a_d(n), a_u(n);
  for (std::size_t i = 0; i < n; ++i) {
    a_d[i] = down[i].net_worth;
    a_u[i] = up[i].net_worth;
  }
  state.median_d = credit::sector_median(a_d);
  state.median_u = credit::sector_median(a_u);
  for (std::size_t i = 0; i < n; ++i) {
    down[i].rate = credit::interest_rate(a_d[i], state.median_d, p.k);
    up[i].rate = credit::interest_rate(a_u[i], state.median_u, p.k);
  }

  // (2) unconstrained downstream plans.
  for (auto& f : down) f.plan = firm::plan_downstream(f.net_worth, p);

  // (3) anticipated credit demand, interbank matching, downstream rationing.
  std::vector<double> positions(n), excess(n), deficit(n);
  std::vector<double> demand_d(n);
  for (std::size_t z = 0; z < n; ++z) {
    auto& b = banks[z];
    b.supply = credit::credit_supply(b.equity, p.alpha);
    demand_d[z] = p.w * down[z].plan.labor;
    const Pair& cust = topo.customers(z);
    const double implied_goods = firm::upstream_demand(down[cust[0]].plan.intermediate_order,
                                                       down[cust[1]].plan.intermediate_order);
    const double demand_u = p.w * firm::upstream_labor(implied_goods, p.delta_u);
    positions[z] = interbank::net_position(b.supply, demand_d[z] + demand_u);
    excess[z] = std::max(positions[z], 0.0);
    deficit[z] = std::max(-positions[z], 0.0);
  }
  const auto flows = interbank::match_neighbors(positions, topo);
  interbank::apply_flows(banks, flows, t);

  std::vector<double> available(n);
  double total_lent = 0.0, total_borrowed = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    const auto& b = banks[z];
    audit_le(b.ib_lent_cur, excess[z], t, "interbank lending within excess", z);
    audit_le(b.ib_borrowed_cur, deficit[z], t, "interbank borrowing within deficit", z);
    if (b.ib_lent_cur > 0.0 && b.ib_borrowed_cur > 0.0) {
      throw AuditError("audit failure at t=" + std::to_string(t) + ": bank " +
                       std::to_string(z + 1) + " both lends and borrows");
    }
    total_lent += b.ib_lent_cur;
    total_borrowed += b.ib_borrowed_cur;
    available[z] = b.supply - b.ib_lent_cur + b.ib_borrowed_cur;
  }
  audit(total_lent, total_borrowed, {}, t, "interbank flow conservation", 0);

  for (std::size_t i = 0; i < n; ++i) {
    auto& f = down[i];
    const std::size_t z = topo.bank_of(i);
    const double demand = demand_d[i];
    const double factor = credit::rationing_factor(std::span(&demand, 1), available[z]);
    f.plan = firm::scale_plan(f.plan, factor);
    f.loan = make_loan(p.w * f.plan.labor, f.rate);
    banks[z].loans_extended += f.loan.principal;
    audit_le(f.loan.principal, demand, t, "downstream loan within demand", i);
  }

  // (4)-(5) intermediate orders, upstream demand and rationing from residual supply.
  std::vector<double> delivery_factor(n);
  std::vector<double> credit_demand_u(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto& f = up[j];
    const std::size_t z = topo.bank_of(j);
    const Pair& cust = topo.customers(j);
    f.demand = firm::upstream_demand(down[cust[0]].plan.intermediate_order,
                                     down[cust[1]].plan.intermediate_order);
    credit_demand_u[j] = p.w * firm::upstream_labor(f.demand, p.delta_u);
    const double residual = std::max(available[z] - banks[z].loans_extended, 0.0);
    const double factor =
        credit::rationing_factor(std::span(&credit_demand_u[j], 1), residual);
    delivery_factor[j] = factor;
    f.delivered = f.demand * factor;
    f.labor = firm::upstream_labor(f.delivered, p.delta_u);
    f.loan = make_loan(p.w * f.labor, f.rate);
    f.write_offs = 0.0;
    banks[z].loans_extended += f.loan.principal;
    audit_le(f.loan.principal, credit_demand_u[j], t, "upstream loan within demand", j);
    audit_le(f.delivered, f.demand, t, "delivery within demand", j);
  }
  double total_loans = 0.0, total_principal = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    audit_le(banks[z].loans_extended, available[z], t, "rationing feasibility", z);
    total_loans += banks[z].loans_extended;
  }
  for (std::size_t i = 0; i < n; ++i) total_principal += down[i].loan.principal + up[i].loan.principal;
  audit(total_loans, total_principal, {}, t, "credit extended equals wage bills financed", 0);

  // (6) deliveries, effective output, price draws in ascending index order.
  std::vector<std::array<double, 2>> from_supplier(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = down[i];
    const Pair& sup = topo.suppliers(i);
    const double half = f.plan.intermediate_order / 2.0;
    from_supplier[i] = {half * delivery_factor[sup[0]], half * delivery_factor[sup[1]]};
    f.delivered = from_supplier[i][0] + from_supplier[i][1];
    f.plan.effective_output = firm::effective_output(f.plan, f.delivered, p);
  }
  for (auto& f : down) f.price = draw_price(rng);

  std::vector<double> firm_write_offs(n, 0.0);
  std::vector<bool> failed_d(n, false), failed_u(n, false), failed_b(n, false);
  std::vector<double> effective_output(n);
  int bankrupt_d = 0, bankrupt_u = 0, bankrupt_b = 0;
  double sum_output = 0.0;

  auto check_resolution = [&](const cascade::Shortfall& s, const cascade::Resolution& r,
                              std::size_t index) {
    double claims = 0.0, written = 0.0;
    for (std::size_t c = 0; c < s.claims.size(); ++c) {
      claims += s.claims[c].amount;
      written += r.write_offs[c];
      audit_le(r.write_offs[c], s.claims[c].amount, t, "creditor loss within claim", index);
    }
    audit(written, std::min(s.magnitude, claims), {s.magnitude, claims}, t,
          "write-off conservation", index);
  };

  // (7) downstream settlement; defaults hit the bank and both suppliers.
  for (std::size_t i = 0; i < n; ++i) {
    auto& f = down[i];
    const double a_prev = f.net_worth;
    f.profit = firm::downstream_profit(f.price, f.plan.effective_output, f.rate, f.plan.labor,
                                       f.delivered, p);
    const auto upd = firm::update_net_worth(a_prev, f.profit);
    f.net_worth = upd.net_worth;
    const double revenue = f.price * f.plan.effective_output;
    const double commercial_due = (1.0 + p.r_u) * p.p * f.delivered;
    audit(f.net_worth, a_prev + revenue - f.loan.repayment_due - commercial_due,
          {a_prev, revenue, f.loan.repayment_due, commercial_due}, t, "downstream net-worth law",
          i);
    effective_output[i] = f.plan.effective_output;
    sum_output += f.plan.effective_output;
    if (upd.bankrupt || f.net_worth <= 0.0) {
      failed_d[i] = true;
      ++bankrupt_d;
      if (f.net_worth < 0.0) {
        const Pair& sup = topo.suppliers(i);
        cascade::Shortfall s{AgentRef{Sector::downstream, i}, -f.net_worth, {}};
        s.claims.push_back({AgentRef{Sector::bank, topo.bank_of(i)}, f.loan.repayment_due});
        s.claims.push_back(
            {AgentRef{Sector::upstream, sup[0]}, (1.0 + p.r_u) * p.p * from_supplier[i][0]});
        s.claims.push_back(
            {AgentRef{Sector::upstream, sup[1]}, (1.0 + p.r_u) * p.p * from_supplier[i][1]});
        const auto r = cascade::resolve_firm_bankruptcy(s);
        check_resolution(s, r, i);
        firm_write_offs[topo.bank_of(i)] += r.write_offs[0];
        up[sup[0]].write_offs += r.write_offs[1];
        up[sup[1]].write_offs += r.write_offs[2];
      }
    }
  }

  // (8) upstream settlement, net of commercial claims lost to failed customers.
  for (std::size_t j = 0; j < n; ++j) {
    auto& f = up[j];
    const double a_prev = f.net_worth;
    f.profit = firm::upstream_profit(f.delivered, f.rate, f.labor, p) - f.write_offs;
    const auto upd = firm::update_net_worth(a_prev, f.profit);
    f.net_worth = upd.net_worth;
    const double sales = (1.0 + p.r_u) * p.p * f.delivered;
    audit(f.net_worth, a_prev + sales - f.write_offs - f.loan.repayment_due,
          {a_prev, sales, f.write_offs, f.loan.repayment_due}, t, "upstream net-worth law", j);
    if (upd.bankrupt || f.net_worth <= 0.0) {
      failed_u[j] = true;
      ++bankrupt_u;
      if (f.net_worth < 0.0) {
        cascade::Shortfall s{AgentRef{Sector::upstream, j}, -f.net_worth, {}};
        s.claims.push_back({AgentRef{Sector::bank, topo.bank_of(j)}, f.loan.repayment_due});
        const auto r = cascade::resolve_firm_bankruptcy(s);
        check_resolution(s, r, j);
        firm_write_offs[topo.bank_of(j)] += r.write_offs[0];
      }
    }
  }

  // (9) banks: deposits, profit, bad debt, interbank settlement, equity.
  double sum_rate_d = 0.0, sum_rate_u = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    auto& b = banks[z];
    const auto& fd = down[z];
    const auto& fu = up[z];
    const double e_prev = b.equity;
    b.deposits = credit::residual_deposits(b.loans_extended, b.ib_lent_cur, e_prev,
                                           b.ib_borrowed_cur);
    b.profit = cascade::bank_profit(fd.rate, fd.loan.principal, fu.rate, fu.loan.principal,
                                    p.r_d, b.deposits);
    b.bad_debt = cascade::aggregate_bad_debt(firm_write_offs[z], b.pending_ib_bad_debt);
    b.pending_ib_bad_debt = 0.0;
    b.ib_flow = interbank::settle_interbank(b.ib_lent_prev, b.ib_borrowed_prev, b.ib_lent_cur,
                                            b.ib_borrowed_cur, p.r_bb);
    const auto upd = cascade::update_bank_equity(e_prev, b.profit, b.bad_debt, b.ib_flow);
    b.equity = upd.equity;

    const double interest = fd.loan.repayment_due - fd.loan.principal + fu.loan.repayment_due -
                            fu.loan.principal;
    const double ib_cash = (1.0 + p.r_bb) * (b.ib_lent_prev - b.ib_borrowed_prev) +
                           b.ib_borrowed_cur - b.ib_lent_cur;
    audit(b.equity, e_prev + interest - p.r_d * b.deposits - b.bad_debt + ib_cash,
          {e_prev, interest, b.bad_debt, b.ib_lent_prev, b.ib_borrowed_prev, b.ib_lent_cur,
           b.ib_borrowed_cur},
          t, "bank equity law", z);
    if (upd.failed || b.equity <= 0.0) {
      failed_b[z] = true;
      ++bankrupt_b;
    }
    sum_rate_d += fd.rate;
    sum_rate_u += fu.rate;
  }
  const auto ib_write_offs = interbank::write_off_interbank(banks, failed_b, p.r_bb);
  for (std::size_t z = 0; z < n; ++z) banks[z].pending_ib_bad_debt += ib_write_offs[z];

  // (10) one-to-one replacement.
  for (auto& f : down) ++f.age;
  for (auto& f : up) ++f.age;
  for (auto& b : banks) ++b.age;
  StepResult out;
  out.replacements = cascade::replace_agents(state, failed_d, failed_u, failed_b, p);
  out.replaced_downstream = failed_d;
  out.effective_output_d = std::move(effective_output);

  // (11) record.
  PeriodRecord& rec = out.record;
  const double dn = static_cast<double>(n);
  rec.t = t;
  rec.avg_output_d = sum_output / dn;
  rec.bankrupt_d = bankrupt_d;
  rec.bankrupt_u = bankrupt_u;
  rec.bankrupt_b = bankrupt_b;
  rec.avalanche = bankrupt_d + bankrupt_u + bankrupt_b;
  rec.total_loans = total_loans;
  rec.total_interbank = total_lent;
  rec.mean_rate_d = sum_rate_d / dn;
  rec.mean_rate_u = sum_rate_u / dn;
  rec.median_A_d = state.median_d;
  rec.median_A_u = state.median_u;
  double sum_e = 0.0;
  for (const auto& b : banks) sum_e += b.equity;
  rec.mean_E = sum_e / dn;

  if (state.downstream.size() != n || state.upstream.size() != n || state.banks.size() != n) {
    throw AuditError("audit failure: agent count changed at t=" + std::to_string(t));
  }
  ++state.t;
  return out;
}

void pool_growth(const std::vector<GrowthSnapshot>& snapshots, std::vector<double>& networth,
                 std::vector<double>& output) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 1; k < snapshots.size(); ++k) {
    const auto& prev = snapshots[k - 1];
    const auto& cur = snapshots[k];
    for (std::size_t i = 0; i < cur.net_worth.size(); ++i) {
      if (prev.replaced[i] || cur.replaced[i]) continue;
      networth.push_back(std::log(cur.net_worth[i]) - std::log(prev.net_worth[i]));
      const bool positive = prev.output[i] > 0.0 && cur.output[i] > 0.0;
      output.push_back(positive ? std::log(cur.output[i]) - std::log(prev.output[i]) : nan);
    }
  }
}

Simulation::Simulation(const Parameters& p)
    : params_(validate_params(p)), state_(init_economy(p)), rng_(p.seed) {}

RunResult run(const Parameters& p) {
  Simulation sim(p);
  RunResult result;
  result.params = p;
  result.records.reserve(static_cast<std::size_t>(p.horizon));

  const int window = std::min(kGrowthWindow, p.horizon - 1);
  result.growth_window = window;
  const int first_snapshot = p.horizon - window;  // periods first_snapshot..horizon

  std::vector<GrowthSnapshot> snaps;
  snaps.reserve(static_cast<std::size_t>(window + 1));

  for (int t = 1; t <= p.horizon; ++t) {
    auto sr = sim.step();
    result.records.push_back(sr.record);
    result.replacements.insert(result.replacements.end(), sr.replacements.begin(),
                               sr.replacements.end());
    if (window > 0 && t >= first_snapshot) {
      GrowthSnapshot s;
      s.net_worth.reserve(sim.state().downstream.size());
      for (const auto& f : sim.state().downstream) s.net_worth.push_back(f.net_worth);
      s.output = std::move(sr.effective_output_d);
      s.replaced = std::move(sr.replaced_downstream);
      snaps.push_back(std::move(s));
    }
  }

  pool_growth(snaps, result.growth_networth, result.growth_output);

  const auto& st = sim.state();
  for (const auto& f : st.downstream) result.final_networth_d.push_back(f.net_worth);
  for (const auto& f : st.upstream) result.final_networth_u.push_back(f.net_worth);
  for (const auto& b : st.banks) result.final_equity_b.push_back(b.equity);
  return result;
}

}  // namespace cnet
