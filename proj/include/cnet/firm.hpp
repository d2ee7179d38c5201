#pragma once

#include "cnet/params.hpp"
#include "cnet/state.hpp"

namespace cnet::firm {

/// Y = phi * A^beta with N = delta_d * Y and Q = gamma * Y.
/// Throws std::invalid_argument for A <= 0.
Plan plan_downstream(double net_worth, const Parameters& p);

/// Scales Y, N, Q (and the effective output) by factor in [0,1].
Plan scale_plan(const Plan& plan, double factor);

/// Intermediate demand faced by an upstream firm: half of each customer's order.
double upstream_demand(double order_left, double order_right);

/// Labor needed to produce `goods` when one unit of labor yields delta_u goods.
double upstream_labor(double goods, double delta_u);

/// Fixed-proportions output given the labor in the plan and the
/// intermediates actually delivered.
double effective_output(const Plan& plan, double delivered, const Parameters& p);

/// u * Y_eff - (1 + r_bd) w N - (1 + r_u) p Q_delivered
double downstream_profit(double price, double effective_output, double rate, double labor,
                         double delivered, const Parameters& p);

/// p (1 + r_u) Q_delivered - (1 + r_bu) w N
double upstream_profit(double delivered, double rate, double labor, const Parameters& p);

struct NetWorthUpdate {
  double net_worth = 0.0;
  bool bankrupt = false;  // strictly negative net worth
};

NetWorthUpdate update_net_worth(double previous, double profit);

}  // namespace cnet::firm
