#include "cnet/firm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cnet::firm {

Plan plan_downstream(double net_worth, const Parameters& p) {
  if (!(net_worth > 0.0)) {
    throw std::invalid_argument("plan_downstream: net worth must be positive, got " +
                                std::to_string(net_worth));
  }
  Plan plan;
  plan.output = p.phi * std::pow(net_worth, p.beta);
  plan.labor = p.delta_d * plan.output;
  plan.intermediate_order = p.gamma * plan.output;
  plan.effective_output = plan.output;
  return plan;
}

Plan scale_plan(const Plan& plan, double factor) {
  if (!(factor >= 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("scale_plan: factor must lie in [0,1], got " +
                                std::to_string(factor));
  }
  Plan out;
  out.output = plan.output * factor;
  out.labor = plan.labor * factor;
  out.intermediate_order = plan.intermediate_order * factor;
  out.effective_output = plan.effective_output * factor;
  return out;
}

double upstream_demand(double order_left, double order_right) {
  return order_left / 2.0 + order_right / 2.0;
}

double upstream_labor(double goods, double delta_u) { return goods / delta_u; }

double effective_output(const Plan& plan, double delivered, const Parameters& p) {
  // Leontief: the binding input determines output; never above the plan.
  const double by_labor = plan.labor / p.delta_d;
  const double by_goods = delivered / p.gamma;
  return std::min({by_labor, by_goods, plan.output});
}

double downstream_profit(double price, double effective_output, double rate, double labor,
                         double delivered, const Parameters& p) {
  return price * effective_output - (1.0 + rate) * p.w * labor -
         (1.0 + p.r_u) * p.p * delivered;
}

double upstream_profit(double delivered, double rate, double labor, const Parameters& p) {
  return p.p * (1.0 + p.r_u) * delivered - (1.0 + rate) * p.w * labor;
}

NetWorthUpdate update_net_worth(double previous, double profit) {
  const double next = previous + profit;
  return {next, next < 0.0};
}

}  // namespace cnet::firm
