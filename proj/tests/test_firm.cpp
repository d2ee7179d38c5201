#include <doctest.h>

#include <cmath>
#include <random>

#include "cnet/firm.hpp"

using namespace cnet;
using doctest::Approx;

namespace {

// Independent route to phi * A^beta: exp(beta ln A) in extended precision.
long double reference_output(long double a, long double phi, long double beta) {
  return phi * std::exp(beta * std::log(a));
}

}  // namespace

TEST_CASE("plan at the entry endowment") {
  const Parameters p;
  const auto plan = firm::plan_downstream(100.0, p);
  // 100^0.9 = 10^1.8
  const long double oracle = 2.5L * std::pow(10.0L, 1.8L);
  CHECK(plan.output == Approx(static_cast<double>(oracle)).epsilon(1e-13));
  CHECK(plan.output == Approx(157.7394).epsilon(1e-6));
  CHECK(plan.labor == Approx(78.8697).epsilon(1e-6));
  CHECK(plan.intermediate_order == Approx(78.8697).epsilon(1e-6));
  CHECK(plan.effective_output == plan.output);
}

TEST_CASE("unit net worth produces phi") {
  const Parameters p;
  CHECK(firm::plan_downstream(1.0, p).output == 2.5);
}

TEST_CASE("plan output agrees with an extended-precision oracle") {
  const Parameters p;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(0.01, 1e5);
  for (int k = 0; k < 10; ++k) {
    const double a = dist(gen);
    const auto expected = static_cast<double>(reference_output(a, p.phi, p.beta));
    CHECK(firm::plan_downstream(a, p).output == Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("bankrupt firms never plan") {
  const Parameters p;
  CHECK_THROWS_AS(firm::plan_downstream(0.0, p), std::invalid_argument);
  CHECK_THROWS_AS(firm::plan_downstream(-3.0, p), std::invalid_argument);
}

TEST_CASE("plan is strictly increasing in net worth") {
  const Parameters p;
  double a = 0.5;
  auto prev = firm::plan_downstream(a, p);
  for (int k = 0; k < 200; ++k) {
    a *= 1.07;
    const auto cur = firm::plan_downstream(a, p);
    CHECK(cur.output > prev.output);
    CHECK(cur.labor > prev.labor);
    CHECK(cur.intermediate_order > prev.intermediate_order);
    prev = cur;
  }
}

TEST_CASE("scale_plan") {
  const Parameters p;
  const auto plan = firm::plan_downstream(100.0, p);

  const auto same = firm::scale_plan(plan, 1.0);
  CHECK(same.output == plan.output);
  CHECK(same.labor == plan.labor);
  CHECK(same.intermediate_order == plan.intermediate_order);

  const auto half = firm::scale_plan(plan, 0.5);
  CHECK(half.output == Approx(78.8697).epsilon(1e-6));
  CHECK(half.labor == Approx(39.43485).epsilon(1e-6));
  CHECK(half.intermediate_order == Approx(39.43485).epsilon(1e-6));

  const auto idle = firm::scale_plan(plan, 0.0);
  CHECK(idle.output == 0.0);
  CHECK(idle.labor == 0.0);
  CHECK(idle.intermediate_order == 0.0);

  CHECK_THROWS_AS(firm::scale_plan(plan, 1.01), std::invalid_argument);
  CHECK_THROWS_AS(firm::scale_plan(plan, -0.01), std::invalid_argument);
}

TEST_CASE("scaled plans keep their input ratios") {
  const Parameters p;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> a_dist(0.1, 1e4), f_dist(1e-6, 1.0);
  for (int k = 0; k < 500; ++k) {
    const auto plan = firm::scale_plan(firm::plan_downstream(a_dist(gen), p), f_dist(gen));
    CHECK(plan.labor / plan.output == Approx(p.delta_d).epsilon(1e-14));
    CHECK(plan.intermediate_order / plan.output == Approx(p.gamma).epsilon(1e-14));
  }
}

TEST_CASE("upstream demand splits each customer order in half") {
  CHECK(firm::upstream_demand(10.0, 20.0) == 15.0);
  CHECK(firm::upstream_demand(7.25, 7.25) == 7.25);
  CHECK(firm::upstream_demand(0.0, 0.0) == 0.0);
}

TEST_CASE("upstream labor") {
  CHECK(firm::upstream_labor(78.87, 1.0) == 78.87);
  CHECK(firm::upstream_labor(0.0, 1.0) == 0.0);
  CHECK(firm::upstream_labor(10.0, 2.0) == 5.0);
}

TEST_CASE("fixed-proportions effective output") {
  const Parameters p;
  const auto plan = firm::plan_downstream(100.0, p);
  CHECK(firm::effective_output(plan, plan.intermediate_order, p) == Approx(plan.output));
  CHECK(firm::effective_output(plan, plan.intermediate_order / 2.0, p) ==
        Approx(plan.output / 2.0));
  CHECK(firm::effective_output(plan, 0.0, p) == 0.0);
  for (double share : {0.1, 0.3, 0.77, 1.0}) {
    CHECK(firm::effective_output(plan, share * plan.intermediate_order, p) <= plan.output);
  }
}

TEST_CASE("downstream profit") {
  const Parameters p;
  const auto plan = firm::plan_downstream(100.0, p);
  const double at_unit_price =
      firm::downstream_profit(1.0, plan.output, 0.1, plan.labor, plan.intermediate_order, p);
  CHECK(at_unit_price == Approx(-11.8305).epsilon(1e-5));
  const double at_zero_price =
      firm::downstream_profit(0.0, plan.output, 0.1, plan.labor, plan.intermediate_order, p);
  CHECK(at_zero_price == Approx(-169.5699).epsilon(1e-6));
  // Break-even price is 1.075 with these rates.
  CHECK(firm::downstream_profit(1.075, plan.output, 0.1, plan.labor, plan.intermediate_order,
                                p) == Approx(0.0).epsilon(1e-9));
  CHECK(firm::downstream_profit(1.3, 0.0, 0.1, 0.0, 0.0, p) == 0.0);
}

TEST_CASE("downstream profit is affine in the price with slope Y_eff") {
  const Parameters p;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 2.0), a(1.0, 1e3), r(0.05, 0.2);
  for (int k = 0; k < 100; ++k) {
    const auto plan = firm::plan_downstream(a(gen), p);
    const double rate = r(gen);
    const double u0 = u(gen), u1 = u(gen);
    const double y_eff = plan.output * 0.8;
    const double d0 =
        firm::downstream_profit(u0, y_eff, rate, plan.labor, plan.intermediate_order, p);
    const double d1 =
        firm::downstream_profit(u1, y_eff, rate, plan.labor, plan.intermediate_order, p);
    if (std::abs(u1 - u0) > 1e-3) CHECK((d1 - d0) / (u1 - u0) == Approx(y_eff).epsilon(1e-9));
  }
}

TEST_CASE("upstream profit") {
  const Parameters p;
  CHECK(firm::upstream_profit(78.8697, 0.1, 78.8697, p) == Approx(-3.943485).epsilon(1e-6));
  CHECK(firm::upstream_profit(0.0, 0.1, 0.0, p) == 0.0);
  CHECK(firm::upstream_profit(42.0, 0.05, 42.0, p) == 0.0);
}

TEST_CASE("upstream margin has the sign of r_u - r_bu") {
  const Parameters p;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> q(0.01, 500.0), r(0.0, 0.3);
  for (int k = 0; k < 500; ++k) {
    const double goods = q(gen);
    const double rate = r(gen);
    const double profit = firm::upstream_profit(goods, rate, goods / p.delta_u, p);
    if (rate > p.r_u) CHECK(profit < 0.0);
    if (rate < p.r_u) CHECK(profit > 0.0);
  }
}

TEST_CASE("idle firm keeps its net worth") {
  const Parameters p;
  const double profit = firm::downstream_profit(1.7, 0.0, 0.1, 0.0, 0.0, p);
  const auto upd = firm::update_net_worth(42.0, profit);
  CHECK(upd.net_worth == 42.0);
  CHECK_FALSE(upd.bankrupt);
}

TEST_CASE("net-worth update and the strict bankruptcy threshold") {
  auto a = firm::update_net_worth(100.0, -11.83);
  CHECK(a.net_worth == Approx(88.17));
  CHECK_FALSE(a.bankrupt);

  auto b = firm::update_net_worth(10.0, -10.0);
  CHECK(b.net_worth == 0.0);
  CHECK_FALSE(b.bankrupt);

  auto c = firm::update_net_worth(10.0, -10.01);
  CHECK(c.net_worth == Approx(-0.01));
  CHECK(c.bankrupt);
}
