#include <doctest.h>

#include <cmath>
#include <limits>

#include "cnet/engine.hpp"
#include "cnet/firm.hpp"

using namespace cnet;
using doctest::Approx;

namespace {

Parameters small_params(int n, int horizon, std::uint64_t seed = 1) {
  Parameters p;
  p.n_agents = n;
  p.horizon = horizon;
  p.seed = seed;
  return p;
}

bool same_records(const std::vector<PeriodRecord>& a, const std::vector<PeriodRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& x = a[k];
    const auto& y = b[k];
    if (x.t != y.t || x.avg_output_d != y.avg_output_d || x.bankrupt_d != y.bankrupt_d ||
        x.bankrupt_u != y.bankrupt_u || x.bankrupt_b != y.bankrupt_b ||
        x.total_loans != y.total_loans || x.total_interbank != y.total_interbank ||
        x.mean_rate_d != y.mean_rate_d || x.mean_rate_u != y.mean_rate_u ||
        x.median_A_d != y.median_A_d || x.median_A_u != y.median_A_u || x.mean_E != y.mean_E) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("price draws lie in (0,2) and average 1") {
  RngStream rng(2024);
  double sum = 0.0;
  const int draws = 1000000;
  for (int k = 0; k < draws; ++k) {
    const double u = draw_price(rng);
    REQUIRE(u > 0.0);
    REQUIRE(u < 2.0);
    sum += u;
  }
  CHECK(std::abs(sum / draws - 1.0) < 0.002);
  CHECK(rng.counter() == static_cast<std::uint64_t>(draws));
}

TEST_CASE("same seed gives the same price sequence") {
  RngStream a(5), b(5), c(6);
  bool differs = false;
  for (int k = 0; k < 1000; ++k) {
    const double x = draw_price(a);
    CHECK(x == draw_price(b));
    if (x != draw_price(c)) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("first period matches the hand trace") {
  const Parameters p;
  auto state = init_economy(p);
  RngStream rng(p.seed);
  const auto sr = step(state, rng, p);
  const auto& rec = sr.record;

  const double y = 2.5 * std::pow(100.0, 0.9);
  const double wage = 0.5 * y;
  const double supply = 100.0 / 0.85;
  const double up_factor = (supply - wage) / wage;

  CHECK(rec.t == 1);
  CHECK(rec.mean_rate_d == Approx(0.1).epsilon(1e-14));
  CHECK(rec.mean_rate_u == Approx(0.1).epsilon(1e-14));
  CHECK(rec.median_A_d == 100.0);
  CHECK(rec.median_A_u == 100.0);
  CHECK(rec.total_interbank == 0.0);
  CHECK(up_factor == Approx(0.4917).epsilon(1e-4));
  // Every bank lends its whole supply: the full downstream wage bill plus
  // the rationed upstream remainder.
  CHECK(rec.total_loans == Approx(250.0 * supply).epsilon(1e-12));
  CHECK(rec.avg_output_d == Approx(up_factor * y).epsilon(1e-12));

  for (std::size_t i = 0; i < 250; ++i) {
    const auto& f = state.downstream[i];
    CHECK(sr.effective_output_d[i] == Approx(up_factor * y).epsilon(1e-12));
    if (sr.replaced_downstream[i]) continue;
    CHECK(f.plan.output == Approx(157.7394).epsilon(1e-6));
    CHECK(f.loan.principal == Approx(wage).epsilon(1e-14));
    const auto& u = state.upstream[i];
    CHECK(u.demand == Approx(wage).epsilon(1e-14));
    CHECK(u.delivered / u.demand == Approx(up_factor).epsilon(1e-12));
    CHECK(state.banks[i].ib_lent_cur == 0.0);
    CHECK(state.banks[i].ib_borrowed_cur == 0.0);
  }
  CHECK(state.t == 2);
  CHECK(rng.counter() == 250);
}

TEST_CASE("prices are consumed one per downstream firm in index order") {
  const Parameters p = small_params(7, 3, 99);
  auto state = init_economy(p);
  RngStream rng(p.seed);
  RngStream mirror(p.seed);
  const auto sr = step(state, rng, p);
  for (std::size_t i = 0; i < state.downstream.size(); ++i) {
    const double expected = draw_price(mirror);
    if (sr.replaced_downstream[i]) continue;
    CHECK(state.downstream[i].price == expected);
  }
}

TEST_CASE("run produces one record per period") {
  const auto r1 = run(small_params(20, 1));
  CHECK(r1.records.size() == 1);
  CHECK(r1.growth_window == 0);
  CHECK(r1.growth_networth.empty());

  const auto r = run(small_params(20, 37));
  REQUIRE(r.records.size() == 37);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    const auto& rec = r.records[k];
    CHECK(rec.t == static_cast<int>(k) + 1);
    CHECK(rec.avalanche == rec.bankrupt_d + rec.bankrupt_u + rec.bankrupt_b);
  }
  CHECK(r.final_networth_d.size() == 20);
  CHECK(r.final_networth_u.size() == 20);
  CHECK(r.final_equity_b.size() == 20);
}

TEST_CASE("runs are deterministic in the seed") {
  const auto a = run(small_params(60, 200, 3));
  const auto b = run(small_params(60, 200, 3));
  const auto c = run(small_params(60, 200, 4));
  CHECK(same_records(a.records, b.records));
  CHECK(a.final_networth_d == b.final_networth_d);
  CHECK(a.final_equity_b == b.final_equity_b);
  CHECK(a.growth_networth == b.growth_networth);
  CHECK_FALSE(same_records(a.records, c.records));
}

TEST_CASE("Simulation steps agree with run") {
  const Parameters p = small_params(30, 25, 8);
  Simulation sim(p);
  std::vector<PeriodRecord> stepped;
  for (int t = 0; t < p.horizon; ++t) stepped.push_back(sim.step().record);
  CHECK(same_records(stepped, run(p).records));
  CHECK(sim.state().t == 26);
  CHECK(sim.rng().counter() == 30u * 25u);
}

TEST_CASE("growth window follows min(100, horizon - 1)") {
  const auto short_run = run(small_params(15, 10));
  CHECK(short_run.growth_window == 9);
  CHECK(short_run.growth_networth.size() <= 9u * 15u);
  CHECK(short_run.growth_networth.size() == short_run.growth_output.size());

  const auto mid = run(small_params(15, 100));
  CHECK(mid.growth_window == 99);

  const auto long_run = run(small_params(15, 300));
  CHECK(long_run.growth_window == 100);
  CHECK(long_run.growth_networth.size() <= 100u * 15u);
  for (double g : long_run.growth_networth) CHECK(std::isfinite(g));
}

TEST_CASE("pooled growth rates are ln-differences") {
  std::vector<GrowthSnapshot> snaps(3);
  snaps[0] = {{100.0, 50.0}, {10.0, 5.0}, {false, false}};
  snaps[1] = {{110.0, 50.0}, {11.0, 0.0}, {false, false}};
  snaps[2] = {{121.0, 50.0}, {12.1, 5.0}, {false, false}};
  std::vector<double> g, go;
  pool_growth(snaps, g, go);
  REQUIRE(g.size() == 4);
  CHECK(g[0] == Approx(0.0953102).epsilon(1e-6));
  CHECK(g[0] == Approx(std::log(1.1)).epsilon(1e-15));
  CHECK(g[1] == 0.0);
  CHECK(g[3] == 0.0);
  CHECK(go[0] == Approx(std::log(1.1)));
  CHECK(std::isnan(go[1]));
  CHECK(std::isnan(go[3]));
}

TEST_CASE("transitions adjacent to a replacement are masked") {
  std::vector<GrowthSnapshot> snaps(4);
  snaps[0] = {{100.0, 100.0}, {1, 1}, {false, false}};
  snaps[1] = {{90.0, 100.0}, {1, 1}, {false, false}};
  snaps[2] = {{100.0, 100.0}, {1, 1}, {true, false}};
  snaps[3] = {{105.0, 100.0}, {1, 1}, {false, false}};
  std::vector<double> g, go;
  pool_growth(snaps, g, go);
  // Slot 0 keeps only the 0 -> 1 transition, slot 1 keeps all three.
  REQUIRE(g.size() == 4);
  CHECK(g[0] == Approx(std::log(0.9)));
  CHECK(g[1] == 0.0);
  CHECK(g[2] == 0.0);
  CHECK(g[3] == 0.0);
}

TEST_CASE("corrupted bank equity trips an audit") {
  const Parameters p = small_params(10, 5);
  auto state = init_economy(p);
  RngStream rng(p.seed);
  state.banks[3].equity = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step(state, rng, p), AuditError);
}

TEST_CASE("agents are replaced and populations conserved") {
  const Parameters p = small_params(50, 300, 2);
  Simulation sim(p);
  std::size_t events = 0;
  for (int t = 0; t < p.horizon; ++t) {
    const auto sr = sim.step();
    events += sr.replacements.size();
    CHECK(sr.replacements.size() ==
          static_cast<std::size_t>(sr.record.avalanche));
    for (const auto& e : sr.replacements) {
      if (e.sector == Sector::downstream) CHECK(sim.state().downstream[e.index].net_worth == p.a0);
      if (e.sector == Sector::upstream) CHECK(sim.state().upstream[e.index].net_worth == p.a0);
      if (e.sector == Sector::bank) CHECK(sim.state().banks[e.index].equity == p.e0);
    }
    CHECK(sim.state().downstream.size() == 50);
    CHECK(sim.state().upstream.size() == 50);
    CHECK(sim.state().banks.size() == 50);
  }
  CHECK(events > 0);
}

TEST_CASE("reference economy never collapses over ten seeds") {
  long failures_d = 0, failures_u = 0, failures_b = 0;
  bool interbank_active = false;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Parameters p;
    p.seed = seed;
    const auto r = run(p);
    REQUIRE(r.records.size() == 1000);
    for (const auto& rec : r.records) {
      CHECK(rec.avg_output_d > 0.0);
      failures_d += rec.bankrupt_d;
      failures_u += rec.bankrupt_u;
      failures_b += rec.bankrupt_b;
      if (rec.total_interbank > 0.0) interbank_active = true;
    }
  }
  // Every channel of the cascade is exercised somewhere in the panel.
  CHECK(failures_d > 0);
  CHECK(failures_u > 0);
  CHECK(failures_b > 0);
  CHECK(interbank_active);
}
