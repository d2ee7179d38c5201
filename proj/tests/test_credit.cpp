#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "cnet/credit.hpp"

using namespace cnet;
using doctest::Approx;

TEST_CASE("interest rate relative to the median") {
  CHECK(credit::interest_rate(100.0, 100.0, 0.1) == Approx(0.1).epsilon(1e-15));
  CHECK(credit::interest_rate(200.0, 100.0, 0.1) == Approx(0.0933033).epsilon(1e-6));
  CHECK(credit::interest_rate(50.0, 100.0, 0.1) == Approx(0.1071773).epsilon(1e-6));
}

TEST_CASE("interest rate rejects nonpositive inputs") {
  CHECK_THROWS_AS(credit::interest_rate(0.0, 100.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(credit::interest_rate(-1.0, 100.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(credit::interest_rate(10.0, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("interest rate falls as net worth rises") {
  double prev = credit::interest_rate(0.01, 100.0, 0.1);
  for (double a = 0.02; a < 1e6; a *= 1.5) {
    const double r = credit::interest_rate(a, 100.0, 0.1);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("rates depend only on the ratio to the median") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> a(0.1, 1000.0), c(0.01, 100.0);
  for (int k = 0; k < 300; ++k) {
    std::vector<double> xs(9);
    for (auto& x : xs) x = a(gen);
    const double scale = c(gen);
    std::vector<double> scaled(xs);
    for (auto& x : scaled) x *= scale;
    const double m = credit::sector_median(xs);
    const double ms = credit::sector_median(scaled);
    CHECK(credit::interest_rate(m, m, 0.1) == Approx(0.1).epsilon(1e-15));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(credit::interest_rate(scaled[i], ms, 0.1) ==
            Approx(credit::interest_rate(xs[i], m, 0.1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sector median") {
  CHECK(credit::sector_median(std::vector<double>{1, 2, 3}) == 2.0);
  CHECK(credit::sector_median(std::vector<double>{1, 2, 3, 4}) == 2.5);
  CHECK(credit::sector_median(std::vector<double>{4, 1, 3, 2}) == 2.5);
  CHECK(credit::sector_median(std::vector<double>{7}) == 7.0);
  CHECK_THROWS_AS(credit::sector_median(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("sector median matches a sort-and-index oracle") {
  std::mt19937_64 gen(99);
  std::lognormal_distribution<double> dist(4.0, 1.0);
  for (std::size_t n : {249u, 250u, 251u, 2u, 3u}) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> v(n);
      for (auto& x : v) x = dist(gen);
      std::vector<double> sorted(v);
      std::sort(sorted.begin(), sorted.end());
      const double oracle =
          n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
      CHECK(credit::sector_median(v) == oracle);
    }
  }
}

TEST_CASE("credit supply") {
  CHECK(credit::credit_supply(100.0, 0.85) == Approx(117.6470588).epsilon(1e-9));
  CHECK(credit::credit_supply(0.0, 0.85) == 0.0);
  CHECK(credit::credit_supply(-5.0, 0.85) == 0.0);
  CHECK(credit::credit_supply(100.0, 1.0) == 100.0);
}

TEST_CASE("proportional rationing") {
  auto a = credit::ration(std::vector<double>{10, 20}, 15.0);
  CHECK(a == std::vector<double>{5.0, 10.0});
  auto b = credit::ration(std::vector<double>{10, 20}, 40.0);
  CHECK(b == std::vector<double>{10.0, 20.0});
  auto c = credit::ration(std::vector<double>{0, 0}, 7.0);
  CHECK(c == std::vector<double>{0.0, 0.0});
  CHECK(credit::rationing_factor(std::vector<double>{0, 0}, 7.0) == 1.0);
  CHECK(credit::rationing_factor(std::vector<double>{10, 20}, 15.0) == 0.5);
}

TEST_CASE("rationing is proportional and feasible") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> d(0.0, 100.0), s(0.0, 1000.0);
  std::uniform_int_distribution<int> len(1, 12);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> demands(static_cast<std::size_t>(len(gen)));
    for (auto& x : demands) x = rep % 7 == 0 ? 0.0 : d(gen);
    if (rep % 5 == 0) demands[0] = 0.0;
    const double supply = s(gen);
    const auto alloc = credit::ration(demands, supply);
    const double total_demand = std::accumulate(demands.begin(), demands.end(), 0.0);
    const double total_alloc = std::accumulate(alloc.begin(), alloc.end(), 0.0);
    CHECK(total_alloc <= supply * (1.0 + 1e-12) + 1e-12);
    CHECK(total_alloc == Approx(std::min(supply, total_demand)).epsilon(1e-12));
    double ratio = -1.0;
    for (std::size_t i = 0; i < demands.size(); ++i) {
      CHECK(alloc[i] <= demands[i]);
      CHECK(alloc[i] >= 0.0);
      if (demands[i] > 0.0) {
        const double r = alloc[i] / demands[i];
        if (ratio < 0.0) ratio = r;
        CHECK(r == Approx(ratio).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("residual deposits") {
  CHECK(credit::residual_deposits(117.65, 0.0, 100.0, 0.0) == Approx(17.65));
  CHECK(credit::residual_deposits(50.0, 0.0, 100.0, 0.0) == 0.0);
  CHECK(credit::residual_deposits(0.0, 0.0, 100.0, 0.0) == 0.0);
}

TEST_CASE("balance sheet closes whenever the deposit floor is slack") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 200.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const double loans = u(gen), lent = rep % 2 ? u(gen) : 0.0, equity = u(gen) - 50.0;
    const double borrowed = rep % 2 ? 0.0 : u(gen) / 4.0;
    const double d = credit::residual_deposits(loans, lent, equity, borrowed);
    CHECK(d >= 0.0);
    if (d > 0.0) {
      CHECK(loans + lent == Approx(d + borrowed + equity).epsilon(1e-12));
    }
  }
}
