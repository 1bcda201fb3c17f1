#include <doctest.h>

#include <cmath>

#include "dgf/theory.hpp"
#include "support.hpp"

using namespace dgf;

namespace {

// Term-by-term reference sum, written independently of eq1_saving.
double eq1_reference(double p, double r, double u) {
  double s = 0.0;
  for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(std::floor(u)); ++i)
    s += std::pow(1.0 - p, static_cast<double>(i - 1)) * p * (u + 1.0 - i) / (r + u);
  return s;
}

}  // namespace

TEST_SUITE("theory") {

TEST_CASE("saving formula") {
  CHECK(eq1_saving({0.0, 7.0, 3.0, 0.0}) == 0.0);
  CHECK(eq1_saving({1.0, 1.0, 1.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  // 0.03 + 0.018 + 0.0081
  CHECK(eq1_saving({0.1, 7.0, 3.0, 0.0}) == doctest::Approx(0.0561).epsilon(1e-12));
  // fractional u: floor(2.5) = 2 terms, numerator keeps 2.5
  double expect = 0.1 * 2.5 / 9.5 + 0.9 * 0.1 * 1.5 / 9.5;
  CHECK(eq1_saving({0.1, 7.0, 2.5, 0.0}) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS(eq1_saving({0.1, 0.0, 0.0, 0.0}));
  CHECK_THROWS(eq1_saving({1.5, 7.0, 3.0, 0.0}));
}

TEST_CASE("saving stays within [0, u/(r+u)], peak exactly at p=1") {
  std::mt19937_64 rng = make_stream(21, 1);
  for (int i = 0; i < 200; ++i) {
    double r = rand_below(rng, 20);
    double u = 1.0 + rand_below(rng, 30);
    double p = rand_unit(rng);
    double s = eq1_saving({p, r, u, 0.0});
    CHECK(s >= 0.0);
    CHECK(s <= u / (r + u) + 1e-12);
    CHECK(eq1_saving({1.0, r, u, 0.0}) == u / (r + u));
    CHECK(s == doctest::Approx(eq1_reference(p, r, u)).epsilon(1e-12));
  }
}

TEST_CASE("speedup formula") {
  CHECK(eq2_speedup(0.0, 1.0) == 1.0);
  CHECK(eq2_speedup(0.5, 1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(eq2_speedup(0.0561, 1.0) == doctest::Approx(1.0289).epsilon(1e-4));
  CHECK_THROWS_AS(eq2_speedup(1.0, 0.0), std::domain_error);  // the pole
  CHECK(eq2_speedup(1.0, 0.5) == doctest::Approx(3.0));
  CHECK_THROWS(eq2_speedup(-0.1, 1.0));
  CHECK_THROWS(eq2_speedup(0.5, -1.0));
}

TEST_CASE("speedup is increasing in s, decreasing in the overhead ratio") {
  for (double t12 : {0.0, 0.5, 2.0}) {
    double prev = 0.0;
    for (double s = 0.0; s < 0.99; s += 0.01) {
      double i = eq2_speedup(s, t12);
      CHECK(i > prev);
      CHECK(i >= 1.0);
      prev = i;
    }
  }
  for (double s : {0.1, 0.5, 0.9}) {
    double prev = 1e300;
    for (double t12 = 0.0; t12 <= 3.0; t12 += 0.1) {
      double i = eq2_speedup(s, t12);
      CHECK(i < prev);
      prev = i;
    }
  }
}

TEST_CASE("monte carlo: exact degenerate cases") {
  std::mt19937_64 rng = make_stream(21, 2);
  McEstimate z = monte_carlo_saving(0.0, 7, 3, 10'000, rng);
  CHECK(z.mean == 0.0);
  CHECK(z.se == 0.0);

  McEstimate one = monte_carlo_saving(1.0, 7, 3, 10'000, rng);
  CHECK(one.mean == 3.0 / 10.0);  // always cut at the first unreachable block
  CHECK(one.se == 0.0);
}

TEST_CASE("monte carlo agrees with the closed form") {
  std::mt19937_64 rng = make_stream(21, 3);
  for (auto [r, u] : {std::pair<std::uint64_t, std::uint64_t>{7, 3}, {10, 10}, {2, 20}}) {
    for (double p : {0.1, 0.35, 0.8}) {
      McEstimate mc = monte_carlo_saving(p, r, u, 200'000, rng);
      double s = eq1_saving({p, static_cast<double>(r), static_cast<double>(u), 0.0});
      CHECK(std::abs(mc.mean - s) <= 3.0 * mc.se);
      CHECK(mc.se > 0.0);
      CHECK(mc.se < 0.01);
    }
  }
}

TEST_CASE("monotonicity scan") {
  std::vector<double> grid;
  for (int i = 1; i <= 100; ++i) grid.push_back(i / 100.0);
  std::vector<ScanRow> rows = theoretical_monotonicity_scan(grid, 7.0, 3.0);
  REQUIRE(rows.size() == grid.size());
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].saving > rows[i - 1].saving);

  // u = 0: saving identically zero, no violation reported
  std::vector<ScanRow> flat = theoretical_monotonicity_scan({0.1, 0.5, 0.9}, 7.0, 0.0);
  for (const ScanRow& row : flat) CHECK(row.saving == 0.0);

  // single-point grid: nothing to compare
  CHECK(theoretical_monotonicity_scan({0.4}, 7.0, 3.0).size() == 1);
}

}  // TEST_SUITE
