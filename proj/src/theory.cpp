#include "dgf/theory.hpp"

#include <cmath>

#include "dgf/rng.hpp"

namespace dgf {

double eq1_saving(const OverheadModel& m) {
  m.validate();
  std::uint64_t bound = static_cast<std::uint64_t>(std::floor(m.u_bar));
  double s = 0.0;
  double survive = 1.0;  // (1-p)^(i-1)
  for (std::uint64_t i = 1; i <= bound; ++i) {
    s += survive * m.p * (m.u_bar + 1.0 - static_cast<double>(i)) / (m.r_bar + m.u_bar);
    survive *= 1.0 - m.p;
  }
  return s;
}

double eq2_speedup(double s, double t1_over_t2) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("eq2: s must be in [0, 1]");
  if (!(t1_over_t2 >= 0.0)) throw std::invalid_argument("eq2: t1/t2 must be >= 0");
  double denom = t1_over_t2 + 1.0 - s;
  if (!(denom > 0.0))
    throw std::domain_error("eq2: s = 1 with t1/t2 = 0 is a pole (all time saved)");
  return (t1_over_t2 + 1.0) / denom;
}

McEstimate monte_carlo_saving(double p, std::uint64_t r, std::uint64_t u, std::uint64_t runs,
                              std::mt19937_64& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("monte_carlo: p must be in [0, 1]");
  if (r + u == 0) throw std::invalid_argument("monte_carlo: r + u must be positive");
  if (runs == 0) throw std::invalid_argument("monte_carlo: runs must be positive");

  // Integer accumulation of saved blocks keeps degenerate cases (p = 0, 1)
  // exact. saved <= u <= 2^32 and runs <= 2^20-ish in practice; the products
  // stay far below 2^63.
  std::uint64_t total = 0;
  std::uint64_t total_sq = 0;
  for (std::uint64_t run = 0; run < runs; ++run) {
    std::uint64_t saved = 0;
    for (std::uint64_t i = 1; i <= u; ++i) {
      if (rand_unit(rng) < p) {
        saved = u + 1 - i;
        break;
      }
    }
    total += saved;
    total_sq += saved * saved;
  }

  double denom = static_cast<double>(r + u);
  double n = static_cast<double>(runs);
  double mean_blocks = static_cast<double>(total) / n;
  double var_blocks =
      (static_cast<double>(total_sq) - n * mean_blocks * mean_blocks) / std::max(n - 1.0, 1.0);
  if (var_blocks < 0.0) var_blocks = 0.0;

  McEstimate est;
  est.mean = static_cast<double>(total) / (n * denom);
  est.se = std::sqrt(var_blocks / n) / denom;
  return est;
}

std::vector<ScanRow> theoretical_monotonicity_scan(const std::vector<double>& p_grid,
                                                   double r_bar, double u_bar) {
  std::vector<ScanRow> rows;
  rows.reserve(p_grid.size());
  for (double p : p_grid) {
    OverheadModel m{p, r_bar, u_bar, 0.0};
    rows.push_back({p, eq1_saving(m)});
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (u_bar >= 1.0 && !(rows[i].saving > rows[i - 1].saving))
      throw std::logic_error("saving is not strictly increasing in p");
  }
  return rows;
}

}  // namespace dgf
