// Analytical model of the time saved by probabilistic early termination and
// the induced speedup, validated by direct Monte Carlo simulation of the
// termination process.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace dgf {

struct OverheadModel {
  double p = 0.0;           // per-unreachable-block termination probability
  double r_bar = 0.0;       // mean reachable blocks per test case
  double u_bar = 0.0;       // mean unreachable blocks per test case
  double t1_over_t2 = 0.0;  // fuzzing-loop overhead / execution overhead

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("model: p must be in [0, 1]");
    if (!(r_bar >= 0.0) || !(u_bar >= 0.0)) throw std::invalid_argument("model: r, u must be >= 0");
    if (!(r_bar + u_bar > 0.0)) throw std::invalid_argument("model: r + u must be positive");
    if (!(t1_over_t2 >= 0.0)) throw std::invalid_argument("model: t1/t2 must be >= 0");
  }
};

// Expected saved fraction of execution work:
//   s = sum_{i=1..floor(u)} (1-p)^(i-1) * p * (u+1-i) / (r+u).
// A run terminated at the i-th unreachable block counts the cut block itself
// as unexecuted, so p=1 yields exactly u/(r+u).
double eq1_saving(const OverheadModel& m);

// Speedup I = (t1/t2 + 1) / (t1/t2 + 1 - s). Rejects the s=1, t1/t2=0 pole.
double eq2_speedup(double s, double t1_over_t2);

struct McEstimate {
  double mean = 0.0;  // saved-block fraction
  double se = 0.0;    // standard error of the mean
};

// Simulates `runs` executions of a test case with r reachable then u
// unreachable blocks, terminating at each unreachable block with probability
// p (one Bernoulli draw per block, independent of the closed form it
// validates). Termination at block i saves u+1-i blocks.
McEstimate monte_carlo_saving(double p, std::uint64_t r, std::uint64_t u, std::uint64_t runs,
                              std::mt19937_64& rng);

struct ScanRow {
  double p;
  double saving;
};

// eq1_saving over a p grid at fixed (r, u); throws std::logic_error if the
// sequence is not strictly increasing (it must be for u >= 1).
std::vector<ScanRow> theoretical_monotonicity_scan(const std::vector<double>& p_grid,
                                                   double r_bar, double u_bar);

}  // namespace dgf
