// Probabilistic exponential early termination: a per-block VM hook that cuts
// a run at unreachable-distance blocks with probability p per block, plus the
// closed-form helpers for the induced geometric law.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "dgf/distance.hpp"
#include "dgf/vm.hpp"

namespace dgf {

enum class CutMode { Always, ExploitationOnly, Off };
enum class Phase { Exploration, Exploitation };

struct CutLossConfig {
  double p = 0.0;                  // per-unreachable-block termination probability
  CutMode mode = CutMode::Always;  // Off behaves exactly as p = 0
  std::uint32_t granularity = 10;  // draw resolution; 10 gives rand()%10+1 semantics

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("cutloss: p must be in [0, 1]");
    if (granularity < 1) throw std::invalid_argument("cutloss: granularity must be >= 1");
  }
};

// One uniform draw u in [1, granularity]; terminate iff u > (1-p)*granularity.
// Call only at blocks whose distance is the unreachable sentinel. Consumes
// exactly one draw from rng.
template <class Urbg>
bool should_terminate(Urbg& rng, const CutLossConfig& cfg) {
  std::uint64_t u = rng() % cfg.granularity + 1;
  // (1-p)*granularity computed as granularity - p*granularity: exact whenever
  // p*granularity is integral, which is what Alg-style thresholds rely on.
  double threshold = static_cast<double>(cfg.granularity) - cfg.p * static_cast<double>(cfg.granularity);
  return static_cast<double>(u) > threshold;
}

// Hook: Cut at a block with unreachable distance iff should_terminate fires
// and the mode/phase gate is open; Continue otherwise and at every
// finite-distance block. Off and ExploitationOnly-in-exploration never draw.
BlockHook make_hook(const DistanceMap& dm, const CutLossConfig& cfg, Phase phase,
                    std::mt19937_64& rng);

// P(terminated exactly at the i-th unreachable block) = (1-p)^(i-1) * p.
double prob_term_at(double p, std::uint64_t i);

// P(terminated within u unreachable blocks) = 1 - (1-p)^u.
double prob_term_within(double p, std::uint64_t u);

}  // namespace dgf
