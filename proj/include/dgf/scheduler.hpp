// Simulated-annealing power schedule: per-seed mutation energy from
// normalized seed distance and campaign time, plus the round-robin seed
// queue. Time is virtual (executed blocks) unless the campaign opts into
// wall-clock mode.
#pragma once

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <vector>

#include "dgf/cutloss.hpp"
#include "dgf/distance.hpp"
#include "dgf/vm.hpp"

namespace dgf {

struct Seed {
  Input input;
  Distance distance;         // seed-level, un-normalized; fixed at admission
  std::uint64_t found_at = 0;
  std::uint64_t fuzz_rounds = 0;   // times picked by the scheduler
  std::uint64_t mutants = 0;       // mutation executions charged to this seed
  std::uint32_t id = 0;            // admission ordinal
};

enum class Schedule { Exp };

struct AnnealState {
  std::uint64_t t_x = 1;  // time-to-exploitation horizon
  Schedule schedule = Schedule::Exp;
  double min_seen = 0.0;  // running finite seed-distance extremes
  double max_seen = 0.0;
  bool any_finite = false;

  void observe(Distance d) {
    if (!d.is_finite()) return;
    double v = d.value();
    if (!any_finite) {
      min_seen = max_seen = v;
      any_finite = true;
    } else {
      if (v < min_seen) min_seen = v;
      if (v > max_seen) max_seen = v;
    }
  }
};

// T = 20^(-now / t_x), clamped to [0, 1]. Strictly decreasing in now.
double temperature(std::uint64_t now, const AnnealState& st);

// Exploitation starts once now >= t_x.
Phase phase_at(std::uint64_t now, const AnnealState& st);

// Annealing weight w = (1 - d_norm)(1 - T) + 0.5 T. Monotone non-increasing
// in d_norm; 0.5 at full heat regardless of distance.
double energy_weight(double normalized_distance, double temp);

// Mutations to grant the seed this round: base_energy for seeds with
// unreachable distance (excluded from the schedule, not from the queue),
// otherwise round(base * 2^(10(2w-1))) clamped to [1, 4096*base].
std::uint64_t energy(const Seed& s, std::uint64_t now, const AnnealState& st,
                     std::uint64_t base_energy);

class SeedQueue {
 public:
  // Admission order defines ids and the round-robin cycle.
  Seed& admit(Seed s);
  Seed& next();  // cyclic; throws std::out_of_range on an empty queue
  bool empty() const { return seeds_.empty(); }
  std::size_t size() const { return seeds_.size(); }
  const Seed& at(std::size_t i) const { return seeds_.at(i); }

 private:
  // deque: admissions during a fuzzing round must not invalidate the
  // reference to the seed being fuzzed.
  std::deque<Seed> seeds_;
  std::size_t cursor_ = 0;
};

}  // namespace dgf
