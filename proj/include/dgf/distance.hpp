// Three-level target distance: call-graph level, basic-block level, and
// per-test-case (trace) level, plus the distance-file serialization with the
// -1 sentinel for unreachable entries.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgf/icfg.hpp"

namespace dgf {

// Non-negative distance or the unreachable sentinel (serialized as -1).
// The sentinel participates in no arithmetic; callers must test is_finite().
class Distance {
 public:
  constexpr Distance() : v_(-1.0) {}
  static constexpr Distance unreachable() { return Distance(); }
  static Distance finite(double v);

  bool is_finite() const { return v_ >= 0.0; }
  double value() const;  // throws std::logic_error on the sentinel
  double serialized() const { return is_finite() ? v_ : -1.0; }

  friend bool operator==(Distance a, Distance b) { return a.v_ == b.v_ || (!a.is_finite() && !b.is_finite()); }
  friend bool operator!=(Distance a, Distance b) { return !(a == b); }

 private:
  double v_;
};

struct DistanceMap {
  std::vector<Distance> bb;  // indexed by BlockId; one entry per graph block
  std::vector<Distance> fn;  // indexed by FnId; empty when read from a file
  std::uint32_t c_mult = 10;
};

// Harmonic mean n / sum(1/x) of positive values. Lies in [min, max] of its
// inputs (not below the min, a common misreading).
double harmonic_mean(std::span<const double> values);

// Functions containing target blocks, deduplicated, graph order.
std::vector<FnId> target_functions(const ICfg& g);

// Call-graph distance of every function to the target function set: 0 for
// target functions, else the harmonic mean of shortest CG path lengths to
// each reachable target function, unreachable if none. Hidden call edges
// never contribute.
std::vector<Distance> cg_distances(const ICfg& g, const std::vector<FnId>& target_fns);

// Block distance per the three cases: target block -> 0; block calling
// functions of finite CG distance -> c_mult * min such distance; otherwise
// the harmonic mean of (intra shortest path to b') + distance(b') over
// case-(a)/(b) blocks b' of the same function, unreachable if none is
// intra-reachable.
std::vector<Distance> bb_distances(const ICfg& g, const std::vector<Distance>& cg,
                                   std::uint32_t c_mult);

// cg + bb over the analysis view of g, packaged.
DistanceMap compute_distances(const ICfg& g, std::uint32_t c_mult = 10);

// Arithmetic mean of finite block distances over the trace (with
// multiplicity); unreachable when no trace block has a finite distance.
Distance seed_distance(const std::vector<BlockId>& trace, const DistanceMap& dm);

// (d - min) / (max - min); 0 when max == min; the sentinel passes through.
Distance normalize(Distance d, double min_seen, double max_seen);

class DistanceFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One "<fn>:<index> <value>" line per block, graph order, 4 fractional
// digits, -1 for unreachable. '#' comments allowed when reading.
std::string write_distance_file(const ICfg& g, const DistanceMap& dm);
DistanceMap read_distance_file(const ICfg& g, std::string_view text);

}  // namespace dgf
