// AFL-style edge coverage feedback: a fixed-size slot table keyed by hashed
// (prev, cur) block pairs, with hit counts folded into the classic buckets
// 1, 2, 3, 4-7, 8-15, 16-31, 32-127, 128+.
#pragma once

#include <cstdint>
#include <vector>

#include "dgf/vm.hpp"

namespace dgf {

class CoverageMap {
 public:
  explicit CoverageMap(std::size_t slots = 65'536);

  std::size_t slots() const { return bits_.size(); }

  // Folds the trace's edge hit counts into buckets and merges them into the
  // map iff at least one (slot, bucket) pair is new. Returns whether anything
  // new was observed.
  bool merge_trace_if_new(const std::vector<BlockId>& trace);

  // Count of (slot, bucket) pairs observed so far.
  std::uint64_t observed() const { return observed_; }

  void clear();

  static std::uint32_t slot_of(BlockId prev, BlockId cur, std::size_t slots);
  static std::uint8_t bucket_bit(std::uint32_t hits);

 private:
  std::vector<std::uint8_t> bits_;  // per-slot bucket bitmask
  std::uint64_t observed_ = 0;

  // Run-local hit counters, reset by epoch stamping instead of memset.
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint32_t> epoch_;
  std::vector<std::uint32_t> touched_;
  std::uint32_t cur_epoch_ = 0;
};

// True iff the run covers a (slot, bucket) pair not yet in global; merges the
// run into global exactly when true.
bool is_interesting(const ExecutionResult& result, CoverageMap& global);

}  // namespace dgf
