#include "dgf/coverage.hpp"

#include <bit>
#include <stdexcept>

#include "dgf/rng.hpp"

namespace dgf {

CoverageMap::CoverageMap(std::size_t slots) {
  if (slots == 0 || (slots & (slots - 1)) != 0)
    throw std::invalid_argument("CoverageMap: slot count must be a power of two");
  bits_.assign(slots, 0);
  hits_.assign(slots, 0);
  epoch_.assign(slots, 0);
}

std::uint32_t CoverageMap::slot_of(BlockId prev, BlockId cur, std::size_t slots) {
  std::uint64_t key = (static_cast<std::uint64_t>(prev) << 32) | cur;
  return static_cast<std::uint32_t>(mix64(key) & (slots - 1));
}

std::uint8_t CoverageMap::bucket_bit(std::uint32_t hits) {
  if (hits == 0) return 0;
  if (hits == 1) return 1u << 0;
  if (hits == 2) return 1u << 1;
  if (hits == 3) return 1u << 2;
  if (hits <= 7) return 1u << 3;
  if (hits <= 15) return 1u << 4;
  if (hits <= 31) return 1u << 5;
  if (hits <= 127) return 1u << 6;
  return 1u << 7;
}

bool CoverageMap::merge_trace_if_new(const std::vector<BlockId>& trace) {
  ++cur_epoch_;
  touched_.clear();
  auto bump = [&](std::uint32_t s) {
    if (epoch_[s] != cur_epoch_) {
      epoch_[s] = cur_epoch_;
      hits_[s] = 0;
      touched_.push_back(s);
    }
    ++hits_[s];
  };
  // The entry block counts as an edge from a sentinel, so even a one-block
  // trace registers coverage.
  if (!trace.empty()) bump(slot_of(0xFFFFFFFFu, trace[0], bits_.size()));
  for (std::size_t i = 1; i < trace.size(); ++i)
    bump(slot_of(trace[i - 1], trace[i], bits_.size()));

  bool fresh = false;
  for (std::uint32_t s : touched_) {
    std::uint8_t bit = bucket_bit(hits_[s]);
    if ((bits_[s] & bit) == 0) {
      fresh = true;
      break;
    }
  }
  if (!fresh) return false;

  for (std::uint32_t s : touched_) {
    std::uint8_t bit = bucket_bit(hits_[s]);
    std::uint8_t before = bits_[s];
    bits_[s] |= bit;
    observed_ += std::popcount(static_cast<unsigned>(bits_[s] ^ before));
  }
  return true;
}

void CoverageMap::clear() {
  std::fill(bits_.begin(), bits_.end(), 0);
  std::fill(hits_.begin(), hits_.end(), 0);
  std::fill(epoch_.begin(), epoch_.end(), 0);
  cur_epoch_ = 0;
  observed_ = 0;
}

bool is_interesting(const ExecutionResult& result, CoverageMap& global) {
  return global.merge_trace_if_new(result.trace);
}

}  // namespace dgf
