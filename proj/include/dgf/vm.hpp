// Deterministic execution of an ICfg over an input byte sequence, with a
// per-block hook for coverage recording and early termination.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dgf/icfg.hpp"

namespace dgf {

using Input = std::vector<std::uint8_t>;

enum class HookAction { Continue, Cut };

// Total per-block callback. Fired on block entry, after the block is traced,
// before the crash flag is honored.
using BlockHook = std::function<HookAction(BlockId)>;

enum class ExecStatus { Ok, Crash, Cut, Timeout };

struct ExecutionResult {
  ExecStatus status = ExecStatus::Ok;
  std::vector<BlockId> trace;                       // executed blocks, in order
  std::vector<std::pair<BlockId, BlockId>> edges;   // consecutive trace pairs, sorted unique
  std::uint64_t steps = 0;                          // == trace.size()
  std::optional<BlockId> crash_site;
  std::size_t bytes_consumed = 0;
};

inline constexpr std::uint64_t kDefaultStepLimit = 100'000;

// Starts at the entry block of the entry function. At each block: trace it,
// fire the hook (Cut stops with status Cut), honor the crash flag, then
// advance: call edges descend into callee entries in declaration order; an
// exit block (no intra successors, calls done) returns to the caller block's
// successor selection; a branch with k > 1 successors consumes one input
// byte b and takes successor b mod k, or successor 0 once input is
// exhausted. Running past the outermost exit is Ok; more than step_limit
// blocks is Timeout. Deterministic in (g, input, hook decisions).
ExecutionResult execute(const ICfg& g, std::span<const std::uint8_t> input,
                        const BlockHook& hook, std::uint64_t step_limit = kDefaultStepLimit);

ExecutionResult execute(const ICfg& g, std::span<const std::uint8_t> input,
                        std::uint64_t step_limit = kDefaultStepLimit);

}  // namespace dgf
