#include "dgf/vm.hpp"

#include <algorithm>

namespace dgf {

namespace {

struct Frame {
  BlockId block;
  std::uint32_t next_call;
};

void finish(ExecutionResult& r) {
  r.steps = r.trace.size();
  r.edges.reserve(r.trace.size() > 0 ? r.trace.size() - 1 : 0);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    r.edges.emplace_back(r.trace[i - 1], r.trace[i]);
  std::sort(r.edges.begin(), r.edges.end());
  r.edges.erase(std::unique(r.edges.begin(), r.edges.end()), r.edges.end());
}

}  // namespace

ExecutionResult execute(const ICfg& g, std::span<const std::uint8_t> input,
                        const BlockHook& hook, std::uint64_t step_limit) {
  ExecutionResult r;
  std::vector<Frame> stack;
  std::size_t cursor = 0;  // next input byte

  BlockId cur = g.entry_block();
  for (;;) {
    if (r.trace.size() >= step_limit) {
      r.status = ExecStatus::Timeout;
      break;
    }
    r.trace.push_back(cur);

    if (hook && hook(cur) == HookAction::Cut) {
      r.status = ExecStatus::Cut;
      break;
    }
    if (g.block(cur).crash) {
      r.status = ExecStatus::Crash;
      r.crash_site = cur;
      break;
    }

    stack.push_back({cur, 0});

    // Advance: resume the innermost frame with pending work. Frames with
    // remaining call edges descend; exhausted frames branch or return.
    bool moved = false;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const Block& b = g.block(f.block);
      if (f.next_call < b.calls.size()) {
        FnId callee = b.calls[f.next_call].callee;
        ++f.next_call;
        cur = g.function(callee).entry_block;
        moved = true;
        break;
      }
      std::size_t k = b.succ.size();
      if (k == 0) {
        stack.pop_back();  // exit block: return to caller's continuation
        continue;
      }
      std::size_t ix = 0;
      if (k > 1) {
        if (cursor < input.size()) {
          ix = input[cursor] % k;
          ++cursor;
        }
      }
      BlockId next = b.succ[ix];
      stack.pop_back();  // intra transfer: this block's continuation is done
      cur = next;
      moved = true;
      break;
    }
    if (!moved) {
      r.status = ExecStatus::Ok;  // fell off the outermost exit block
      break;
    }
  }

  r.bytes_consumed = cursor;
  finish(r);
  return r;
}

ExecutionResult execute(const ICfg& g, std::span<const std::uint8_t> input,
                        std::uint64_t step_limit) {
  return execute(g, input, BlockHook(), step_limit);
}

}  // namespace dgf
