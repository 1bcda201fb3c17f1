// Interprocedural control-flow graph: the analyzable artifact (for distances)
// and the executable subject (for the VM). Immutable after construction.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dgf {

using FnId = std::uint32_t;
using BlockId = std::uint32_t;  // dense ordinal over the whole graph

struct CallEdge {
  FnId callee;
  bool hidden;  // invisible to analysis views, executed at runtime
};

struct Block {
  FnId fn;
  std::uint32_t index;  // per-function index from the graph file
  bool crash = false;
  std::vector<BlockId> succ;    // intra successors, declaration order
  std::vector<CallEdge> calls;  // declaration order
};

struct Function {
  std::string name;
  std::uint32_t entry_index = 0;
  BlockId entry_block = 0;
  std::vector<BlockId> blocks;  // declaration order
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Line-oriented text format:
//   function <name> entry <index>
//   block <name>:<index> [crash]
//   edge <name>:<i> -> <name>:<j>        (both sides in one function)
//   call <name>:<i> -> <name> [hidden]
//   target <name>:<index>                (repeatable; order significant)
// '#' starts a comment. The first declared function is the program entry.
class ICfg {
 public:
  static ICfg parse(std::string_view text);

  // Identical graph with hidden call edges removed. Idempotent.
  ICfg analysis_view() const;
  // The runtime graph is the graph as parsed, hidden edges included.
  const ICfg& execution_view() const { return *this; }

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t function_count() const { return fns_.size(); }
  const Block& block(BlockId b) const { return blocks_[b]; }
  const Function& function(FnId f) const { return fns_[f]; }
  FnId entry_function() const { return 0; }
  BlockId entry_block() const { return fns_[0].entry_block; }

  // Ordered sub-target list; the last element drives reachability,
  // earlier entries are kept for reporting.
  const std::vector<BlockId>& targets() const { return targets_; }
  BlockId last_target() const { return targets_.back(); }

  // Intra successor count (branch arity at this block).
  std::size_t arity(BlockId b) const { return blocks_[b].succ.size(); }

  std::string block_name(BlockId b) const;
  std::optional<BlockId> find_block(std::string_view fn, std::uint32_t index) const;
  std::optional<FnId> find_function(std::string_view name) const;

  bool has_hidden_edges() const { return hidden_edges_ > 0; }
  std::size_t hidden_edge_count() const { return hidden_edges_; }

  std::vector<BlockId> crash_blocks() const;

 private:
  std::vector<Function> fns_;
  std::vector<Block> blocks_;
  std::vector<BlockId> targets_;
  std::unordered_map<std::string, FnId> fn_by_name_;
  std::size_t hidden_edges_ = 0;

  friend class GraphBuilder;
};

// Blocks from which `goal` is reachable following intra edges and call
// descents (call site -> callee entry). A call-site block's own intra edges
// stand for the post-return flow, so no exit->caller edges exist in the
// relation. include_hidden selects execution-view (true) or analysis-view
// (false) call edges. Indexed by BlockId.
std::vector<bool> blocks_reaching(const ICfg& g, BlockId goal, bool include_hidden);

// Set of blocks from which the last element of `targets` is reachable in the
// analysis view.
std::vector<bool> reverse_reachable_blocks(const ICfg& g, const std::vector<BlockId>& targets);
std::vector<bool> reverse_reachable_blocks(const ICfg& g);

}  // namespace dgf
