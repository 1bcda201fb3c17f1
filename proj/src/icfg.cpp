#include "dgf/icfg.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

namespace dgf {
namespace {

struct Token {
  std::string_view text;
  std::size_t col;  // 1-based
};

// Splits one line into whitespace-separated tokens, remembering columns.
std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) {
  throw GraphError("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == ':' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool parse_index(std::string_view s, std::uint32_t& out) {
  if (s.empty() || s.size() > 9) return false;
  std::uint32_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint32_t>(c - '0');
  }
  out = v;
  return true;
}

struct BlockRefTok {
  std::string_view fn;
  std::uint32_t index;
};

BlockRefTok parse_block_ref(const Token& t, std::size_t line) {
  auto pos = t.text.find(':');
  if (pos == std::string_view::npos)
    fail(line, t.col, "expected <function>:<index>, got '" + std::string(t.text) + "'");
  BlockRefTok r;
  r.fn = t.text.substr(0, pos);
  std::string_view idx = t.text.substr(pos + 1);
  if (!valid_name(r.fn))
    fail(line, t.col, "bad function name in block reference '" + std::string(t.text) + "'");
  if (!parse_index(idx, r.index))
    fail(line, t.col + pos + 1, "bad block index '" + std::string(idx) + "'");
  return r;
}

}  // namespace

ICfg ICfg::parse(std::string_view text) {
  // Raw statements, resolved after the whole file is read so declaration
  // order of functions/blocks/edges does not matter.
  struct FnDecl { std::string name; std::uint32_t entry; std::size_t line, col; };
  struct BlockDecl { std::string fn; std::uint32_t index; bool crash; std::size_t line, col; };
  struct EdgeDecl { std::string sfn; std::uint32_t si; std::string dfn; std::uint32_t di; std::size_t line, col; };
  struct CallDecl { std::string sfn; std::uint32_t si; std::string callee; bool hidden; std::size_t line, col; };
  struct TargetDecl { std::string fn; std::uint32_t index; std::size_t line, col; };

  std::vector<FnDecl> fn_decls;
  std::vector<BlockDecl> block_decls;
  std::vector<EdgeDecl> edge_decls;
  std::vector<CallDecl> call_decls;
  std::vector<TargetDecl> target_decls;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = tokenize(line);
    if (toks.empty()) continue;

    const Token& kw = toks[0];
    auto need = [&](std::size_t n, const char* what) {
      if (toks.size() < n) fail(line_no, line.size() + 1, std::string("expected ") + what);
    };
    auto no_extra = [&](std::size_t n) {
      if (toks.size() > n) fail(line_no, toks[n].col, "unexpected token '" + std::string(toks[n].text) + "'");
    };

    if (kw.text == "function") {
      need(4, "'function <name> entry <index>'");
      no_extra(4);
      if (!valid_name(toks[1].text)) fail(line_no, toks[1].col, "bad function name");
      if (toks[2].text != "entry") fail(line_no, toks[2].col, "expected 'entry'");
      std::uint32_t idx;
      if (!parse_index(toks[3].text, idx)) fail(line_no, toks[3].col, "bad entry index");
      fn_decls.push_back({std::string(toks[1].text), idx, line_no, toks[1].col});
    } else if (kw.text == "block") {
      need(2, "'block <name>:<index> [crash]'");
      auto r = parse_block_ref(toks[1], line_no);
      bool crash = false;
      if (toks.size() >= 3) {
        if (toks[2].text != "crash") fail(line_no, toks[2].col, "expected 'crash'");
        crash = true;
        no_extra(3);
      }
      block_decls.push_back({std::string(r.fn), r.index, crash, line_no, toks[1].col});
    } else if (kw.text == "edge") {
      need(4, "'edge <a>:<i> -> <b>:<j>'");
      no_extra(4);
      if (toks[2].text != "->") fail(line_no, toks[2].col, "expected '->'");
      auto s = parse_block_ref(toks[1], line_no);
      auto d = parse_block_ref(toks[3], line_no);
      edge_decls.push_back({std::string(s.fn), s.index, std::string(d.fn), d.index, line_no, toks[1].col});
    } else if (kw.text == "call") {
      need(4, "'call <a>:<i> -> <fn> [hidden]'");
      if (toks[2].text != "->") fail(line_no, toks[2].col, "expected '->'");
      auto s = parse_block_ref(toks[1], line_no);
      if (!valid_name(toks[3].text)) fail(line_no, toks[3].col, "bad function name");
      bool hidden = false;
      if (toks.size() >= 5) {
        if (toks[4].text != "hidden") fail(line_no, toks[4].col, "expected 'hidden'");
        hidden = true;
        no_extra(5);
      } else {
        no_extra(4);
      }
      call_decls.push_back({std::string(s.fn), s.index, std::string(toks[3].text), hidden, line_no, toks[1].col});
    } else if (kw.text == "target") {
      need(2, "'target <name>:<index>'");
      no_extra(2);
      auto r = parse_block_ref(toks[1], line_no);
      target_decls.push_back({std::string(r.fn), r.index, line_no, toks[1].col});
    } else {
      fail(line_no, kw.col, "unknown directive '" + std::string(kw.text) + "'");
    }
  }

  ICfg g;

  for (const auto& f : fn_decls) {
    if (g.fn_by_name_.count(f.name))
      fail(f.line, f.col, "duplicate definition of function '" + f.name + "'");
    FnId id = static_cast<FnId>(g.fns_.size());
    g.fn_by_name_.emplace(f.name, id);
    Function fn;
    fn.name = f.name;
    fn.entry_index = f.entry;
    g.fns_.push_back(std::move(fn));
  }
  if (g.fns_.empty()) throw GraphError("graph declares no functions");

  std::unordered_map<std::string, BlockId> block_key;  // "fn:index"
  auto key_of = [](const std::string& fn, std::uint32_t idx) {
    return fn + ":" + std::to_string(idx);
  };
  for (const auto& b : block_decls) {
    auto fn_it = g.fn_by_name_.find(b.fn);
    if (fn_it == g.fn_by_name_.end())
      fail(b.line, b.col, "block references undeclared function '" + b.fn + "'");
    std::string key = key_of(b.fn, b.index);
    if (block_key.count(key)) fail(b.line, b.col, "duplicate definition of block '" + key + "'");
    BlockId id = static_cast<BlockId>(g.blocks_.size());
    block_key.emplace(std::move(key), id);
    Block blk;
    blk.fn = fn_it->second;
    blk.index = b.index;
    blk.crash = b.crash;
    g.blocks_.push_back(std::move(blk));
    g.fns_[fn_it->second].blocks.push_back(id);
  }

  auto resolve_block = [&](const std::string& fn, std::uint32_t idx, std::size_t line,
                           std::size_t col) -> BlockId {
    auto it = block_key.find(key_of(fn, idx));
    if (it == block_key.end())
      fail(line, col, "reference to undeclared block '" + key_of(fn, idx) + "'");
    return it->second;
  };

  std::set<std::pair<BlockId, BlockId>> seen_edges;
  for (const auto& e : edge_decls) {
    BlockId s = resolve_block(e.sfn, e.si, e.line, e.col);
    BlockId d = resolve_block(e.dfn, e.di, e.line, e.col);
    if (g.blocks_[s].fn != g.blocks_[d].fn)
      fail(e.line, e.col, "intra edge crosses functions ('" + e.sfn + "' vs '" + e.dfn + "')");
    if (!seen_edges.emplace(s, d).second)
      fail(e.line, e.col, "duplicate edge '" + key_of(e.sfn, e.si) + " -> " + key_of(e.dfn, e.di) + "'");
    g.blocks_[s].succ.push_back(d);
  }

  std::set<std::pair<BlockId, FnId>> seen_calls;
  for (const auto& c : call_decls) {
    BlockId s = resolve_block(c.sfn, c.si, c.line, c.col);
    auto fn_it = g.fn_by_name_.find(c.callee);
    if (fn_it == g.fn_by_name_.end())
      fail(c.line, c.col, "call references undeclared function '" + c.callee + "'");
    if (!seen_calls.emplace(s, fn_it->second).second)
      fail(c.line, c.col, "duplicate call edge '" + key_of(c.sfn, c.si) + " -> " + c.callee + "'");
    g.blocks_[s].calls.push_back({fn_it->second, c.hidden});
    if (c.hidden) ++g.hidden_edges_;
  }

  for (const auto& t : target_decls)
    g.targets_.push_back(resolve_block(t.fn, t.index, t.line, t.col));
  if (g.targets_.empty()) throw GraphError("empty target list: at least one 'target' line required");

  for (auto& fn : g.fns_) {
    auto it = block_key.find(key_of(fn.name, fn.entry_index));
    if (it == block_key.end())
      throw GraphError("entry block '" + key_of(fn.name, fn.entry_index) + "' of function '" +
                       fn.name + "' is not declared");
    fn.entry_block = it->second;
  }

  return g;
}

ICfg ICfg::analysis_view() const {
  ICfg v = *this;
  for (auto& b : v.blocks_) {
    b.calls.erase(std::remove_if(b.calls.begin(), b.calls.end(),
                                 [](const CallEdge& c) { return c.hidden; }),
                  b.calls.end());
  }
  v.hidden_edges_ = 0;
  return v;
}

std::string ICfg::block_name(BlockId b) const {
  const Block& blk = blocks_[b];
  return fns_[blk.fn].name + ":" + std::to_string(blk.index);
}

std::optional<BlockId> ICfg::find_block(std::string_view fn, std::uint32_t index) const {
  auto f = find_function(fn);
  if (!f) return std::nullopt;
  for (BlockId b : fns_[*f].blocks)
    if (blocks_[b].index == index) return b;
  return std::nullopt;
}

std::optional<FnId> ICfg::find_function(std::string_view name) const {
  auto it = fn_by_name_.find(std::string(name));
  if (it == fn_by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<BlockId> ICfg::crash_blocks() const {
  std::vector<BlockId> out;
  for (BlockId b = 0; b < blocks_.size(); ++b)
    if (blocks_[b].crash) out.push_back(b);
  return out;
}

std::vector<bool> blocks_reaching(const ICfg& g, BlockId goal, bool include_hidden) {
  // Reverse BFS from the goal over reversed intra and call-descent edges.
  std::vector<std::vector<BlockId>> rev(g.block_count());
  for (BlockId b = 0; b < g.block_count(); ++b) {
    for (BlockId s : g.block(b).succ) rev[s].push_back(b);
    for (const CallEdge& c : g.block(b).calls) {
      if (c.hidden && !include_hidden) continue;
      rev[g.function(c.callee).entry_block].push_back(b);
    }
  }
  std::vector<bool> reach(g.block_count(), false);
  std::deque<BlockId> queue;
  reach[goal] = true;
  queue.push_back(goal);
  while (!queue.empty()) {
    BlockId b = queue.front();
    queue.pop_front();
    for (BlockId p : rev[b]) {
      if (!reach[p]) {
        reach[p] = true;
        queue.push_back(p);
      }
    }
  }
  return reach;
}

std::vector<bool> reverse_reachable_blocks(const ICfg& g, const std::vector<BlockId>& targets) {
  if (targets.empty()) throw GraphError("reverse_reachable_blocks: empty target list");
  return blocks_reaching(g, targets.back(), /*include_hidden=*/false);
}

std::vector<bool> reverse_reachable_blocks(const ICfg& g) {
  return reverse_reachable_blocks(g, g.targets());
}

}  // namespace dgf
