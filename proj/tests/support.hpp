// Shared test machinery: a random graph generator that emits graph-file text
// (so every generated case also exercises the parser) and brute-force
// oracles kept independent of the library's algorithms.
#pragma once

#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dgf/distance.hpp"
#include "dgf/icfg.hpp"
#include "dgf/rng.hpp"

namespace dgf::test {

// Random program graph. Every block is intra-reachable from its function's
// entry (functions come out of compilers without dead blocks) and there is a
// single target, so the finite-distance/reachability equivalence is
// well-posed.
inline std::string random_graph_text(std::mt19937_64& rng, std::size_t max_blocks = 50,
                                     bool allow_hidden = false) {
  std::size_t n_fns = 1 + rand_below(rng, 5);
  std::vector<std::size_t> fn_blocks(n_fns);
  std::size_t total = 0;
  for (std::size_t f = 0; f < n_fns; ++f) {
    std::size_t room = max_blocks - total - (n_fns - f - 1);  // leave 1 per remaining fn
    std::size_t take = 1 + rand_below(rng, std::min<std::size_t>(room, 12));
    fn_blocks[f] = take;
    total += take;
  }

  std::string text;
  for (std::size_t f = 0; f < n_fns; ++f)
    text += "function fn" + std::to_string(f) + " entry 0\n";

  for (std::size_t f = 0; f < n_fns; ++f) {
    std::string fn = "fn" + std::to_string(f);
    std::size_t nb = fn_blocks[f];
    for (std::size_t b = 0; b < nb; ++b) {
      text += "block " + fn + ":" + std::to_string(b);
      if (rand_below(rng, 20) == 0) text += " crash";
      text += "\n";
    }
    std::set<std::pair<std::size_t, std::size_t>> edges;
    // spanning tree from the entry keeps all blocks intra-reachable
    for (std::size_t b = 1; b < nb; ++b) edges.emplace(rand_below(rng, b), b);
    std::size_t extras = rand_below(rng, nb + 1);
    for (std::size_t k = 0; k < extras; ++k)
      edges.emplace(rand_below(rng, nb), rand_below(rng, nb));
    for (auto [s, d] : edges)
      text += "edge " + fn + ":" + std::to_string(s) + " -> " + fn + ":" + std::to_string(d) + "\n";

    std::set<std::pair<std::size_t, std::size_t>> calls;
    for (std::size_t b = 0; b < nb; ++b) {
      if (rand_below(rng, 4) == 0) calls.emplace(b, rand_below(rng, n_fns));
    }
    for (auto [b, callee] : calls) {
      text += "call " + fn + ":" + std::to_string(b) + " -> fn" + std::to_string(callee);
      if (allow_hidden && rand_below(rng, 3) == 0) text += " hidden";
      text += "\n";
    }
  }

  std::size_t tf = rand_below(rng, n_fns);
  text += "target fn" + std::to_string(tf) + ":" + std::to_string(rand_below(rng, fn_blocks[tf])) +
          "\n";
  return text;
}

// Brute-force transitive closure over the supergraph relation (intra edges
// plus call descents), deliberately not a reverse BFS: Floyd-Warshall style
// saturation over an explicit adjacency matrix.
inline std::vector<bool> closure_reaching_oracle(const ICfg& g, BlockId goal,
                                                 bool include_hidden) {
  std::size_t n = g.block_count();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (BlockId b = 0; b < n; ++b) {
    for (BlockId s : g.block(b).succ) adj[b][s] = true;
    for (const CallEdge& c : g.block(b).calls) {
      if (c.hidden && !include_hidden) continue;
      adj[b][g.function(c.callee).entry_block] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (adj[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (adj[k][j]) adj[i][j] = true;

  std::vector<bool> out(n, false);
  for (BlockId b = 0; b < n; ++b) out[b] = (b == goal) || adj[b][goal];
  return out;
}

// Function-level distance oracle: forward BFS over an explicit call graph
// from each function, then a hand-rolled harmonic mean over reachable target
// functions.
inline std::vector<double> cg_distance_oracle(const ICfg& g, const std::vector<FnId>& target_fns) {
  std::size_t n = g.function_count();
  std::vector<std::vector<bool>> cg(n, std::vector<bool>(n, false));
  for (BlockId b = 0; b < g.block_count(); ++b)
    for (const CallEdge& c : g.block(b).calls)
      if (!c.hidden) cg[g.block(b).fn][c.callee] = true;

  auto bfs_from = [&](FnId src) {
    std::vector<int> dist(n, -1);
    std::vector<FnId> frontier{src};
    dist[src] = 0;
    while (!frontier.empty()) {
      std::vector<FnId> next;
      for (FnId f : frontier)
        for (FnId t = 0; t < n; ++t)
          if (cg[f][t] && dist[t] < 0) {
            dist[t] = dist[f] + 1;
            next.push_back(t);
          }
      frontier = std::move(next);
    }
    return dist;
  };

  std::vector<double> out(n, -1.0);
  for (FnId f = 0; f < n; ++f) {
    bool is_target = false;
    for (FnId t : target_fns) is_target = is_target || (t == f);
    if (is_target) {
      out[f] = 0.0;
      continue;
    }
    std::vector<int> dist = bfs_from(f);
    double inv = 0.0;
    std::size_t hits = 0;
    for (FnId t : target_fns) {
      if (dist[t] > 0) {
        inv += 1.0 / dist[t];
        ++hits;
      }
    }
    if (hits > 0) out[f] = static_cast<double>(hits) / inv;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(static_cast<bool>(in), "cannot open ", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ICfg parse_file(const std::string& path) { return ICfg::parse(read_file(path)); }

inline const char* kBenchDir = DGF_SOURCE_DIR "/benchmarks";

}  // namespace dgf::test
