#include "dgf/distance.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

namespace dgf {

Distance Distance::finite(double v) {
  if (!(v >= 0.0)) throw std::logic_error("Distance::finite: negative or NaN value");
  Distance d;
  d.v_ = v;
  return d;
}

double Distance::value() const {
  if (!is_finite()) throw std::logic_error("Distance::value called on unreachable sentinel");
  return v_;
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) throw std::logic_error("harmonic_mean of empty set");
  double inv_sum = 0.0;
  for (double v : values) {
    if (!(v > 0.0)) throw std::logic_error("harmonic_mean requires positive inputs");
    inv_sum += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inv_sum;
}

std::vector<FnId> target_functions(const ICfg& g) {
  std::vector<FnId> out;
  for (BlockId t : g.targets()) {
    FnId f = g.block(t).fn;
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

// Unweighted shortest path lengths to `goal` over the reversed relation.
std::vector<std::uint32_t> bfs_to(const std::vector<std::vector<std::uint32_t>>& rev,
                                  std::uint32_t goal) {
  std::vector<std::uint32_t> dist(rev.size(), kInf);
  std::deque<std::uint32_t> queue;
  dist[goal] = 0;
  queue.push_back(goal);
  while (!queue.empty()) {
    std::uint32_t n = queue.front();
    queue.pop_front();
    for (std::uint32_t p : rev[n]) {
      if (dist[p] == kInf) {
        dist[p] = dist[n] + 1;
        queue.push_back(p);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<Distance> cg_distances(const ICfg& g, const std::vector<FnId>& target_fns) {
  // Call graph: F -> G iff some block of F has a visible call edge to G.
  std::vector<std::vector<std::uint32_t>> rev(g.function_count());
  for (BlockId b = 0; b < g.block_count(); ++b) {
    for (const CallEdge& c : g.block(b).calls) {
      if (c.hidden) continue;
      rev[c.callee].push_back(g.block(b).fn);
    }
  }

  std::vector<bool> is_target(g.function_count(), false);
  for (FnId t : target_fns) is_target[t] = true;

  std::vector<std::vector<std::uint32_t>> to_target;
  to_target.reserve(target_fns.size());
  for (FnId t : target_fns) to_target.push_back(bfs_to(rev, t));

  std::vector<Distance> out(g.function_count());
  for (FnId f = 0; f < g.function_count(); ++f) {
    if (is_target[f]) {
      out[f] = Distance::finite(0.0);
      continue;
    }
    std::vector<double> reachable;
    for (const auto& dist : to_target)
      if (dist[f] != kInf) reachable.push_back(static_cast<double>(dist[f]));
    if (reachable.empty())
      out[f] = Distance::unreachable();
    else
      out[f] = Distance::finite(harmonic_mean(reachable));
  }
  return out;
}

std::vector<Distance> bb_distances(const ICfg& g, const std::vector<Distance>& cg,
                                   std::uint32_t c_mult) {
  std::vector<Distance> out(g.block_count());

  std::vector<bool> is_target(g.block_count(), false);
  for (BlockId t : g.targets()) is_target[t] = true;

  // Cases (a) and (b) first; they anchor case (c).
  std::vector<bool> anchored(g.block_count(), false);
  for (BlockId b = 0; b < g.block_count(); ++b) {
    if (is_target[b]) {
      out[b] = Distance::finite(0.0);
      anchored[b] = true;
      continue;
    }
    double best = -1.0;
    for (const CallEdge& c : g.block(b).calls) {
      if (c.hidden) continue;
      const Distance& d = cg[c.callee];
      if (d.is_finite() && (best < 0.0 || d.value() < best)) best = d.value();
    }
    if (best >= 0.0) {
      out[b] = Distance::finite(static_cast<double>(c_mult) * best);
      anchored[b] = true;
    }
  }

  // Case (c): per-function forward BFS from each unanchored block over intra
  // edges; harmonic mean of hops-plus-anchor-distance.
  for (FnId f = 0; f < g.function_count(); ++f) {
    const Function& fn = g.function(f);
    std::vector<BlockId> anchors;
    for (BlockId b : fn.blocks)
      if (anchored[b]) anchors.push_back(b);

    for (BlockId b : fn.blocks) {
      if (anchored[b]) continue;
      if (anchors.empty()) continue;  // stays unreachable

      // hops from b within this function
      std::unordered_map<BlockId, std::uint32_t> hops;
      std::deque<BlockId> queue;
      hops[b] = 0;
      queue.push_back(b);
      while (!queue.empty()) {
        BlockId n = queue.front();
        queue.pop_front();
        for (BlockId s : g.block(n).succ) {
          if (!hops.count(s)) {
            hops[s] = hops[n] + 1;
            queue.push_back(s);
          }
        }
      }

      std::vector<double> terms;
      for (BlockId a : anchors) {
        auto it = hops.find(a);
        if (it == hops.end()) continue;
        terms.push_back(static_cast<double>(it->second) + out[a].value());
      }
      if (!terms.empty()) out[b] = Distance::finite(harmonic_mean(terms));
    }
  }

  return out;
}

DistanceMap compute_distances(const ICfg& g, std::uint32_t c_mult) {
  if (c_mult == 0) throw std::logic_error("c_mult must be positive");
  ICfg av = g.analysis_view();
  DistanceMap dm;
  dm.c_mult = c_mult;
  dm.fn = cg_distances(av, target_functions(av));
  dm.bb = bb_distances(av, dm.fn, c_mult);
  return dm;
}

Distance seed_distance(const std::vector<BlockId>& trace, const DistanceMap& dm) {
  if (trace.empty()) throw std::logic_error("seed_distance of empty trace");
  double sum = 0.0;
  std::uint64_t n = 0;
  for (BlockId b : trace) {
    const Distance& d = dm.bb[b];
    if (d.is_finite()) {
      sum += d.value();
      ++n;
    }
  }
  if (n == 0) return Distance::unreachable();
  return Distance::finite(sum / static_cast<double>(n));
}

Distance normalize(Distance d, double min_seen, double max_seen) {
  if (!d.is_finite()) return d;
  if (!(min_seen <= max_seen)) throw std::logic_error("normalize: min_seen > max_seen");
  if (max_seen == min_seen) return Distance::finite(0.0);
  return Distance::finite((d.value() - min_seen) / (max_seen - min_seen));
}

std::string write_distance_file(const ICfg& g, const DistanceMap& dm) {
  if (dm.bb.size() != g.block_count())
    throw DistanceFileError("distance map does not cover the graph");
  std::string out;
  char buf[64];
  for (FnId f = 0; f < g.function_count(); ++f) {
    for (BlockId b : g.function(f).blocks) {
      const Distance& d = dm.bb[b];
      if (d.is_finite())
        std::snprintf(buf, sizeof buf, " %.4f\n", d.value());
      else
        std::snprintf(buf, sizeof buf, " -1\n");
      out += g.block_name(b);
      out += buf;
    }
  }
  return out;
}

DistanceMap read_distance_file(const ICfg& g, std::string_view text) {
  DistanceMap dm;
  dm.bb.assign(g.block_count(), Distance::unreachable());
  std::vector<bool> seen(g.block_count(), false);

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream iss(line);
    std::string ref, val;
    if (!(iss >> ref)) continue;
    if (!(iss >> val))
      throw DistanceFileError("line " + std::to_string(line_no) + ": missing value");
    std::string extra;
    if (iss >> extra)
      throw DistanceFileError("line " + std::to_string(line_no) + ": unexpected token '" + extra + "'");

    auto colon = ref.find(':');
    if (colon == std::string::npos)
      throw DistanceFileError("line " + std::to_string(line_no) + ": malformed block id '" + ref + "'");
    std::uint32_t index = 0;
    try {
      std::size_t used = 0;
      index = static_cast<std::uint32_t>(std::stoul(ref.substr(colon + 1), &used));
      if (used != ref.size() - colon - 1) throw std::invalid_argument("");
    } catch (...) {
      throw DistanceFileError("line " + std::to_string(line_no) + ": malformed block id '" + ref + "'");
    }
    auto b = g.find_block(ref.substr(0, colon), index);
    if (!b)
      throw DistanceFileError("line " + std::to_string(line_no) + ": unknown block id '" + ref + "'");
    if (seen[*b])
      throw DistanceFileError("line " + std::to_string(line_no) + ": duplicate entry for '" + ref + "'");

    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument("");
    } catch (...) {
      throw DistanceFileError("line " + std::to_string(line_no) + ": malformed value '" + val + "'");
    }
    if (v < 0.0 && v != -1.0)
      throw DistanceFileError("line " + std::to_string(line_no) + ": negative value other than -1");
    dm.bb[*b] = (v < 0.0) ? Distance::unreachable() : Distance::finite(v);
    seen[*b] = true;
  }

  for (BlockId b = 0; b < g.block_count(); ++b)
    if (!seen[b])
      throw DistanceFileError("distance map incomplete: no entry for '" + g.block_name(b) + "'");
  return dm;
}

}  // namespace dgf
