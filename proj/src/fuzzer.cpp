#include "dgf/fuzzer.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "dgf/rng.hpp"

namespace dgf {

namespace {

void insert_random_byte(Input& buf, std::mt19937_64& rng, std::size_t max_len) {
  if (buf.size() >= max_len) return;
  std::size_t pos = rand_below(rng, buf.size() + 1);
  buf.insert(buf.begin() + static_cast<std::ptrdiff_t>(pos),
             static_cast<std::uint8_t>(rng() & 0xFF));
}

}  // namespace

Input mutate(const Input& in, std::mt19937_64& rng, std::size_t max_len) {
  Input buf = in;
  if (buf.size() > max_len) buf.resize(max_len);

  std::uint64_t ops = 1 + rand_below(rng, 8);
  for (std::uint64_t k = 0; k < ops; ++k) {
    switch (rand_below(rng, 6)) {
      case 0: {  // bit flip
        if (buf.empty()) { insert_random_byte(buf, rng, max_len); break; }
        std::size_t pos = rand_below(rng, buf.size());
        buf[pos] ^= static_cast<std::uint8_t>(1u << rand_below(rng, 8));
        break;
      }
      case 1: {  // byte set
        if (buf.empty()) { insert_random_byte(buf, rng, max_len); break; }
        buf[rand_below(rng, buf.size())] = static_cast<std::uint8_t>(rng() & 0xFF);
        break;
      }
      case 2: {  // byte add/sub, delta in [1, 35]
        if (buf.empty()) { insert_random_byte(buf, rng, max_len); break; }
        std::size_t pos = rand_below(rng, buf.size());
        std::uint8_t delta = static_cast<std::uint8_t>(1 + rand_below(rng, 35));
        if (rand_below(rng, 2) == 0)
          buf[pos] = static_cast<std::uint8_t>(buf[pos] + delta);
        else
          buf[pos] = static_cast<std::uint8_t>(buf[pos] - delta);
        break;
      }
      case 3: {  // byte duplicate
        if (buf.empty()) { insert_random_byte(buf, rng, max_len); break; }
        if (buf.size() >= max_len) break;
        std::size_t pos = rand_below(rng, buf.size());
        buf.insert(buf.begin() + static_cast<std::ptrdiff_t>(pos) + 1, buf[pos]);
        break;
      }
      case 4: {  // byte delete; stays empty on an empty input
        if (buf.empty()) break;
        buf.erase(buf.begin() + static_cast<std::ptrdiff_t>(rand_below(rng, buf.size())));
        break;
      }
      case 5: {  // splice a block of the input over itself
        if (buf.empty()) { insert_random_byte(buf, rng, max_len); break; }
        std::size_t src = rand_below(rng, buf.size());
        std::size_t dst = rand_below(rng, buf.size());
        std::size_t room = buf.size() - std::max(src, dst);
        std::size_t len = 1 + rand_below(rng, std::min<std::size_t>(room, 8));
        Input tmp(buf.begin() + static_cast<std::ptrdiff_t>(src),
                  buf.begin() + static_cast<std::ptrdiff_t>(src + len));
        std::copy(tmp.begin(), tmp.end(), buf.begin() + static_cast<std::ptrdiff_t>(dst));
        break;
      }
    }
  }
  return buf;
}

void CampaignConfig::validate() const {
  if (graph_path.empty()) throw CampaignError("config: graph path required");
  if (seeds_dir.empty()) throw CampaignError("config: seeds directory required");
  if (!(p >= 0.0 && p <= 1.0)) throw CampaignError("config: p must be in [0, 1]");
  if (granularity < 1) throw CampaignError("config: granularity must be >= 1");
  if (t_x == 0) throw CampaignError("config: t_x must be positive");
  if (trials < 1) throw CampaignError("config: trials must be >= 1");
  if (c_mult == 0) throw CampaignError("config: c_mult must be positive");
  if (base_energy == 0) throw CampaignError("config: base_energy must be positive");
  if (step_limit == 0) throw CampaignError("config: step_limit must be positive");
}

std::vector<Input> load_seed_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw CampaignError("seeds directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  if (files.empty()) throw CampaignError("seeds directory is empty: " + dir);

  std::vector<Input> out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw CampaignError("cannot read seed file: " + f.string());
    Input bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    out.push_back(std::move(bytes));
  }
  return out;
}

std::uint64_t CampaignClock::now() const {
  if (mode == TimeMode::Virtual) return virtual_clock;
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                            wall_start)
          .count());
}

namespace {

double best_finite_distance(const SeedQueue& q) {
  double best = -1.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Seed& s = q.at(i);
    if (s.distance.is_finite() && (best < 0.0 || s.distance.value() < best))
      best = s.distance.value();
  }
  return best;
}

// Per-execution bookkeeping shared by dry runs and mutants.
void account_run(const ExecutionResult& r, const DistanceMap& dm,
                 const std::vector<bool>& exec_reach, TrialResult& out, CampaignClock& clock) {
  ++out.executions;
  out.executed_blocks += r.steps;
  clock.virtual_clock += r.steps;

  bool touched_unreachable = false;
  for (BlockId b : r.trace) {
    if (dm.bb[b].is_finite()) {
      ++out.reachable_bbs;
    } else {
      ++out.unreachable_bbs;
      touched_unreachable = true;
    }
  }
  if (touched_unreachable) ++out.unreachable_runs;

  if (r.status == ExecStatus::Cut) {
    ++out.cuts;
    if (exec_reach[r.trace.back()])
      ++out.fp_cuts;
    else
      ++out.tp_cuts;
  } else if (r.status == ExecStatus::Timeout) {
    ++out.timeouts;
  }
}

void record_crash(const ExecutionResult& r, const Input& input, std::uint32_t parent_seed,
                  std::uint64_t now, TrialResult& out, const CoverageMap& cov,
                  const SeedQueue& queue) {
  ++out.crashes;
  BlockId site = *r.crash_site;
  for (const auto& kv : out.tte)
    if (kv.first == site) return;
  out.tte.emplace_back(site, now);
  std::sort(out.tte.begin(), out.tte.end());
  out.first_crashes.push_back({input, site, now, parent_seed});
  out.series.push_back({now, cov.observed(), best_finite_distance(queue), 'C'});
}

}  // namespace

void fuzz_one(Seed& seed, FuzzContext& ctx) {
  std::uint64_t n = energy(seed, ctx.clock.now(), ctx.anneal, ctx.cfg.base_energy);

  for (std::uint64_t j = 0; j < n && ctx.clock.now() < ctx.cfg.budget; ++j) {
    Input input = mutate(seed.input, ctx.mutation_rng, ctx.cfg.max_input_len);
    ++seed.mutants;

    CutLossConfig cut_cfg{ctx.cfg.p, ctx.cfg.mode, ctx.cfg.granularity};
    Phase phase = phase_at(ctx.clock.now(), ctx.anneal);
    BlockHook hook = make_hook(ctx.dm, cut_cfg, phase, ctx.cut_rng);

    ExecutionResult r = execute(ctx.graph, input, hook, ctx.cfg.step_limit);
    account_run(r, ctx.dm, ctx.exec_reach, ctx.out, ctx.clock);

    if (r.status == ExecStatus::Crash) {
      // Crashing inputs never become seeds; their coverage still lands in
      // the global map, mirroring instrumentation that writes the bitmap
      // before aborting.
      ctx.coverage.merge_trace_if_new(r.trace);
      record_crash(r, input, seed.id, ctx.clock.now(), ctx.out, ctx.coverage, ctx.queue);
      continue;
    }
    if (r.status == ExecStatus::Timeout) continue;

    if (is_interesting(r, ctx.coverage)) {
      Seed fresh;
      fresh.input = std::move(input);
      fresh.distance = seed_distance(r.trace, ctx.dm);
      fresh.found_at = ctx.clock.now();
      ctx.anneal.observe(fresh.distance);
      ctx.queue.admit(std::move(fresh));
      ++ctx.out.seeds_admitted;
      ctx.out.series.push_back(
          {ctx.clock.now(), ctx.coverage.observed(), best_finite_distance(ctx.queue), 'S'});
    }
  }
}

CampaignReport run_campaign(const CampaignConfig& cfg) {
  cfg.validate();

  std::ifstream gf(cfg.graph_path);
  if (!gf) throw CampaignError("cannot read graph file: " + cfg.graph_path);
  std::string text((std::istreambuf_iterator<char>(gf)), std::istreambuf_iterator<char>());
  ICfg graph = ICfg::parse(text);

  DistanceMap dm = compute_distances(graph, cfg.c_mult);
  std::vector<bool> exec_reach =
      blocks_reaching(graph, graph.last_target(), /*include_hidden=*/true);
  std::vector<Input> corpus = load_seed_files(cfg.seeds_dir);

  CampaignReport report;
  report.config = cfg;
  report.graph_has_hidden_edges = graph.has_hidden_edges();
  for (BlockId b : graph.crash_blocks()) report.crash_sites.emplace_back(b, graph.block_name(b));
  for (BlockId t : graph.targets()) report.target_names.push_back(graph.block_name(t));

  for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
    CoverageMap coverage;
    SeedQueue queue;
    AnnealState anneal;
    anneal.t_x = cfg.t_x;
    anneal.schedule = cfg.schedule;
    std::mt19937_64 mutation_rng = make_stream(cfg.rng_seed + trial, 1);
    std::mt19937_64 cut_rng = make_stream(cfg.rng_seed + trial, 2);
    CampaignClock clock{cfg.time_mode, 0, std::chrono::steady_clock::now()};

    TrialResult out;
    out.trial = trial;

    // Dry runs: initial seeds execute uncut and are admitted unconditionally.
    for (const Input& input : corpus) {
      if (clock.now() >= cfg.budget) break;
      ExecutionResult r = execute(graph, input, cfg.step_limit);
      account_run(r, dm, exec_reach, out, clock);
      coverage.merge_trace_if_new(r.trace);
      if (r.status == ExecStatus::Crash) {
        record_crash(r, input, 0, clock.now(), out, coverage, queue);
        continue;
      }
      Seed s;
      s.input = input;
      s.distance = seed_distance(r.trace, dm);
      s.found_at = clock.now();
      anneal.observe(s.distance);
      queue.admit(std::move(s));
      ++out.seeds_admitted;
      out.series.push_back({clock.now(), coverage.observed(), best_finite_distance(queue), 'S'});
    }

    while (clock.now() < cfg.budget && !queue.empty()) {
      Seed& seed = queue.next();
      FuzzContext ctx{graph, dm,    exec_reach,   cfg,     coverage, queue,
                      anneal, clock, mutation_rng, cut_rng, out};
      fuzz_one(seed, ctx);
    }

    report.trials.push_back(std::move(out));
  }
  return report;
}

}  // namespace dgf
