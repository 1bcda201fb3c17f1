// The grey-box fuzzing loop: pick a seed, grant it energy, mutate, execute
// under the cut hook, triage crashes and coverage, admit interesting inputs.
#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dgf/coverage.hpp"
#include "dgf/cutloss.hpp"
#include "dgf/distance.hpp"
#include "dgf/icfg.hpp"
#include "dgf/scheduler.hpp"
#include "dgf/vm.hpp"

namespace dgf {

// 1-8 stacked operators drawn uniformly from {bit flip, byte set, byte
// add/sub (+-35), byte duplicate, byte delete, self splice}. On an empty
// input, delete no-ops and the rest degrade to inserting one byte. Result
// length stays within [0, max_len].
Input mutate(const Input& in, std::mt19937_64& rng, std::size_t max_len);

struct CrashRecord {
  Input input;
  BlockId crash_site = 0;
  std::uint64_t found_at = 0;
  std::uint32_t parent_seed = 0;
};

enum class TimeMode { Virtual, Wall };

struct CampaignConfig {
  std::string graph_path;
  std::string seeds_dir;
  std::string out_dir;

  double p = 0.0;
  CutMode mode = CutMode::Always;
  std::uint32_t granularity = 10;

  std::uint64_t t_x = 50'000;      // time-to-exploitation (clock units)
  std::uint64_t budget = 200'000;  // campaign length (clock units)
  std::uint32_t trials = 1;
  std::uint64_t rng_seed = 1;
  std::uint32_t c_mult = 10;
  std::uint64_t base_energy = 16;
  Schedule schedule = Schedule::Exp;
  TimeMode time_mode = TimeMode::Virtual;  // virtual = executed blocks
  std::uint64_t step_limit = kDefaultStepLimit;
  std::size_t max_input_len = 4096;

  void validate() const;
};

struct SeriesPoint {
  std::uint64_t clock;
  std::uint64_t coverage;     // (slot, bucket) pairs observed
  double best_distance;       // smallest finite seed distance, -1 if none
  char event;                 // 'S' seed admitted, 'C' crash found
};

struct TrialResult {
  std::uint32_t trial = 0;
  // First-exposure clock per crash site, sorted by site; sites never hit are
  // absent (rendered as a timeout by the reporting layer).
  std::vector<std::pair<BlockId, std::uint64_t>> tte;
  std::vector<CrashRecord> first_crashes;  // one per site, discovery order

  std::uint64_t executions = 0;
  std::uint64_t executed_blocks = 0;
  std::uint64_t cuts = 0;
  std::uint64_t tp_cuts = 0;  // cut block cannot reach the target in the execution view
  std::uint64_t fp_cuts = 0;  // cut block still could (hidden-edge graphs only)
  std::uint64_t crashes = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t seeds_admitted = 0;

  std::uint64_t unreachable_runs = 0;   // runs touching >= 1 unreachable block
  std::uint64_t reachable_bbs = 0;      // executed blocks with finite distance
  std::uint64_t unreachable_bbs = 0;    // executed blocks with -1 distance

  std::vector<SeriesPoint> series;
};

struct CampaignReport {
  CampaignConfig config;
  // Every crash-flagged block of the graph, id and "fn:index" name, graph
  // order. Sites never hit in a trial render as timeouts.
  std::vector<std::pair<BlockId, std::string>> crash_sites;
  // Ordered sub-target chain; the last entry is the goal that drives
  // reachability, earlier ones are informational.
  std::vector<std::string> target_names;
  bool graph_has_hidden_edges = false;
  std::vector<TrialResult> trials;
};

// Campaign time source. Virtual time is the cumulative executed-block count,
// which makes campaigns hardware-independent and bit-reproducible; wall mode
// exists for realism and gives up determinism.
struct CampaignClock {
  TimeMode mode = TimeMode::Virtual;
  std::uint64_t virtual_clock = 0;
  std::chrono::steady_clock::time_point wall_start;

  std::uint64_t now() const;
};

// Per-seed round: grants energy(seed) mutations, executes each under the cut
// hook, records crashes (never admitted), admits interesting Ok/Cut results
// with a freshly computed trace distance. Exposed for tests; campaigns call
// it through run_campaign.
struct FuzzContext {
  const ICfg& graph;               // execution view
  const DistanceMap& dm;
  const std::vector<bool>& exec_reach;  // reachability to last target, execution view
  const CampaignConfig& cfg;
  CoverageMap& coverage;
  SeedQueue& queue;
  AnnealState& anneal;
  CampaignClock& clock;
  std::mt19937_64& mutation_rng;
  std::mt19937_64& cut_rng;
  TrialResult& out;
};

void fuzz_one(Seed& seed, FuzzContext& ctx);

class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs cfg.trials independent trials (fresh state, rng_seed + trial index).
// Deterministic in virtual-time mode: (config, rng_seed) fixes the report.
CampaignReport run_campaign(const CampaignConfig& cfg);

// Seed corpus loader: raw byte files, one input per file, sorted by filename.
std::vector<Input> load_seed_files(const std::string& dir);

}  // namespace dgf
