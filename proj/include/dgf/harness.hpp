// Command-line front end plumbing: config parsing, campaign report files,
// the cross-configuration TTE/speedup table, and the theory CSV.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dgf/fuzzer.hpp"
#include "dgf/theory.hpp"

namespace dgf {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// key=value text, '#' comments. Keys: graph, seeds, out, p, mode, t_x,
// budget, trials, rng_seed, granularity, c_mult, base_energy, schedule,
// time_mode, step_limit, max_input_len.
CampaignConfig parse_campaign_config(std::string_view text);

struct BenchmarkSpec {
  std::string label;
  std::string graph_path;
  std::string seeds_dir;
};

struct ExperimentSpec {
  std::vector<BenchmarkSpec> benchmarks;
  std::vector<double> p_values;  // a p=0 baseline column is prepended if absent
  CutMode mode = CutMode::Always;
  std::uint32_t trials = 7;
  std::uint64_t budget = 200'000;
  std::uint64_t t_x = 50'000;
  std::uint64_t rng_seed = 1;
  std::uint32_t granularity = 10;
  std::uint32_t c_mult = 10;
  std::uint64_t base_energy = 16;
  std::uint64_t step_limit = kDefaultStepLimit;
  std::string out_dir;
};

// key=value text. `benchmark=<label>:<graph>:<seeds>` is repeatable;
// `p_values` is comma-separated.
ExperimentSpec parse_experiment_spec(std::string_view text);

// Campaign report files. All CSV output is byte-deterministic for a fixed
// config in virtual-time mode.
std::string render_trials_csv(const CampaignReport& report);
std::string render_tte_csv(const CampaignReport& report);
std::string render_series_csv(const CampaignReport& report);
std::string render_summary_text(const CampaignReport& report);
void write_report_files(const CampaignReport& report, const std::string& out_dir);

// Cross-configuration aggregation: one row per (benchmark, crash site), one
// cell per p value with mean/median TTE over successful trials and the
// success count; speedups are mean-based against the p=0 column.
struct TteCell {
  std::uint32_t successes = 0;
  std::uint32_t trials = 0;
  double mean_tte = 0.0;    // over successful trials; meaningless if successes == 0
  double median_tte = 0.0;  // likewise
};

struct TteRow {
  std::string benchmark;
  std::string crash_site;
  std::vector<TteCell> cells;     // one per p value
  std::vector<double> speedup;    // vs p=0 column; NaN when undefined
};

struct BenchTheory {
  std::string benchmark;
  double r_bar = 0.0;  // measured on the p=0 column
  double u_bar = 0.0;
  std::vector<double> s_theory;   // per p value
  std::vector<double> i_theory;   // eq2 with t1/t2 = 0 (virtual time has no loop cost)
};

struct TteTable {
  std::vector<double> p_values;
  std::vector<TteRow> rows;
  std::vector<BenchTheory> theory;
};

TteTable build_tte_table(const ExperimentSpec& spec,
                         const std::vector<std::vector<CampaignReport>>& reports);
std::string render_tte_table_text(const TteTable& table);
std::string render_tte_table_csv(const TteTable& table);

// Subcommand bodies. They throw on config/IO errors; the CLI maps that to a
// nonzero exit. Timeouts are data, not failures.
void cmd_distance(const std::string& graph_path, const std::string& out_path,
                  std::uint32_t c_mult);
CampaignReport cmd_fuzz(const CampaignConfig& cfg);
TteTable cmd_compare(const ExperimentSpec& spec);
std::string cmd_theory_csv(const std::vector<double>& p_grid, double r_bar, double u_bar,
                           double t1_over_t2, std::uint64_t runs, std::uint64_t rng_seed);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace dgf
