// dgflab: build distance maps, run fuzzing campaigns, compare configurations,
// and evaluate the analytical termination model.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgf/harness.hpp"

namespace {

// DGFLAB_OUT_DIR overrides any configured output directory.
std::string out_dir_or_env(const std::string& configured) {
  if (const char* env = std::getenv("DGFLAB_OUT_DIR")) return env;
  return configured;
}

std::vector<double> parse_grid(const std::string& text) {
  // "lo:hi:step" or a comma-separated list
  std::vector<double> grid;
  auto c1 = text.find(':');
  if (c1 != std::string::npos) {
    auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) throw dgf::ConfigError("grid must be lo:hi:step");
    double lo = std::stod(text.substr(0, c1));
    double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    double step = std::stod(text.substr(c2 + 1));
    if (step <= 0.0) throw dgf::ConfigError("grid step must be positive");
    for (double p = lo; p <= hi + 1e-12; p += step) grid.push_back(p);
    return grid;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    grid.push_back(std::stod(text.substr(pos, comma - pos)));
    pos = (comma == std::string::npos) ? text.size() : comma + 1;
  }
  return grid;
}

dgf::CutMode parse_mode_flag(const std::string& text) {
  if (text == "always") return dgf::CutMode::Always;
  if (text == "exploitation_only") return dgf::CutMode::ExploitationOnly;
  if (text == "off") return dgf::CutMode::Off;
  throw dgf::ConfigError("mode must be always|exploitation_only|off");
}

// Campaign keys exposed as CLI flags; flags override config-file values.
struct CampaignFlags {
  std::string graph, seeds, out, mode, time_mode;
  double p = -1.0;
  std::int64_t granularity = -1, trials = -1, c_mult = -1;
  std::int64_t t_x = -1, budget = -1, base_energy = -1, step_limit = -1, max_input_len = -1;
  std::int64_t rng_seed = -1;

  void add_to(CLI::App* cmd, bool with_p) {
    cmd->add_option("--graph", graph, "graph file");
    cmd->add_option("--seeds", seeds, "seed directory");
    cmd->add_option("--out", out, "output directory");
    if (with_p) cmd->add_option("--p", p, "termination probability");
    cmd->add_option("--mode", mode, "always|exploitation_only|off");
    cmd->add_option("--granularity", granularity, "termination draw resolution");
    cmd->add_option("--t-x", t_x, "time-to-exploitation horizon");
    cmd->add_option("--budget", budget, "campaign length");
    cmd->add_option("--trials", trials, "independent trials");
    cmd->add_option("--rng-seed", rng_seed, "base rng seed");
    cmd->add_option("--c-mult", c_mult, "call-distance magnification");
    cmd->add_option("--base-energy", base_energy, "mutations per round before annealing");
    cmd->add_option("--time-mode", time_mode, "virtual|wall");
    cmd->add_option("--step-limit", step_limit, "per-run block limit");
    cmd->add_option("--max-input-len", max_input_len, "mutation length cap");
  }

  void apply(dgf::CampaignConfig& cfg) const {
    if (!graph.empty()) cfg.graph_path = graph;
    if (!seeds.empty()) cfg.seeds_dir = seeds;
    if (!out.empty()) cfg.out_dir = out;
    if (p >= 0.0) cfg.p = p;
    if (!mode.empty()) cfg.mode = parse_mode_flag(mode);
    if (granularity >= 0) cfg.granularity = static_cast<std::uint32_t>(granularity);
    if (t_x >= 0) cfg.t_x = static_cast<std::uint64_t>(t_x);
    if (budget >= 0) cfg.budget = static_cast<std::uint64_t>(budget);
    if (trials >= 0) cfg.trials = static_cast<std::uint32_t>(trials);
    if (rng_seed >= 0) cfg.rng_seed = static_cast<std::uint64_t>(rng_seed);
    if (c_mult >= 0) cfg.c_mult = static_cast<std::uint32_t>(c_mult);
    if (base_energy >= 0) cfg.base_energy = static_cast<std::uint64_t>(base_energy);
    if (!time_mode.empty()) {
      if (time_mode == "virtual") cfg.time_mode = dgf::TimeMode::Virtual;
      else if (time_mode == "wall") cfg.time_mode = dgf::TimeMode::Wall;
      else throw dgf::ConfigError("time_mode must be virtual|wall");
    }
    if (step_limit >= 0) cfg.step_limit = static_cast<std::uint64_t>(step_limit);
    if (max_input_len >= 0) cfg.max_input_len = static_cast<std::uint64_t>(max_input_len);
  }

  void apply(dgf::ExperimentSpec& spec) const {
    if (!out.empty()) spec.out_dir = out;
    if (!mode.empty()) spec.mode = parse_mode_flag(mode);
    if (granularity >= 0) spec.granularity = static_cast<std::uint32_t>(granularity);
    if (t_x >= 0) spec.t_x = static_cast<std::uint64_t>(t_x);
    if (budget >= 0) spec.budget = static_cast<std::uint64_t>(budget);
    if (trials >= 0) spec.trials = static_cast<std::uint32_t>(trials);
    if (rng_seed >= 0) spec.rng_seed = static_cast<std::uint64_t>(rng_seed);
    if (c_mult >= 0) spec.c_mult = static_cast<std::uint32_t>(c_mult);
    if (base_energy >= 0) spec.base_energy = static_cast<std::uint64_t>(base_energy);
    if (step_limit >= 0) spec.step_limit = static_cast<std::uint64_t>(step_limit);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"directed grey-box fuzzing laboratory"};
  app.require_subcommand(1);

  // distance
  std::string graph_path, dist_out;
  std::uint32_t c_mult = 10;
  auto* dist = app.add_subcommand("distance", "compute the distance file for a graph");
  dist->add_option("--graph", graph_path, "graph file")->required();
  dist->add_option("--out", dist_out, "output distance file")->required();
  dist->add_option("--c-mult", c_mult, "call-distance magnification (default 10)");

  // fuzz: config file (optional) plus flags mirroring every config key
  std::string fuzz_config;
  CampaignFlags fuzz_flags;
  auto* fuzz = app.add_subcommand("fuzz", "run a campaign from a config file and/or flags");
  fuzz->add_option("--config", fuzz_config, "campaign config (key=value)");
  fuzz_flags.add_to(fuzz, /*with_p=*/true);

  // compare: spec file plus shared-key override flags
  std::string compare_spec, compare_p_values;
  CampaignFlags compare_flags;
  auto* compare = app.add_subcommand("compare", "run a benchmark x p-value sweep");
  compare->add_option("--spec", compare_spec, "experiment spec (key=value)")->required();
  compare->add_option("--p-values", compare_p_values, "comma-separated p list override");
  compare_flags.add_to(compare, /*with_p=*/false);

  // theory
  std::string grid_text = "0.05:1.0:0.05";
  double r_bar = 7.0, u_bar = 3.0, t1_over_t2 = 0.0;
  std::uint64_t runs = 100'000, theory_seed = 1;
  std::string theory_out;
  auto* theory = app.add_subcommand("theory", "analytical saving/speedup with Monte Carlo check");
  theory->add_option("--p-grid", grid_text, "p grid: lo:hi:step or comma list");
  theory->add_option("--r", r_bar, "mean reachable blocks per test case");
  theory->add_option("--u", u_bar, "mean unreachable blocks per test case");
  theory->add_option("--t1-over-t2", t1_over_t2, "loop/execution overhead ratio");
  theory->add_option("--runs", runs, "Monte Carlo runs per grid point");
  theory->add_option("--rng-seed", theory_seed, "Monte Carlo seed");
  theory->add_option("--out", theory_out, "write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist->parsed()) {
      dgf::cmd_distance(graph_path, dist_out, c_mult);
      std::cout << "wrote " << dist_out << "\n";
    } else if (fuzz->parsed()) {
      dgf::CampaignConfig cfg;
      if (!fuzz_config.empty()) cfg = dgf::parse_campaign_config(dgf::read_text_file(fuzz_config));
      fuzz_flags.apply(cfg);
      cfg.out_dir = out_dir_or_env(cfg.out_dir);
      if (cfg.out_dir.empty())
        throw dgf::ConfigError("no output directory: set out= in the config, --out, or DGFLAB_OUT_DIR");
      dgf::CampaignReport report = dgf::cmd_fuzz(cfg);
      std::cout << dgf::render_summary_text(report);
      std::cout << "reports in " << cfg.out_dir << "\n";
    } else if (compare->parsed()) {
      dgf::ExperimentSpec spec = dgf::parse_experiment_spec(dgf::read_text_file(compare_spec));
      compare_flags.apply(spec);
      if (!compare_p_values.empty()) {
        spec.p_values = parse_grid(compare_p_values);
        if (std::find(spec.p_values.begin(), spec.p_values.end(), 0.0) == spec.p_values.end())
          spec.p_values.insert(spec.p_values.begin(), 0.0);
      }
      spec.out_dir = out_dir_or_env(spec.out_dir);
      if (spec.out_dir.empty())
        throw dgf::ConfigError("no output directory: set out= in the spec, --out, or DGFLAB_OUT_DIR");
      dgf::TteTable table = dgf::cmd_compare(spec);
      std::cout << dgf::render_tte_table_text(table);
      std::cout << "reports in " << spec.out_dir << "\n";
    } else if (theory->parsed()) {
      std::string csv =
          dgf::cmd_theory_csv(parse_grid(grid_text), r_bar, u_bar, t1_over_t2, runs, theory_seed);
      if (theory_out.empty())
        std::cout << csv;
      else {
        dgf::write_text_file(theory_out, csv);
        std::cout << "wrote " << theory_out << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
