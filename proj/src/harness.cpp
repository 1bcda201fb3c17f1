#include "dgf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dgf/rng.hpp"

namespace dgf {

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

struct KvLine {
  std::string key;
  std::string value;
  std::size_t line;
};

std::vector<KvLine> parse_kv(std::string_view text) {
  std::vector<KvLine> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto trim = [](std::string& s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    trim(key);
    trim(value);
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    out.push_back({std::move(key), std::move(value), line_no});
  }
  return out;
}

std::uint64_t parse_u64(const KvLine& kv) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("line " + std::to_string(kv.line) + ": bad integer for '" + kv.key + "'");
  }
}

double parse_f64(const KvLine& kv) {
  try {
    std::size_t used = 0;
    double v = std::stod(kv.value, &used);
    if (used != kv.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("line " + std::to_string(kv.line) + ": bad number for '" + kv.key + "'");
  }
}

CutMode parse_mode(const KvLine& kv) {
  if (kv.value == "always") return CutMode::Always;
  if (kv.value == "exploitation_only") return CutMode::ExploitationOnly;
  if (kv.value == "off") return CutMode::Off;
  throw ConfigError("line " + std::to_string(kv.line) +
                    ": mode must be always|exploitation_only|off");
}

const char* mode_name(CutMode m) {
  switch (m) {
    case CutMode::Always: return "always";
    case CutMode::ExploitationOnly: return "exploitation_only";
    case CutMode::Off: return "off";
  }
  return "?";
}

// TTE of `site` in one trial, if the site was exposed.
const std::uint64_t* tte_of(const TrialResult& t, BlockId site) {
  for (const auto& kv : t.tte)
    if (kv.first == site) return &kv.second;
  return nullptr;
}

}  // namespace

CampaignConfig parse_campaign_config(std::string_view text) {
  CampaignConfig cfg;
  for (const KvLine& kv : parse_kv(text)) {
    if (kv.key == "graph") cfg.graph_path = kv.value;
    else if (kv.key == "seeds") cfg.seeds_dir = kv.value;
    else if (kv.key == "out") cfg.out_dir = kv.value;
    else if (kv.key == "p") cfg.p = parse_f64(kv);
    else if (kv.key == "mode") cfg.mode = parse_mode(kv);
    else if (kv.key == "t_x") cfg.t_x = parse_u64(kv);
    else if (kv.key == "budget") cfg.budget = parse_u64(kv);
    else if (kv.key == "trials") cfg.trials = static_cast<std::uint32_t>(parse_u64(kv));
    else if (kv.key == "rng_seed") cfg.rng_seed = parse_u64(kv);
    else if (kv.key == "granularity") cfg.granularity = static_cast<std::uint32_t>(parse_u64(kv));
    else if (kv.key == "c_mult") cfg.c_mult = static_cast<std::uint32_t>(parse_u64(kv));
    else if (kv.key == "base_energy") cfg.base_energy = parse_u64(kv);
    else if (kv.key == "step_limit") cfg.step_limit = parse_u64(kv);
    else if (kv.key == "max_input_len") cfg.max_input_len = parse_u64(kv);
    else if (kv.key == "schedule") {
      if (kv.value != "exp")
        throw ConfigError("line " + std::to_string(kv.line) + ": only schedule=exp is supported");
      cfg.schedule = Schedule::Exp;
    } else if (kv.key == "time_mode") {
      if (kv.value == "virtual") cfg.time_mode = TimeMode::Virtual;
      else if (kv.value == "wall") cfg.time_mode = TimeMode::Wall;
      else throw ConfigError("line " + std::to_string(kv.line) + ": time_mode must be virtual|wall");
    } else {
      throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
  }
  return cfg;
}

ExperimentSpec parse_experiment_spec(std::string_view text) {
  ExperimentSpec spec;
  bool have_p = false;
  for (const KvLine& kv : parse_kv(text)) {
    if (kv.key == "benchmark") {
      auto c1 = kv.value.find(':');
      auto c2 = (c1 == std::string::npos) ? std::string::npos : kv.value.find(':', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError("line " + std::to_string(kv.line) +
                          ": benchmark must be <label>:<graph>:<seeds>");
      BenchmarkSpec b;
      b.label = kv.value.substr(0, c1);
      b.graph_path = kv.value.substr(c1 + 1, c2 - c1 - 1);
      b.seeds_dir = kv.value.substr(c2 + 1);
      if (b.label.empty() || b.graph_path.empty() || b.seeds_dir.empty())
        throw ConfigError("line " + std::to_string(kv.line) + ": empty benchmark field");
      spec.benchmarks.push_back(std::move(b));
    } else if (kv.key == "p_values") {
      std::stringstream ss(kv.value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        KvLine fake{kv.key, item, kv.line};
        double p = parse_f64(fake);
        if (!(p >= 0.0 && p <= 1.0))
          throw ConfigError("line " + std::to_string(kv.line) + ": p values must be in [0, 1]");
        spec.p_values.push_back(p);
      }
      have_p = true;
    } else if (kv.key == "mode") spec.mode = parse_mode(kv);
    else if (kv.key == "trials") spec.trials = static_cast<std::uint32_t>(parse_u64(kv));
    else if (kv.key == "budget") spec.budget = parse_u64(kv);
    else if (kv.key == "t_x") spec.t_x = parse_u64(kv);
    else if (kv.key == "rng_seed") spec.rng_seed = parse_u64(kv);
    else if (kv.key == "granularity") spec.granularity = static_cast<std::uint32_t>(parse_u64(kv));
    else if (kv.key == "c_mult") spec.c_mult = static_cast<std::uint32_t>(parse_u64(kv));
    else if (kv.key == "base_energy") spec.base_energy = parse_u64(kv);
    else if (kv.key == "step_limit") spec.step_limit = parse_u64(kv);
    else if (kv.key == "out") spec.out_dir = kv.value;
    else throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
  }
  if (spec.benchmarks.empty()) throw ConfigError("experiment spec lists no benchmarks");
  if (!have_p || spec.p_values.empty()) throw ConfigError("experiment spec lists no p_values");
  if (spec.trials < 1) throw ConfigError("trials must be >= 1");
  // Speedups are computed against the p=0 column; make sure one exists.
  if (std::find(spec.p_values.begin(), spec.p_values.end(), 0.0) == spec.p_values.end())
    spec.p_values.insert(spec.p_values.begin(), 0.0);
  return spec;
}

std::string render_trials_csv(const CampaignReport& report) {
  std::string out =
      "trial,executions,executed_blocks,cuts,tp_cuts,fp_cuts,crashes,timeouts,"
      "seeds_admitted,unreachable_runs,reachable_bbs,unreachable_bbs\n";
  for (const TrialResult& t : report.trials) {
    out += std::to_string(t.trial) + "," + std::to_string(t.executions) + "," +
           std::to_string(t.executed_blocks) + "," + std::to_string(t.cuts) + "," +
           std::to_string(t.tp_cuts) + "," + std::to_string(t.fp_cuts) + "," +
           std::to_string(t.crashes) + "," + std::to_string(t.timeouts) + "," +
           std::to_string(t.seeds_admitted) + "," + std::to_string(t.unreachable_runs) + "," +
           std::to_string(t.reachable_bbs) + "," + std::to_string(t.unreachable_bbs) + "\n";
  }
  return out;
}

std::string render_tte_csv(const CampaignReport& report) {
  std::string out = "trial,crash_site,tte\n";
  for (const TrialResult& t : report.trials) {
    for (const auto& [site, name] : report.crash_sites) {
      const std::uint64_t* tte = tte_of(t, site);
      out += std::to_string(t.trial) + "," + name + "," + (tte ? std::to_string(*tte) : "T.O.") +
             "\n";
    }
  }
  return out;
}

std::string render_series_csv(const CampaignReport& report) {
  std::string out = "trial,clock,coverage,best_distance,event\n";
  for (const TrialResult& t : report.trials) {
    for (const SeriesPoint& s : t.series) {
      out += std::to_string(t.trial) + "," + std::to_string(s.clock) + "," +
             std::to_string(s.coverage) + "," + fmt("%.4f", s.best_distance) + "," + s.event +
             "\n";
    }
  }
  return out;
}

std::string render_summary_text(const CampaignReport& report) {
  const CampaignConfig& c = report.config;
  std::ostringstream out;
  out << "campaign summary\n";
  out << "  time unit: " << (c.time_mode == TimeMode::Virtual ? "virtual (executed blocks)" : "wall (ms)")
      << "\n";
  out << "  graph: " << c.graph_path << (report.graph_has_hidden_edges ? " (has hidden edges)" : "")
      << "\n";
  out << "  targets:";
  for (const std::string& t : report.target_names) out << " " << t;
  if (!report.target_names.empty()) out << " (goal: " << report.target_names.back() << ")";
  out << "\n";
  out << "  seeds: " << c.seeds_dir << "\n";
  out << "  p=" << fmt("%.4f", c.p) << " mode=" << mode_name(c.mode)
      << " granularity=" << c.granularity << " t_x=" << c.t_x << " budget=" << c.budget
      << " trials=" << c.trials << " rng_seed=" << c.rng_seed << "\n\n";

  std::uint64_t total_exec = 0, total_blocks = 0, total_cuts = 0, total_tp = 0, total_fp = 0;
  std::uint64_t total_runs_unreach = 0, total_rbb = 0, total_ubb = 0;
  for (const TrialResult& t : report.trials) {
    out << "  trial " << t.trial << ": executions=" << t.executions
        << " blocks=" << t.executed_blocks << " cuts=" << t.cuts << " (tp=" << t.tp_cuts
        << " fp=" << t.fp_cuts << ") crashes=" << t.crashes << " seeds=" << t.seeds_admitted
        << "\n";
    for (const auto& [site, name] : report.crash_sites) {
      const std::uint64_t* tte = tte_of(t, site);
      out << "    " << name << ": " << (tte ? std::to_string(*tte) : "T.O.") << "\n";
    }
    total_exec += t.executions;
    total_blocks += t.executed_blocks;
    total_cuts += t.cuts;
    total_tp += t.tp_cuts;
    total_fp += t.fp_cuts;
    total_runs_unreach += t.unreachable_runs;
    total_rbb += t.reachable_bbs;
    total_ubb += t.unreachable_bbs;
  }

  out << "\n  totals: executions=" << total_exec << " blocks=" << total_blocks
      << " cuts=" << total_cuts << " (tp=" << total_tp << " fp=" << total_fp << ")\n";
  if (total_exec > 0) {
    double r_bar = static_cast<double>(total_rbb) / static_cast<double>(total_exec);
    double u_bar = static_cast<double>(total_ubb) / static_cast<double>(total_exec);
    out << "  measured r_bar=" << fmt("%.3f", r_bar) << " u_bar=" << fmt("%.3f", u_bar)
        << " unreachable_run_fraction="
        << fmt("%.4f", static_cast<double>(total_runs_unreach) / static_cast<double>(total_exec))
        << "\n";
    if (u_bar > 0.0 && c.p > 0.0) {
      OverheadModel m{c.p, r_bar, u_bar, 0.0};
      double s = eq1_saving(m);
      // s can reach exactly 1 when no executed block is reachable (r_bar=0),
      // which is the model's pole: the predicted speedup diverges.
      double speedup = s < 1.0 ? eq2_speedup(s, 0.0) : std::numeric_limits<double>::infinity();
      out << "  predicted saving s=" << fmt("%.4f", s)
          << " predicted speedup I=" << fmt("%.4f", speedup)
          << " (t1/t2=0: virtual time counts executed blocks only)\n";
    }
  }
  return out.str();
}

void write_report_files(const CampaignReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);
  write_text_file(out_dir + "/trials.csv", render_trials_csv(report));
  write_text_file(out_dir + "/tte.csv", render_tte_csv(report));
  write_text_file(out_dir + "/series.csv", render_series_csv(report));
  write_text_file(out_dir + "/summary.txt", render_summary_text(report));
}

TteTable build_tte_table(const ExperimentSpec& spec,
                         const std::vector<std::vector<CampaignReport>>& reports) {
  TteTable table;
  table.p_values = spec.p_values;

  std::size_t baseline = 0;
  for (std::size_t i = 0; i < spec.p_values.size(); ++i)
    if (spec.p_values[i] == 0.0) baseline = i;

  for (std::size_t b = 0; b < spec.benchmarks.size(); ++b) {
    const auto& per_p = reports[b];
    const CampaignReport& base_report = per_p[baseline];

    for (const auto& [site, name] : base_report.crash_sites) {
      TteRow row;
      row.benchmark = spec.benchmarks[b].label;
      row.crash_site = name;
      for (std::size_t pi = 0; pi < spec.p_values.size(); ++pi) {
        const CampaignReport& rep = per_p[pi];
        TteCell cell;
        cell.trials = static_cast<std::uint32_t>(rep.trials.size());
        std::vector<double> ttes;
        for (const TrialResult& t : rep.trials) {
          if (const std::uint64_t* tte = tte_of(t, site)) ttes.push_back(static_cast<double>(*tte));
        }
        cell.successes = static_cast<std::uint32_t>(ttes.size());
        if (!ttes.empty()) {
          double sum = 0.0;
          for (double v : ttes) sum += v;
          cell.mean_tte = sum / static_cast<double>(ttes.size());
          std::sort(ttes.begin(), ttes.end());
          std::size_t mid = ttes.size() / 2;
          cell.median_tte =
              (ttes.size() % 2 == 1) ? ttes[mid] : 0.5 * (ttes[mid - 1] + ttes[mid]);
        }
        row.cells.push_back(cell);
      }
      const TteCell& base = row.cells[baseline];
      for (const TteCell& cell : row.cells) {
        if (base.successes > 0 && cell.successes > 0 && cell.mean_tte > 0.0)
          row.speedup.push_back(base.mean_tte / cell.mean_tte);
        else
          row.speedup.push_back(std::numeric_limits<double>::quiet_NaN());
      }
      table.rows.push_back(std::move(row));
    }

    // Theory block: measured means from the baseline column.
    BenchTheory th;
    th.benchmark = spec.benchmarks[b].label;
    std::uint64_t exec = 0, rbb = 0, ubb = 0;
    for (const TrialResult& t : base_report.trials) {
      exec += t.executions;
      rbb += t.reachable_bbs;
      ubb += t.unreachable_bbs;
    }
    if (exec > 0) {
      th.r_bar = static_cast<double>(rbb) / static_cast<double>(exec);
      th.u_bar = static_cast<double>(ubb) / static_cast<double>(exec);
    }
    for (double p : spec.p_values) {
      if (th.r_bar + th.u_bar > 0.0 && th.u_bar >= 1.0) {
        OverheadModel m{p, th.r_bar, th.u_bar, 0.0};
        double s = eq1_saving(m);
        th.s_theory.push_back(s);
        // r_bar=0 drives s to exactly 1 at p=1: the model's pole
        th.i_theory.push_back(s < 1.0 ? eq2_speedup(s, 0.0)
                                      : std::numeric_limits<double>::infinity());
      } else {
        th.s_theory.push_back(0.0);
        th.i_theory.push_back(1.0);
      }
    }
    table.theory.push_back(std::move(th));
  }
  return table;
}

std::string render_tte_table_text(const TteTable& table) {
  std::ostringstream out;
  out << "# TTE in virtual time (executed blocks). Wall-clock TTEs from other\n"
         "# hosts are not comparable; this unit is hardware-independent.\n"
         "# Cells: mean TTE over successful trials (success count) or T.O.\n\n";

  const std::size_t w = 14;
  out << pad("benchmark", 16) << pad("crash_site", 12);
  for (double p : table.p_values) out << pad("p=" + fmt("%.2f", p), w);
  out << "\n";
  for (const TteRow& row : table.rows) {
    out << pad(row.benchmark, 16) << pad(row.crash_site, 12);
    for (const TteCell& cell : row.cells) {
      if (cell.successes == 0) {
        out << pad("T.O.", w);
      } else {
        std::string s = fmt("%.1f", cell.mean_tte);
        if (cell.successes < cell.trials) s += " (" + std::to_string(cell.successes) + ")";
        out << pad(s, w);
      }
    }
    out << "\n";
  }

  out << "\nspeedup vs p=0 column (mean-based):\n";
  out << pad("benchmark", 16) << pad("crash_site", 12);
  for (double p : table.p_values) out << pad("p=" + fmt("%.2f", p), w);
  out << "\n";
  for (const TteRow& row : table.rows) {
    out << pad(row.benchmark, 16) << pad(row.crash_site, 12);
    for (double s : row.speedup) out << pad(std::isnan(s) ? "T.O." : fmt("%.2f", s), w);
    out << "\n";
  }

  out << "\ntheory vs practice (t1/t2 = 0; r_bar/u_bar measured on the p=0 column).\n"
         "The model assumes every test case has the same r/u split; campaign\n"
         "populations are heterogeneous, so the prediction is indicative only\n"
         "(Jensen gap) and feedback interference widens the difference:\n";
  for (std::size_t b = 0; b < table.theory.size(); ++b) {
    const BenchTheory& th = table.theory[b];
    out << pad(th.benchmark, 16) << "r_bar=" << fmt("%.2f", th.r_bar)
        << " u_bar=" << fmt("%.2f", th.u_bar) << "\n";
    for (std::size_t pi = 0; pi < table.p_values.size(); ++pi) {
      out << pad("", 16) << pad("p=" + fmt("%.2f", table.p_values[pi]), 10)
          << "s=" << fmt("%.4f", th.s_theory[pi]) << "  I_theory=" << fmt("%.4f", th.i_theory[pi]);
      // Practice diverges from the model (incomplete distance maps, feedback
      // interference); print the ratio wherever a measured speedup exists.
      double measured = std::numeric_limits<double>::quiet_NaN();
      for (const TteRow& row : table.rows)
        if (row.benchmark == th.benchmark && !std::isnan(row.speedup[pi]))
          measured = row.speedup[pi];
      if (!std::isnan(measured))
        out << "  measured=" << fmt("%.4f", measured)
            << "  measured/I=" << fmt("%.4f", measured / th.i_theory[pi]);
      out << "\n";
    }
  }
  return out.str();
}

std::string render_tte_table_csv(const TteTable& table) {
  std::string out = "benchmark,crash_site,p,trials,successes,mean_tte,median_tte,speedup_vs_p0\n";
  for (const TteRow& row : table.rows) {
    for (std::size_t pi = 0; pi < table.p_values.size(); ++pi) {
      const TteCell& c = row.cells[pi];
      out += row.benchmark + "," + row.crash_site + "," + fmt("%.4f", table.p_values[pi]) + "," +
             std::to_string(c.trials) + "," + std::to_string(c.successes) + ",";
      out += (c.successes ? fmt("%.1f", c.mean_tte) : "T.O.");
      out += ",";
      out += (c.successes ? fmt("%.1f", c.median_tte) : "T.O.");
      out += ",";
      out += (std::isnan(row.speedup[pi]) ? "T.O." : fmt("%.4f", row.speedup[pi]));
      out += "\n";
    }
  }
  return out;
}

void cmd_distance(const std::string& graph_path, const std::string& out_path,
                  std::uint32_t c_mult) {
  ICfg g = ICfg::parse(read_text_file(graph_path));
  DistanceMap dm = compute_distances(g, c_mult);
  write_text_file(out_path, write_distance_file(g, dm));
}

CampaignReport cmd_fuzz(const CampaignConfig& cfg) {
  CampaignReport report = run_campaign(cfg);
  if (!cfg.out_dir.empty()) write_report_files(report, cfg.out_dir);
  return report;
}

TteTable cmd_compare(const ExperimentSpec& spec) {
  namespace fs = std::filesystem;
  std::vector<std::vector<CampaignReport>> reports;
  for (const BenchmarkSpec& bench : spec.benchmarks) {
    std::vector<CampaignReport> per_p;
    for (double p : spec.p_values) {
      CampaignConfig cfg;
      cfg.graph_path = bench.graph_path;
      cfg.seeds_dir = bench.seeds_dir;
      cfg.p = p;
      cfg.mode = spec.mode;
      cfg.granularity = spec.granularity;
      cfg.t_x = spec.t_x;
      cfg.budget = spec.budget;
      cfg.trials = spec.trials;
      cfg.rng_seed = spec.rng_seed;
      cfg.c_mult = spec.c_mult;
      cfg.base_energy = spec.base_energy;
      cfg.step_limit = spec.step_limit;
      if (!spec.out_dir.empty())
        cfg.out_dir = spec.out_dir + "/" + bench.label + "/p" + fmt("%.2f", p);
      per_p.push_back(cmd_fuzz(cfg));
    }
    reports.push_back(std::move(per_p));
  }

  TteTable table = build_tte_table(spec, reports);
  if (!spec.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(spec.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + spec.out_dir);
    write_text_file(spec.out_dir + "/tte_table.txt", render_tte_table_text(table));
    write_text_file(spec.out_dir + "/tte_table.csv", render_tte_table_csv(table));
  }
  return table;
}

std::string cmd_theory_csv(const std::vector<double>& p_grid, double r_bar, double u_bar,
                           double t1_over_t2, std::uint64_t runs, std::uint64_t rng_seed) {
  std::mt19937_64 rng = make_stream(rng_seed, 3);
  std::string out = "p,s_theory,s_mc,se,I_theory\n";
  for (double p : p_grid) {
    OverheadModel m{p, r_bar, u_bar, t1_over_t2};
    double s = eq1_saving(m);
    McEstimate mc = monte_carlo_saving(p, static_cast<std::uint64_t>(std::llround(r_bar)),
                                       static_cast<std::uint64_t>(std::llround(u_bar)), runs, rng);
    double speedup = eq2_speedup(s, t1_over_t2);
    out += fmt("%.4f", p) + "," + fmt("%.6f", s) + "," + fmt("%.6f", mc.mean) + "," +
           fmt("%.6f", mc.se) + "," + fmt("%.6f", speedup) + "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write failed: " + path);
}

}  // namespace dgf
