// mazerl: run the experiment matrix, ablations, replays and maze dumps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mazerl/bench.hpp"

namespace fs = std::filesystem;
using namespace mazerl;

namespace {

struct SuiteFlags {
  std::vector<int> sizes{16, 32, 64};
  int mazes = 10;
  std::vector<std::string> variants;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out = "results";
  bool long_run = false;
  long step_limit = 0;
  int decision_period = kDefaultDecisionPeriod;
};

void add_suite_flags(CLI::App* cmd, SuiteFlags& f) {
  cmd->add_option("--sizes", f.sizes, "Maze side lengths")->delimiter(',')->capture_default_str();
  cmd->add_option("--mazes", f.mazes, "Mazes per size")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "Base seed; maze i uses seed + i")->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
  cmd->add_option("--step-limit", f.step_limit, "Step budget per episode (0 = 4 n^2)")->capture_default_str();
  cmd->add_option("--decision-period", f.decision_period, "Steps between threshold decisions")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

SuiteConfig to_suite(const SuiteFlags& f) {
  SuiteConfig cfg;
  cfg.sizes = f.sizes;
  if (f.long_run && std::find(cfg.sizes.begin(), cfg.sizes.end(), 128) == cfg.sizes.end()) cfg.sizes.push_back(128);
  cfg.mazes_per_size = f.mazes;
  if (!f.variants.empty()) {
    cfg.variants.clear();
    for (const std::string& v : f.variants) cfg.variants.push_back(VariantSpec::parse(v));
  }
  cfg.base_seed = f.seed;
  cfg.jobs = f.jobs;
  cfg.step_limit = f.step_limit;
  cfg.decision_period = f.decision_period;
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << body;
  f.flush();
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

void print_report(std::ostream& os, const SuiteReport& report) {
  os << std::left << std::setw(6) << "size" << std::setw(15) << "variant" << std::right << std::setw(11) << "mean"
     << std::setw(10) << "median" << std::setw(8) << "min" << std::setw(8) << "max" << std::setw(10) << "stddev"
     << std::setw(9) << "success" << std::setw(10) << "coverage" << '\n';
  os << std::fixed;
  for (const CellStats& c : report.rows) {
    os << std::left << std::setw(6) << c.n << std::setw(15) << c.variant.name() << std::right << std::setprecision(1)
       << std::setw(11) << c.mean_steps << std::setw(10) << c.median_steps << std::setprecision(0) << std::setw(8)
       << c.min_steps << std::setw(8) << c.max_steps << std::setprecision(1) << std::setw(10) << c.stddev
       << std::setw(8) << c.success_rate << '%' << std::setw(9) << c.mean_coverage << "%\n";
  }
  os << std::defaultfloat;
}

int cmd_run(const SuiteFlags& flags) {
  const SuiteConfig cfg = to_suite(flags);
  const SuiteResult result = run_suite(cfg);
  const fs::path out(flags.out);
  emit_report(result.report, out);

  std::ostringstream records;
  write_records(records, result.records);
  write_file(out / "episodes.jsonl", records.str());

  std::ostringstream qt;
  for (const EpisodeLog& r : result.records) {
    if (!r.q_values) continue;
    qt << "# size=" << r.config.n << " maze_seed=" << r.config.maze_seed << " variant=" << r.config.variant.name()
       << '\n';
    write_qtable(qt, *r.q_values);
  }
  write_file(out / "qtables.txt", qt.str());

  print_report(std::cout, result.report);
  std::cout << "step limit: " << (cfg.step_limit > 0 ? std::to_string(cfg.step_limit) : std::string("4 n^2"))
            << "\nwrote " << (out / "report.csv").string() << ", " << (out / "report.json").string() << ", "
            << (out / "episodes.jsonl").string() << ", " << (out / "qtables.txt").string() << '\n';
  return 0;
}

int cmd_ablate(SuiteFlags flags, const std::string& base_name) {
  const BaseKind base = base_name == "sentinel" ? BaseKind::sentinel : BaseKind::spiral;
  flags.variants = {VariantSpec{base, ConvergenceMode::none}.name(), VariantSpec{base, ConvergenceMode::fixed}.name(),
                    VariantSpec{base, ConvergenceMode::rl}.name()};
  const SuiteConfig cfg = to_suite(flags);
  const SuiteResult result = run_suite(cfg);
  const fs::path out(flags.out);
  emit_report(result.report, out);
  std::ostringstream all;
  for (int n : cfg.sizes) {
    const std::vector<AblationRow> rows = ablation(result.report, n, base);
    std::cout << "size " << n << " (" << cfg.mazes_per_size << " mazes)\n";
    std::cout << std::left << std::setw(16) << "configuration" << std::right << std::setw(12) << "mean_steps"
              << std::setw(12) << "vs_baseline" << '\n';
    for (const AblationRow& r : rows) {
      std::cout << std::left << std::setw(16) << r.label << std::right << std::fixed << std::setprecision(1)
                << std::setw(12) << r.mean_steps << std::setw(11)
                << (r.mode == ConvergenceMode::none ? 0.0 : r.delta_pct) << "%\n"
                << std::defaultfloat;
    }
    all << "# size=" << n << '\n';
    write_ablation_csv(all, rows);
  }
  write_file(out / "ablation.csv", all.str());
  std::cout << "wrote " << (out / "ablation.csv").string() << '\n';
  return 0;
}

// Name of the first top-level field whose value differs, or "" if equal.
std::string first_difference(const nlohmann::json& a, const nlohmann::json& b) {
  for (auto it = a.begin(); it != a.end(); ++it) {
    if (!b.contains(it.key()) || b.at(it.key()) != it.value()) return it.key();
  }
  for (auto it = b.begin(); it != b.end(); ++it) {
    if (!a.contains(it.key())) return it.key();
  }
  return "";
}

int cmd_replay(const std::string& path, int line) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open episode records " + path);
  int lineno = 0;
  int mismatches = 0;
  int replayed = 0;
  for (std::string text; std::getline(in, text);) {
    ++lineno;
    if (text.empty() || (line > 0 && lineno != line)) continue;
    nlohmann::json logged;
    try {
      logged = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const EpisodeLog original = episode_from_json(logged);
    const EpisodeLog again = run_episode(original.config);
    const std::string fresh = episode_record(again);
    ++replayed;
    const std::string label = "line " + std::to_string(lineno) + " (n=" + std::to_string(original.config.n) +
                              " seed=" + std::to_string(original.config.maze_seed) + " " +
                              original.config.variant.name() + ")";
    if (fresh == text) {
      std::cout << "MATCH    " << label << ": " << again.total_steps << " steps\n";
    } else {
      ++mismatches;
      const std::string field = first_difference(logged, nlohmann::json::parse(fresh));
      std::cout << "MISMATCH " << label << ": first differing field '" << (field.empty() ? "<formatting>" : field)
                << "'\n";
    }
  }
  if (replayed == 0) throw ConfigError("no episode record found in " + path);
  std::cout << replayed - mismatches << '/' << replayed << " episodes reproduced\n";
  return mismatches == 0 ? 0 : 1;
}

int cmd_gen_maze(int n, std::uint64_t seed, const std::string& out) {
  const MazeGrid maze = generate_maze(n, seed);
  if (out.empty() || out == "-") {
    write_maze(std::cout, maze);
  } else {
    write_file(out, maze_to_string(maze));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned coverage/convergence switching for maze navigation: simulator and benchmark harness"};
  app.set_config("--config", "", "Key-value config file; command-line flags override it");
  app.require_subcommand(1);

  SuiteFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run the experiment matrix and write records and reports");
  add_suite_flags(run, run_flags);
  run->add_option("--variants", run_flags.variants, "Subset of variants (default: all six)")->delimiter(',');
  run->add_flag("--long", run_flags.long_run, "Also run 128x128 mazes");

  SuiteFlags ablate_flags;
  ablate_flags.sizes = {64};
  std::string ablate_base = "spiral";
  CLI::App* ablate = app.add_subcommand("ablate", "Compare no/fixed/learned convergence");
  add_suite_flags(ablate, ablate_flags);
  ablate->add_option("--base", ablate_base, "spiral or sentinel")
      ->check(CLI::IsMember({"spiral", "sentinel"}))
      ->capture_default_str();
  ablate->add_flag("--long", ablate_flags.long_run, "Also run 128x128 mazes");

  std::string replay_path;
  int replay_line = 0;
  CLI::App* replay = app.add_subcommand("replay", "Re-execute logged episodes and diff against the log");
  replay->add_option("records", replay_path, "Episode record file (one JSON object per line)")->required();
  replay->add_option("--line", replay_line, "Only replay this 1-based line");

  int maze_n = 16;
  std::uint64_t maze_seed = 1;
  std::string maze_out;
  CLI::App* gen = app.add_subcommand("gen-maze", "Print a generated maze in the text format");
  gen->add_option("--size", maze_n, "Side length (even, >= 8)")->capture_default_str();
  gen->add_option("--seed", maze_seed, "Generation seed")->capture_default_str();
  gen->add_option("--out", maze_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags);
    if (*ablate) return cmd_ablate(ablate_flags, ablate_base);
    if (*replay) return cmd_replay(replay_path, replay_line);
    if (*gen) return cmd_gen_maze(maze_n, maze_seed, maze_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
