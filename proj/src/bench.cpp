#include "mazerl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace mazerl {

void SuiteConfig::validate() const {
  if (sizes.empty()) throw ConfigError("suite: no maze sizes given");
  for (int n : sizes) {
    if (n < 8 || n % 2 != 0) throw ConfigError("suite: maze size " + std::to_string(n) + " must be even and >= 8");
  }
  if (mazes_per_size < 1) throw ConfigError("suite: mazes per size must be at least 1");
  if (variants.empty()) throw ConfigError("suite: no variants given");
  if (jobs < 1) throw ConfigError("suite: jobs must be at least 1");
  if (step_limit < 0) throw ConfigError("suite: step limit must be positive");
  if (decision_period < 1) throw ConfigError("suite: decision period must be positive");
}

EpisodeConfig SuiteConfig::episode(int n, int maze_index, VariantSpec v) const {
  EpisodeConfig c;
  c.n = n;
  c.maze_seed = base_seed + static_cast<std::uint64_t>(maze_index);
  c.variant = v;
  c.rl_seed = v.convergence == ConvergenceMode::rl ? (c.maze_seed ^ kRlSeedSalt) : 0;
  c.step_limit = step_limit > 0 ? step_limit : default_step_limit(n);
  c.decision_period = decision_period;
  return c;
}

SuiteResult run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  struct Task {
    int n;
    int maze_index;
    std::size_t first_slot;
  };
  std::vector<Task> tasks;
  std::size_t slots = 0;
  for (int n : cfg.sizes) {
    for (int i = 0; i < cfg.mazes_per_size; ++i) {
      tasks.push_back({n, i, slots});
      slots += cfg.variants.size();
    }
  }

  SuiteResult result;
  result.records.resize(slots);
  result.wall_ms.resize(slots);
  std::atomic<std::size_t> next{0};
  // One task = one maze, shared by all variants on that maze.
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const Task& task = tasks[t];
      const MazeGrid maze = generate_maze(task.n, cfg.base_seed + static_cast<std::uint64_t>(task.maze_index));
      for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
        const auto t0 = std::chrono::steady_clock::now();
        result.records[task.first_slot + v] = run_episode(cfg.episode(task.n, task.maze_index, cfg.variants[v]), maze);
        const auto t1 = std::chrono::steady_clock::now();
        result.wall_ms[task.first_slot + v] = std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
    }
  };
  const int workers = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  result.report = aggregate(cfg, result.records, result.wall_ms);
  return result;
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

SuiteReport aggregate(const SuiteConfig& cfg, const std::vector<EpisodeLog>& records,
                      const std::vector<double>& wall_ms) {
  SuiteReport report;
  report.config = cfg;
  for (int n : cfg.sizes) {
    for (VariantSpec v : cfg.variants) {
      CellStats c;
      c.n = n;
      c.variant = v;
      std::vector<double> steps;
      double coverage_sum = 0;
      double wall_sum = 0;
      int successes = 0;
      for (std::size_t i = 0; i < records.size(); ++i) {
        const EpisodeLog& r = records[i];
        if (r.config.n != n || r.config.variant != v) continue;
        steps.push_back(static_cast<double>(r.total_steps));
        coverage_sum += r.final_coverage;
        if (i < wall_ms.size()) wall_sum += wall_ms[i];
        if (r.outcome == Outcome::success) ++successes;
        if (r.switch_event) {
          const int bin = std::clamp(static_cast<int>(std::floor(r.switch_event->coverage / 10.0)), 0, 9);
          ++c.switch_histogram[static_cast<std::size_t>(bin)];
        }
        for (const DecisionEvent& d : r.decisions) ++c.threshold_histogram[static_cast<std::size_t>(d.action.index)];
      }
      c.count = static_cast<int>(steps.size());
      if (!steps.empty()) {
        double sum = 0;
        for (double s : steps) sum += s;
        c.mean_steps = sum / static_cast<double>(steps.size());
        double sq = 0;
        for (double s : steps) sq += (s - c.mean_steps) * (s - c.mean_steps);
        c.stddev = std::sqrt(sq / static_cast<double>(steps.size()));
        c.min_steps = *std::min_element(steps.begin(), steps.end());
        c.max_steps = *std::max_element(steps.begin(), steps.end());
        c.median_steps = median_of(steps);
        c.success_rate = 100.0 * successes / static_cast<double>(steps.size());
        c.mean_coverage = coverage_sum / static_cast<double>(steps.size());
        c.mean_wall_ms = wall_sum / static_cast<double>(steps.size());
      }
      report.rows.push_back(c);
    }
  }
  return report;
}

std::vector<AblationRow> ablation(const SuiteReport& report, int n, BaseKind base) {
  std::vector<AblationRow> rows;
  const std::array<std::pair<ConvergenceMode, const char*>, 3> modes{{
      {ConvergenceMode::none, "no_convergence"},
      {ConvergenceMode::fixed, "fixed_40"},
      {ConvergenceMode::rl, "rl_threshold"},
  }};
  for (auto [mode, label] : modes) {
    const VariantSpec want{base, mode};
    auto it = std::find_if(report.rows.begin(), report.rows.end(),
                           [&](const CellStats& c) { return c.n == n && c.variant == want; });
    if (it == report.rows.end()) {
      throw ConfigError("ablation: report has no " + want.name() + " row for size " + std::to_string(n));
    }
    rows.push_back({mode, label, it->mean_steps, it->median_steps, it->min_steps, it->max_steps, 0.0});
  }
  const double baseline = rows.front().mean_steps;
  for (AblationRow& r : rows) r.delta_pct = baseline > 0 ? (r.mean_steps - baseline) / baseline * 100.0 : 0.0;
  return rows;
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "configuration,mean_steps,median_steps,min_steps,max_steps,delta_pct\n";
  os << std::setprecision(10);
  for (const AblationRow& r : rows) {
    os << r.label << ',' << r.mean_steps << ',' << r.median_steps << ',' << r.min_steps << ',' << r.max_steps << ','
       << std::fixed << std::setprecision(1) << r.delta_pct << std::defaultfloat << std::setprecision(10) << '\n';
  }
  out << os.str();
}

void write_report_csv(std::ostream& out, const SuiteReport& report) {
  std::ostringstream os;
  os << kReportCsvHeader << '\n' << std::setprecision(17);
  for (const CellStats& c : report.rows) {
    os << c.n << ',' << c.variant.name() << ',' << c.mean_steps << ',' << c.median_steps << ',' << c.min_steps << ','
       << c.max_steps << ',' << c.stddev << ',' << c.success_rate << '\n';
  }
  out << os.str();
}

std::vector<CellStats> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader) throw ConfigError("report csv: missing or unexpected header");
  std::vector<CellStats> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    if (fields.size() != 8) throw ConfigError("report csv: expected 8 fields in '" + line + "'");
    CellStats c;
    try {
      c.n = std::stoi(fields[0]);
      c.variant = VariantSpec::parse(fields[1]);
      c.mean_steps = std::stod(fields[2]);
      c.median_steps = std::stod(fields[3]);
      c.min_steps = std::stod(fields[4]);
      c.max_steps = std::stod(fields[5]);
      c.stddev = std::stod(fields[6]);
      c.success_rate = std::stod(fields[7]);
    } catch (const std::logic_error&) {
      throw ConfigError("report csv: malformed number in '" + line + "'");
    }
    rows.push_back(c);
  }
  return rows;
}

nlohmann::json suite_config_to_json(const SuiteConfig& cfg) {
  nlohmann::json variants = nlohmann::json::array();
  for (VariantSpec v : cfg.variants) variants.push_back(v.name());
  return {{"sizes", cfg.sizes},
          {"mazes_per_size", cfg.mazes_per_size},
          {"variants", variants},
          {"base_seed", cfg.base_seed},
          {"jobs", cfg.jobs},
          {"step_limit", cfg.step_limit},
          {"decision_period", cfg.decision_period}};
}

nlohmann::json report_to_json(const SuiteReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CellStats& c : report.rows) {
    rows.push_back({{"size", c.n},
                    {"variant", c.variant.name()},
                    {"count", c.count},
                    {"mean_steps", c.mean_steps},
                    {"median_steps", c.median_steps},
                    {"min_steps", c.min_steps},
                    {"max_steps", c.max_steps},
                    {"stddev", c.stddev},
                    {"success_rate", c.success_rate},
                    {"mean_coverage", c.mean_coverage},
                    {"switch_histogram", c.switch_histogram},
                    {"threshold_histogram", c.threshold_histogram},
                    {"mean_wall_ms", c.mean_wall_ms}});
  }
  return {{"version", report.version}, {"config", suite_config_to_json(report.config)}, {"rows", rows}};
}

SuiteReport report_from_json(const nlohmann::json& j) {
  try {
    SuiteReport r;
    r.version = j.at("version").get<std::string>();
    const auto& c = j.at("config");
    r.config.sizes = c.at("sizes").get<std::vector<int>>();
    r.config.mazes_per_size = c.at("mazes_per_size").get<int>();
    r.config.variants.clear();
    for (const auto& v : c.at("variants")) r.config.variants.push_back(VariantSpec::parse(v.get<std::string>()));
    r.config.base_seed = c.at("base_seed").get<std::uint64_t>();
    r.config.jobs = c.at("jobs").get<int>();
    r.config.step_limit = c.at("step_limit").get<long>();
    r.config.decision_period = c.at("decision_period").get<int>();
    for (const auto& row : j.at("rows")) {
      CellStats s;
      s.n = row.at("size").get<int>();
      s.variant = VariantSpec::parse(row.at("variant").get<std::string>());
      s.count = row.at("count").get<int>();
      s.mean_steps = row.at("mean_steps").get<double>();
      s.median_steps = row.at("median_steps").get<double>();
      s.min_steps = row.at("min_steps").get<double>();
      s.max_steps = row.at("max_steps").get<double>();
      s.stddev = row.at("stddev").get<double>();
      s.success_rate = row.at("success_rate").get<double>();
      s.mean_coverage = row.at("mean_coverage").get<double>();
      s.switch_histogram = row.at("switch_histogram").get<std::array<int, 10>>();
      s.threshold_histogram = row.at("threshold_histogram").get<std::array<int, kActionCount>>();
      s.mean_wall_ms = row.at("mean_wall_ms").get<double>();
      r.rows.push_back(s);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report json: ") + e.what());
  }
}

void emit_report(const SuiteReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto write = [](const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << body;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + path.string());
  };
  std::ostringstream csv;
  write_report_csv(csv, report);
  write(dir / "report.csv", csv.str());
  write(dir / "report.json", report_to_json(report).dump(2) + "\n");
}

void write_records(std::ostream& out, const std::vector<EpisodeLog>& records) {
  for (const EpisodeLog& r : records) out << episode_record(r) << '\n';
}

std::vector<EpisodeLog> read_records(std::istream& in) {
  std::vector<EpisodeLog> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("episode records line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(episode_from_json(j));
  }
  return out;
}

}  // namespace mazerl
