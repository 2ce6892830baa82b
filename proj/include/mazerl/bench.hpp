#pragma once
// Experiment matrix runner and report aggregation.
//
// Seed schedule: maze i of every size uses base_seed + i. Variants with
// learned switching draw their epsilon-greedy stream from
// (base_seed + i) ^ kRlSeedSalt, shared by the spiral and sentinel bases so
// the two remain comparable episode by episode.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "mazerl/episode.hpp"

namespace mazerl {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kRlSeedSalt = 0x9E3779B97F4A7C15ULL;

struct SuiteConfig {
  std::vector<int> sizes{16, 32, 64};
  int mazes_per_size = 10;
  std::vector<VariantSpec> variants = all_variants();
  std::uint64_t base_seed = 1;
  int jobs = 1;
  long step_limit = 0;  // 0 = 4 n^2
  int decision_period = kDefaultDecisionPeriod;

  void validate() const;
  /// Configuration of the episode for (size, maze index, variant).
  EpisodeConfig episode(int n, int maze_index, VariantSpec v) const;
};

struct CellStats {
  int n = 0;
  VariantSpec variant;
  int count = 0;
  double mean_steps = 0;
  double median_steps = 0;
  double min_steps = 0;
  double max_steps = 0;
  double stddev = 0;  // population
  double success_rate = 0;  // percent
  double mean_coverage = 0;
  /// Switch coverage per 10% decile (index 9 collects [90,100]).
  std::array<int, 10> switch_histogram{};
  /// Thresholds selected at rl decision points, per action.
  std::array<int, kActionCount> threshold_histogram{};
  double mean_wall_ms = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::string version = kVersion;
  std::vector<CellStats> rows;
};

struct SuiteResult {
  /// Ordered by (size, maze index, variant) as listed in the config.
  std::vector<EpisodeLog> records;
  std::vector<double> wall_ms;
  SuiteReport report;
};

SuiteResult run_suite(const SuiteConfig& cfg);

/// Deterministic reduce over ordered records. `wall_ms` may be empty.
SuiteReport aggregate(const SuiteConfig& cfg, const std::vector<EpisodeLog>& records,
                      const std::vector<double>& wall_ms = {});

struct AblationRow {
  ConvergenceMode mode = ConvergenceMode::none;
  std::string label;
  double mean_steps = 0;
  double median_steps = 0;
  double min_steps = 0;
  double max_steps = 0;
  /// (mean - mean_none) / mean_none * 100.
  double delta_pct = 0;
};

/// none / fixed / rl comparison for one size and base. Throws ConfigError if
/// the report lacks any of the three rows.
std::vector<AblationRow> ablation(const SuiteReport& report, int n, BaseKind base = BaseKind::spiral);
void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows);

inline constexpr const char* kReportCsvHeader =
    "size,variant,mean_steps,median_steps,min_steps,max_steps,stddev,success_rate";

void write_report_csv(std::ostream& out, const SuiteReport& report);
std::vector<CellStats> read_report_csv(std::istream& in);

nlohmann::json report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const nlohmann::json& j);

/// Writes <dir>/report.csv and <dir>/report.json. I/O failures throw
/// std::runtime_error naming the path.
void emit_report(const SuiteReport& report, const std::filesystem::path& dir);

/// One JSON object per line.
void write_records(std::ostream& out, const std::vector<EpisodeLog>& records);
std::vector<EpisodeLog> read_records(std::istream& in);

nlohmann::json suite_config_to_json(const SuiteConfig& cfg);

}  // namespace mazerl
