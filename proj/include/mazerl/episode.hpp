#pragma once
// One agent run on one maze: coverage until the switch condition holds, then
// A* convergence with replanning, until the target or the step limit.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mazerl/coverage_policy.hpp"
#include "mazerl/grid.hpp"
#include "mazerl/switch_rl.hpp"

namespace mazerl {

enum class BaseKind : std::uint8_t { spiral, sentinel };
enum class ConvergenceMode : std::uint8_t { none, fixed, rl };

inline constexpr double kFixedThreshold = 40.0;
inline constexpr double kInitialRlThreshold = 40.0;
inline constexpr int kDefaultDecisionPeriod = 50;

struct VariantSpec {
  BaseKind base = BaseKind::spiral;
  ConvergenceMode convergence = ConvergenceMode::none;

  /// spiral, spiral_conv, spiral_rl, sentinel, sentinel_conv, sentinel_rl
  std::string name() const;
  static VariantSpec parse(std::string_view name);
  MemoryMode memory() const { return base == BaseKind::spiral ? MemoryMode::full_memory : MemoryMode::sentinel; }

  friend auto operator<=>(const VariantSpec&, const VariantSpec&) = default;
};

/// The six variants in canonical order.
std::vector<VariantSpec> all_variants();

/// Default step budget: 4 n^2.
long default_step_limit(int n);

struct EpisodeConfig {
  std::uint64_t maze_seed = 1;
  int n = 16;
  VariantSpec variant;
  std::uint64_t rl_seed = 0;
  long step_limit = 0;  // 0 = default_step_limit(n)
  int decision_period = kDefaultDecisionPeriod;

  long effective_step_limit() const { return step_limit > 0 ? step_limit : default_step_limit(n); }
  void validate() const;
  friend bool operator==(const EpisodeConfig&, const EpisodeConfig&) = default;
};

struct DecisionEvent {
  long step = 0;
  RLStateId state;
  ThresholdAction action;
  /// Shaped reward of the interval ending at this decision.
  double reward = 0;
  /// Whether that reward was used to update a previously chosen action.
  bool credited = false;
};

struct SwitchEvent {
  long step = 0;
  double coverage = 0;
};

enum class Outcome : std::uint8_t { success, step_limit_exceeded };

struct EpisodeLog {
  EpisodeConfig config;
  std::vector<Position> trajectory;
  std::vector<DecisionEvent> decisions;
  std::optional<SwitchEvent> switch_event;
  Outcome outcome = Outcome::step_limit_exceeded;
  long total_steps = 0;
  double final_coverage = 0;
  int role_switches = 0;
  long replans = 0;
  /// rl variants only.
  std::optional<RewardBreakdown> terminal_reward;
  /// Shaped reward of the interval after the last decision (rl only).
  double final_reward = 0;
  std::optional<QTable::Values> q_values;
  /// Sampled history length (differs between spiral and sentinel).
  std::size_t history_length = 0;
};

EpisodeLog run_episode(const EpisodeConfig& cfg);
/// Same, on a maze the caller already generated for (cfg.n, cfg.maze_seed).
EpisodeLog run_episode(const EpisodeConfig& cfg, const MazeGrid& maze);

struct EpisodeMetrics {
  long steps = 0;
  double coverage = 0;
  int switches = 0;
  Outcome outcome = Outcome::step_limit_exceeded;
};

EpisodeMetrics metrics(const EpisodeLog& log);

/// Sum of every shaped interval reward logged in the episode.
double shaped_reward_sum(const EpisodeLog& log);

const char* outcome_name(Outcome o);

nlohmann::json to_json(const EpisodeLog& log);
EpisodeLog episode_from_json(const nlohmann::json& j);
/// One compact JSON object, no trailing newline.
std::string episode_record(const EpisodeLog& log);

}  // namespace mazerl
