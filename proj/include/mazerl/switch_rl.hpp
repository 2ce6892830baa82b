#pragma once
// Meta-policy that picks the coverage threshold at which the agent stops
// exploring and starts converging on the target.
//
// State: (coverage bucket 0..9, distance bucket 0..4) = 50 states.
// Actions: switch thresholds {20, 30, 40, 50, 60} percent.
// Learning: one-step tabular Q-learning, alpha 0.1, gamma 0.9, epsilon-greedy
// with epsilon 0.1, fresh table per episode.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>

#include "mazerl/rng.hpp"

namespace mazerl {

inline constexpr int kCoverageBuckets = 10;
inline constexpr int kDistanceBuckets = 5;
inline constexpr int kStateCount = kCoverageBuckets * kDistanceBuckets;
inline constexpr int kActionCount = 5;
inline constexpr std::array<int, kActionCount> kThresholds{20, 30, 40, 50, 60};

struct RLStateId {
  int coverage_bucket = 0;
  int distance_bucket = 0;

  int index() const { return coverage_bucket * kDistanceBuckets + distance_bucket; }
  static RLStateId from_index(int i);
  friend bool operator==(const RLStateId&, const RLStateId&) = default;
};

struct ThresholdAction {
  int index = 0;

  int percent() const { return kThresholds[static_cast<std::size_t>(index)]; }
  static ThresholdAction from_percent(int percent);
  friend bool operator==(const ThresholdAction&, const ThresholdAction&) = default;
};

/// c in [0,100] percent, d in [0, 2n]. Out-of-range input throws ContractViolation.
RLStateId discretize(double coverage, int distance, int n);

struct QParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double epsilon = 0.1;
};

class QTable {
 public:
  using Values = std::array<double, static_cast<std::size_t>(kStateCount) * kActionCount>;

  explicit QTable(std::uint64_t rng_seed, QParams params = {});

  double value(RLStateId s, ThresholdAction a) const { return values_[slot(s.index(), a.index)]; }
  void set_value(RLStateId s, ThresholdAction a, double v);
  double max_value(RLStateId s) const;
  const Values& values() const { return values_; }

  const QParams& params() const { return params_; }
  void set_epsilon(double epsilon) { params_.epsilon = epsilon; }
  std::uint64_t rng_seed() const { return seed_; }
  Rng& rng() { return rng_; }

  bool all_finite() const;

 private:
  static std::size_t slot(int state, int action) {
    return static_cast<std::size_t>(state) * kActionCount + static_cast<std::size_t>(action);
  }

  Values values_{};
  QParams params_;
  std::uint64_t seed_;
  Rng rng_;
};

/// Greedy action at s; ties go to the lowest threshold.
ThresholdAction greedy_action(const QTable& q, RLStateId s);

/// Epsilon-greedy. Always draws one uniform from the table's stream, plus one
/// more for the random action when exploring.
ThresholdAction select_action(QTable& q, RLStateId s);

/// One Q-learning update on (s, a). `next` = nullopt marks a terminal update
/// (bootstrap term 0). Non-finite rewards throw ContractViolation.
void q_update(QTable& q, RLStateId s, ThresholdAction a, double reward, std::optional<RLStateId> next);

struct RewardBreakdown {
  double r_steps = 0;
  double r_coverage = 0;
  double r_switching = 0;
  double total = 0;
};

/// +10 on [30,50], -5 below 20 or above 60, 0 elsewhere.
double switching_reward(double switch_coverage);

RewardBreakdown terminal_reward(long n_steps, long n_limit, double c_final, std::optional<double> c_switch);

/// Progress at some point of an episode.
struct ProgressSnapshot {
  long steps = 0;
  double coverage = 0;
};

/// Potential 50(1 - steps/limit) + 30 c/100 - 50, zero at the empty snapshot.
double progress_potential(ProgressSnapshot s, long n_limit);

/// Shaped per-interval reward: potential difference plus the switching bonus
/// for the interval in which the switch happened (0 otherwise). Summed over an
/// episode these give terminal_reward(...).total - kPotentialOffset.
double decision_reward(ProgressSnapshot prev, ProgressSnapshot cur, long n_limit, double switch_bonus);

inline constexpr double kPotentialOffset = 50.0;

/// 50 lines of 5 space-separated values; line = state id, column = action.
void write_qtable(std::ostream& out, const QTable::Values& values);
QTable::Values read_qtable(std::istream& in);

}  // namespace mazerl
