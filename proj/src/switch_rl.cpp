#include "mazerl/switch_rl.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mazerl/grid.hpp"

namespace mazerl {

RLStateId RLStateId::from_index(int i) {
  if (i < 0 || i >= kStateCount) throw ContractViolation("RLStateId: index out of range");
  return {i / kDistanceBuckets, i % kDistanceBuckets};
}

ThresholdAction ThresholdAction::from_percent(int percent) {
  for (int i = 0; i < kActionCount; ++i) {
    if (kThresholds[static_cast<std::size_t>(i)] == percent) return {i};
  }
  throw ContractViolation("ThresholdAction: " + std::to_string(percent) + "% is not a legal threshold");
}

RLStateId discretize(double coverage, int distance, int n) {
  if (n < 1) throw ContractViolation("discretize: n must be positive");
  if (!(coverage >= 0.0 && coverage <= 100.0)) throw ContractViolation("discretize: coverage outside [0,100]");
  const int d_max = 2 * n;
  if (distance < 0 || distance > d_max) throw ContractViolation("discretize: distance outside [0, 2n]");
  const int bc = std::min(static_cast<int>(std::floor(coverage / 10.0)), kCoverageBuckets - 1);
  // floor(d / d_max * 5) in exact integer arithmetic.
  const int bd = std::min(distance * kDistanceBuckets / d_max, kDistanceBuckets - 1);
  return {bc, bd};
}

QTable::QTable(std::uint64_t rng_seed, QParams params) : params_(params), seed_(rng_seed), rng_(rng_seed) {
  values_.fill(0.0);
}

void QTable::set_value(RLStateId s, ThresholdAction a, double v) {
  if (!std::isfinite(v)) throw ContractViolation("QTable: non-finite value");
  values_[slot(s.index(), a.index)] = v;
}

double QTable::max_value(RLStateId s) const {
  const auto first = values_.begin() + static_cast<std::ptrdiff_t>(slot(s.index(), 0));
  return *std::max_element(first, first + kActionCount);
}

bool QTable::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ThresholdAction greedy_action(const QTable& q, RLStateId s) {
  int best = 0;
  for (int a = 1; a < kActionCount; ++a) {
    if (q.value(s, {a}) > q.value(s, {best})) best = a;
  }
  return {best};
}

ThresholdAction select_action(QTable& q, RLStateId s) {
  const double u = uniform01(q.rng());
  if (u < q.params().epsilon) {
    return {static_cast<int>(uniform_below(q.rng(), kActionCount))};
  }
  return greedy_action(q, s);
}

void q_update(QTable& q, RLStateId s, ThresholdAction a, double reward, std::optional<RLStateId> next) {
  if (!std::isfinite(reward)) throw ContractViolation("q_update: non-finite reward");
  const double bootstrap = next ? q.max_value(*next) : 0.0;
  const double old = q.value(s, a);
  const QParams& p = q.params();
  q.set_value(s, a, old + p.alpha * (reward + p.gamma * bootstrap - old));
}

double switching_reward(double c) {
  if (c >= 30.0 && c <= 50.0) return 10.0;
  if (c < 20.0 || c > 60.0) return -5.0;
  return 0.0;
}

RewardBreakdown terminal_reward(long n_steps, long n_limit, double c_final, std::optional<double> c_switch) {
  if (n_limit <= 0) throw ContractViolation("terminal_reward: step limit must be positive");
  RewardBreakdown r;
  r.r_steps = 50.0 * (1.0 - static_cast<double>(n_steps) / static_cast<double>(n_limit));
  r.r_coverage = 30.0 * c_final / 100.0;
  r.r_switching = c_switch ? switching_reward(*c_switch) : 0.0;
  r.total = r.r_steps + r.r_coverage + r.r_switching;
  return r;
}

double progress_potential(ProgressSnapshot s, long n_limit) {
  return 50.0 * (1.0 - static_cast<double>(s.steps) / static_cast<double>(n_limit)) + 30.0 * s.coverage / 100.0 -
         kPotentialOffset;
}

double decision_reward(ProgressSnapshot prev, ProgressSnapshot cur, long n_limit, double switch_bonus) {
  if (n_limit <= 0) throw ContractViolation("decision_reward: step limit must be positive");
  return progress_potential(cur, n_limit) - progress_potential(prev, n_limit) + switch_bonus;
}

void write_qtable(std::ostream& out, const QTable::Values& values) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (int s = 0; s < kStateCount; ++s) {
    for (int a = 0; a < kActionCount; ++a) {
      if (a) os << ' ';
      os << values[static_cast<std::size_t>(s) * kActionCount + static_cast<std::size_t>(a)];
    }
    os << '\n';
  }
  out << os.str();
}

QTable::Values read_qtable(std::istream& in) {
  QTable::Values v{};
  for (int s = 0; s < kStateCount; ++s) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("q-table: expected 50 rows, got " + std::to_string(s));
    std::istringstream ls(line);
    for (int a = 0; a < kActionCount; ++a) {
      double x = 0;
      if (!(ls >> x)) throw ConfigError("q-table: row " + std::to_string(s) + " has fewer than 5 values");
      v[static_cast<std::size_t>(s) * kActionCount + static_cast<std::size_t>(a)] = x;
    }
    std::string extra;
    if (ls >> extra) throw ConfigError("q-table: row " + std::to_string(s) + " has more than 5 values");
  }
  return v;
}

}  // namespace mazerl
