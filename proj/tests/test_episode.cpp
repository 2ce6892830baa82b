#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "mazerl/episode.hpp"
#include "oracles.hpp"

using namespace mazerl;

namespace {

EpisodeConfig config(int n, std::uint64_t seed, const char* variant, std::uint64_t rl_seed = 42) {
  EpisodeConfig c;
  c.n = n;
  c.maze_seed = seed;
  c.variant = VariantSpec::parse(variant);
  c.rl_seed = rl_seed;
  return c;
}

// Coverage after each trajectory prefix, recomputed from positions alone.
std::vector<double> coverage_curve(const EpisodeLog& log) {
  std::set<Position> seen;
  std::vector<double> out;
  const double total = static_cast<double>(log.config.n) * log.config.n;
  for (Position p : log.trajectory) {
    seen.insert(p);
    out.push_back(static_cast<double>(seen.size()) / total * 100.0);
  }
  return out;
}

void check_log_invariants(const EpisodeLog& log) {
  const MazeGrid m = generate_maze(log.config.n, log.config.maze_seed);
  CHECK(log.trajectory.size() == static_cast<std::size_t>(log.total_steps) + 1);
  CHECK(log.trajectory.front() == m.start());
  for (std::size_t i = 1; i < log.trajectory.size(); ++i) {
    CHECK(manhattan(log.trajectory[i - 1], log.trajectory[i]) == 1);
    CHECK_FALSE(m.is_wall(log.trajectory[i]));
  }
  CHECK((log.role_switches == 0 || log.role_switches == 1));
  CHECK(log.switch_event.has_value() == (log.role_switches == 1));
  const auto curve = coverage_curve(log);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] >= curve[i - 1]);
  CHECK(curve.back() == log.final_coverage);
  if (log.outcome == Outcome::success) {
    CHECK(log.trajectory.back() == m.target());
  } else {
    CHECK(log.total_steps == log.config.effective_step_limit());
  }
  // The target ends the run: it appears only as the final position.
  for (std::size_t i = 0; i + 1 < log.trajectory.size(); ++i) CHECK(log.trajectory[i] != m.target());
}

}  // namespace

TEST_CASE("variant names") {
  const auto all = all_variants();
  REQUIRE(all.size() == 6);
  std::set<std::string> names;
  for (const VariantSpec& v : all) {
    names.insert(v.name());
    CHECK(VariantSpec::parse(v.name()) == v);
  }
  CHECK(names == std::set<std::string>{"spiral", "spiral_conv", "spiral_rl", "sentinel", "sentinel_conv",
                                       "sentinel_rl"});
  CHECK_THROWS_AS(VariantSpec::parse("greedy"), ConfigError);
  CHECK(default_step_limit(16) == 1024);
}

TEST_CASE("16x16 seed 1, pure spiral") {
  const EpisodeLog log = run_episode(config(16, 1, "spiral"));
  CHECK(log.outcome == Outcome::success);
  CHECK(log.role_switches == 0);
  CHECK_FALSE(log.switch_event.has_value());
  // Golden values, cross-checked by an independent re-implementation.
  CHECK(log.total_steps == 298);
  CHECK(log.final_coverage == 46.09375);
  CHECK(log.trajectory == oracle::read_trajectory(oracle::golden_path("spiral_16_1.txt")));
  CHECK_FALSE(log.terminal_reward.has_value());
  check_log_invariants(log);
}

TEST_CASE("16x16 seed 1, fixed 40% switch") {
  const EpisodeLog log = run_episode(config(16, 1, "spiral_conv"));
  REQUIRE(log.switch_event.has_value());
  CHECK(log.role_switches == 1);
  CHECK(log.outcome == Outcome::success);
  const auto curve = coverage_curve(log);
  long first = -1;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i] >= 40.0) {
      first = static_cast<long>(i);
      break;
    }
  }
  CHECK(log.switch_event->step == first);
  CHECK(log.switch_event->coverage >= 40.0);
  CHECK(log.switch_event->coverage == curve[static_cast<std::size_t>(first)]);
  // Up to the switch the run is the pure spiral.
  const EpisodeLog pure = run_episode(config(16, 1, "spiral"));
  for (long i = 0; i <= first; ++i) {
    CHECK(log.trajectory[static_cast<std::size_t>(i)] == pure.trajectory[static_cast<std::size_t>(i)]);
  }
  CHECK(log.total_steps < pure.total_steps);
  CHECK(log.total_steps <= log.config.effective_step_limit());
  check_log_invariants(log);
}

TEST_CASE("runs are byte-identical for the same config") {
  for (const char* v : {"spiral", "spiral_conv", "spiral_rl", "sentinel_rl"}) {
    const EpisodeConfig c = config(32, 3, v);
    CHECK(episode_record(run_episode(c)) == episode_record(run_episode(c)));
  }
}

TEST_CASE("fixed variants consume no rl randomness") {
  const EpisodeLog a = run_episode(config(32, 4, "spiral_conv", 1));
  const EpisodeLog b = run_episode(config(32, 4, "spiral_conv", 999));
  CHECK(a.trajectory == b.trajectory);
  CHECK(a.total_steps == b.total_steps);
}

TEST_CASE("metrics projection") {
  EpisodeConfig c = config(32, 2, "spiral");
  c.step_limit = 10;
  const EpisodeLog failed = run_episode(c);
  const EpisodeMetrics m = metrics(failed);
  CHECK(m.outcome == Outcome::step_limit_exceeded);
  CHECK(m.steps == 10);
  CHECK(m.switches == 0);
  check_log_invariants(failed);

  const EpisodeLog ok = run_episode(config(16, 1, "spiral_conv"));
  CHECK(metrics(ok).switches == 1);
  CHECK(metrics(ok).outcome == Outcome::success);
  CHECK(metrics(ok).coverage == ok.final_coverage);
}

TEST_CASE("learned switching: cadence, causality and reward bookkeeping") {
  for (int n : {16, 32}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const EpisodeLog log = run_episode(config(n, seed, "spiral_rl", seed * 31));
      CAPTURE(n);
      CAPTURE(seed);
      check_log_invariants(log);
      REQUIRE(log.terminal_reward.has_value());
      REQUIRE(log.q_values.has_value());
      for (std::size_t i = 0; i < log.decisions.size(); ++i) {
        CHECK(log.decisions[i].step == static_cast<long>(i + 1) * log.config.decision_period);
        CHECK(log.decisions[i].credited == (i > 0));
      }
      if (log.switch_event) {
        const double active =
            log.decisions.empty() ? kInitialRlThreshold : log.decisions.back().action.percent();
        CHECK(log.switch_event->coverage >= active);
        if (!log.decisions.empty()) CHECK(log.switch_event->step >= log.decisions.back().step);
      }
      CHECK(std::abs(shaped_reward_sum(log) + kPotentialOffset - log.terminal_reward->total) <= 1e-9);
      for (double v : *log.q_values) CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("spiral and sentinel runs coincide except for stored history") {
  for (const char* mode : {"", "_conv", "_rl"}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const EpisodeLog a = run_episode(config(32, seed, (std::string("spiral") + mode).c_str()));
      const EpisodeLog b = run_episode(config(32, seed, (std::string("sentinel") + mode).c_str()));
      CHECK(a.trajectory == b.trajectory);
      CHECK(a.total_steps == b.total_steps);
      CHECK(a.decisions.size() == b.decisions.size());
      CHECK(b.history_length == (a.history_length + kSentinelStride - 1) / kSentinelStride);
    }
  }
}

TEST_CASE("episode records round-trip through JSON") {
  for (const char* v : {"spiral", "sentinel_conv", "spiral_rl"}) {
    const EpisodeLog log = run_episode(config(16, 6, v));
    const std::string rec = episode_record(log);
    CHECK(rec.find('\n') == std::string::npos);
    const EpisodeLog back = episode_from_json(nlohmann::json::parse(rec));
    CHECK(episode_record(back) == rec);
    EpisodeConfig resolved = log.config;
    resolved.step_limit = log.config.effective_step_limit();
    CHECK(back.config == resolved);
    CHECK(back.trajectory == log.trajectory);
  }
  CHECK_THROWS_AS(episode_from_json(nlohmann::json::parse("{\"n\": 16}")), ConfigError);
}

TEST_CASE("invalid configurations are rejected") {
  EpisodeConfig c = config(15, 1, "spiral");
  CHECK_THROWS_AS(run_episode(c), ConfigError);
  c = config(16, 1, "spiral");
  c.decision_period = 0;
  CHECK_THROWS_AS(run_episode(c), ConfigError);
  c = config(16, 1, "spiral");
  CHECK_THROWS_AS(run_episode(c, generate_maze(32, 1)), ConfigError);
}
