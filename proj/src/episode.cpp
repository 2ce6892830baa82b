#include "mazerl/episode.hpp"

#include <limits>

#include "mazerl/convergence_policy.hpp"

namespace mazerl {

std::string VariantSpec::name() const {
  std::string s = base == BaseKind::spiral ? "spiral" : "sentinel";
  switch (convergence) {
    case ConvergenceMode::none: break;
    case ConvergenceMode::fixed: s += "_conv"; break;
    case ConvergenceMode::rl: s += "_rl"; break;
  }
  return s;
}

VariantSpec VariantSpec::parse(std::string_view name) {
  for (const VariantSpec& v : all_variants()) {
    if (v.name() == name) return v;
  }
  throw ConfigError("unknown variant '" + std::string(name) + "'");
}

std::vector<VariantSpec> all_variants() {
  std::vector<VariantSpec> out;
  for (BaseKind b : {BaseKind::spiral, BaseKind::sentinel}) {
    for (ConvergenceMode c : {ConvergenceMode::none, ConvergenceMode::fixed, ConvergenceMode::rl}) {
      out.push_back({b, c});
    }
  }
  return out;
}

long default_step_limit(int n) { return 4L * n * n; }

void EpisodeConfig::validate() const {
  if (n < 8 || n % 2 != 0) throw ConfigError("episode: maze size must be even and >= 8");
  if (step_limit < 0) throw ConfigError("episode: step limit must be positive");
  if (decision_period <= 0) throw ConfigError("episode: decision period must be positive");
}

const char* outcome_name(Outcome o) {
  return o == Outcome::success ? "success" : "step_limit_exceeded";
}

EpisodeLog run_episode(const EpisodeConfig& cfg) {
  cfg.validate();
  return run_episode(cfg, generate_maze(cfg.n, cfg.maze_seed));
}

EpisodeLog run_episode(const EpisodeConfig& cfg, const MazeGrid& maze) {
  if (cfg.decision_period <= 0) throw ConfigError("episode: decision period must be positive");
  if (cfg.step_limit < 0) throw ConfigError("episode: step limit must be positive");
  const int n = maze.size();
  if (n != cfg.n) throw ConfigError("episode: maze size does not match the configuration");
  const long limit = cfg.effective_step_limit();
  const Position target = maze.target();
  const bool rl = cfg.variant.convergence == ConvergenceMode::rl;

  EpisodeLog log;
  log.config = cfg;

  KnowledgeMap knowledge(n);
  SpiralState spiral = spiral_start(cfg.variant.memory());
  spiral_begin(spiral, maze, knowledge);
  Position pos = spiral.pos;
  log.trajectory.push_back(pos);

  double threshold = std::numeric_limits<double>::infinity();
  if (cfg.variant.convergence == ConvergenceMode::fixed) threshold = kFixedThreshold;
  if (rl) threshold = kInitialRlThreshold;

  std::optional<QTable> q;
  if (rl) q.emplace(cfg.rl_seed);
  struct Pending {
    RLStateId state;
    ThresholdAction action;
  };
  std::optional<Pending> pending;
  ProgressSnapshot last_snapshot{0, 0.0};

  bool converging = false;
  std::optional<Plan> plan;
  long steps = 0;

  while (pos != target && steps < limit) {
    if (!converging) {
      const double coverage = coverage_percent(knowledge, n);
      if (rl && steps > 0 && steps % cfg.decision_period == 0) {
        const RLStateId s = discretize(coverage, manhattan(pos, target), n);
        const ProgressSnapshot now{steps, coverage};
        const double r = decision_reward(last_snapshot, now, limit, 0.0);
        if (pending) q_update(*q, pending->state, pending->action, r, s);
        const ThresholdAction a = select_action(*q, s);
        log.decisions.push_back({steps, s, a, r, pending.has_value()});
        threshold = a.percent();
        pending = Pending{s, a};
        last_snapshot = now;
      }
      if (coverage >= threshold) {
        converging = true;
        log.switch_event = SwitchEvent{steps, coverage};
        log.role_switches = 1;
      }
    }

    if (!converging) {
      const SpiralStep st = spiral_next(spiral, maze, knowledge);
      if (st.status == SpiralStatus::stuck) break;
      spiral = st.state;
      pos = st.next;
    } else {
      if (!plan || plan->current() != pos) {
        plan = astar_plan(pos, target, knowledge, n);
        if (!plan) break;
      }
      const FollowResult fr = follow_plan(*plan, maze, knowledge, spiral.history_stride());
      if (fr.outcome == FollowOutcome::replan_needed) {
        plan.reset();
        ++log.replans;
        continue;
      }
      pos = fr.pos;
    }
    ++steps;
    log.trajectory.push_back(pos);
  }

  log.outcome = pos == target ? Outcome::success : Outcome::step_limit_exceeded;
  log.total_steps = steps;
  log.final_coverage = coverage_percent(knowledge, n);
  log.history_length = knowledge.sampled_history().size();

  if (rl) {
    std::optional<double> c_switch;
    if (log.switch_event) c_switch = log.switch_event->coverage;
    log.terminal_reward = terminal_reward(steps, limit, log.final_coverage, c_switch);
    log.final_reward =
        decision_reward(last_snapshot, {steps, log.final_coverage}, limit, log.terminal_reward->r_switching);
    if (pending) q_update(*q, pending->state, pending->action, log.final_reward, std::nullopt);
    log.q_values = q->values();
  }
  return log;
}

EpisodeMetrics metrics(const EpisodeLog& log) {
  return {log.total_steps, log.final_coverage, log.role_switches, log.outcome};
}

double shaped_reward_sum(const EpisodeLog& log) {
  double sum = log.final_reward;
  for (const DecisionEvent& d : log.decisions) sum += d.reward;
  return sum;
}

nlohmann::json to_json(const EpisodeLog& log) {
  using nlohmann::json;
  const EpisodeConfig& c = log.config;
  json j;
  j["n"] = c.n;
  j["maze_seed"] = c.maze_seed;
  j["variant"] = c.variant.name();
  j["rl_seed"] = c.rl_seed;
  j["step_limit"] = c.effective_step_limit();
  j["decision_period"] = c.decision_period;
  j["outcome"] = outcome_name(log.outcome);
  j["total_steps"] = log.total_steps;
  j["final_coverage"] = log.final_coverage;
  j["role_switches"] = log.role_switches;
  j["replans"] = log.replans;
  j["history_length"] = log.history_length;
  j["switch"] = log.switch_event ? json{{"step", log.switch_event->step}, {"coverage", log.switch_event->coverage}}
                                 : json(nullptr);
  json decisions = json::array();
  for (const DecisionEvent& d : log.decisions) {
    decisions.push_back({{"step", d.step},
                         {"state", d.state.index()},
                         {"threshold", d.action.percent()},
                         {"reward", d.reward},
                         {"credited", d.credited}});
  }
  j["decisions"] = std::move(decisions);
  j["final_reward"] = log.final_reward;
  if (log.terminal_reward) {
    const RewardBreakdown& r = *log.terminal_reward;
    j["terminal_reward"] = {
        {"r_steps", r.r_steps}, {"r_coverage", r.r_coverage}, {"r_switching", r.r_switching}, {"total", r.total}};
  } else {
    j["terminal_reward"] = nullptr;
  }
  j["q_table"] = log.q_values ? json(*log.q_values) : json(nullptr);
  json traj = json::array();
  for (Position p : log.trajectory) traj.push_back({p.x, p.y});
  j["trajectory"] = std::move(traj);
  return j;
}

EpisodeLog episode_from_json(const nlohmann::json& j) {
  try {
    EpisodeLog log;
    EpisodeConfig& c = log.config;
    c.n = j.at("n").get<int>();
    c.maze_seed = j.at("maze_seed").get<std::uint64_t>();
    c.variant = VariantSpec::parse(j.at("variant").get<std::string>());
    c.rl_seed = j.at("rl_seed").get<std::uint64_t>();
    c.step_limit = j.at("step_limit").get<long>();
    c.decision_period = j.at("decision_period").get<int>();
    const std::string outcome = j.at("outcome").get<std::string>();
    if (outcome == "success") {
      log.outcome = Outcome::success;
    } else if (outcome == "step_limit_exceeded") {
      log.outcome = Outcome::step_limit_exceeded;
    } else {
      throw ConfigError("episode record: unknown outcome '" + outcome + "'");
    }
    log.total_steps = j.at("total_steps").get<long>();
    log.final_coverage = j.at("final_coverage").get<double>();
    log.role_switches = j.at("role_switches").get<int>();
    log.replans = j.at("replans").get<long>();
    log.history_length = j.at("history_length").get<std::size_t>();
    if (const auto& s = j.at("switch"); !s.is_null()) {
      log.switch_event = SwitchEvent{s.at("step").get<long>(), s.at("coverage").get<double>()};
    }
    for (const auto& d : j.at("decisions")) {
      log.decisions.push_back({d.at("step").get<long>(), RLStateId::from_index(d.at("state").get<int>()),
                               ThresholdAction::from_percent(d.at("threshold").get<int>()),
                               d.at("reward").get<double>(), d.at("credited").get<bool>()});
    }
    log.final_reward = j.at("final_reward").get<double>();
    if (const auto& r = j.at("terminal_reward"); !r.is_null()) {
      log.terminal_reward = RewardBreakdown{r.at("r_steps").get<double>(), r.at("r_coverage").get<double>(),
                                            r.at("r_switching").get<double>(), r.at("total").get<double>()};
    }
    if (const auto& qt = j.at("q_table"); !qt.is_null()) log.q_values = qt.get<QTable::Values>();
    for (const auto& p : j.at("trajectory")) log.trajectory.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
    return log;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("episode record: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("episode record: ") + e.what());
  }
}

std::string episode_record(const EpisodeLog& log) { return to_json(log).dump(); }

}  // namespace mazerl
