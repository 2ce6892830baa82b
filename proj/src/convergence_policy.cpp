#include "mazerl/convergence_policy.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace mazerl {

namespace {

struct OpenEntry {
  int f;
  int h;
  std::uint64_t seq;
  std::size_t cell;

  // Min-heap ordering for std::priority_queue.
  bool operator>(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (h != o.h) return h > o.h;
    return seq > o.seq;
  }
};

}  // namespace

std::optional<Plan> astar_plan(Position start, Position target, const KnowledgeMap& knowledge, int n) {
  auto in_bounds = [n](Position p) { return p.x >= 0 && p.y >= 0 && p.x < n && p.y < n; };
  if (!in_bounds(start) || !in_bounds(target)) throw ContractViolation("astar_plan: endpoint outside the maze");
  if (knowledge.known_wall(start)) throw ContractViolation("astar_plan: start is a known wall");
  if (knowledge.known_wall(target)) return std::nullopt;

  const std::size_t cells = static_cast<std::size_t>(n) * n;
  auto idx = [n](Position p) { return static_cast<std::size_t>(p.x) * n + p.y; };
  auto pos_of = [n](std::size_t i) { return Position{static_cast<int>(i / n), static_cast<int>(i % n)}; };

  constexpr int kUnseen = std::numeric_limits<int>::max();
  std::vector<int> g(cells, kUnseen);
  std::vector<std::size_t> parent(cells, cells);
  std::vector<std::uint8_t> closed(cells, 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  std::uint64_t seq = 0;

  g[idx(start)] = 0;
  const int h0 = manhattan(start, target);
  open.push({h0, h0, seq++, idx(start)});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.cell]) continue;
    closed[top.cell] = 1;
    const Position cur = pos_of(top.cell);
    if (cur == target) {
      Plan plan;
      plan.cost = g[top.cell];
      plan.planned_over = knowledge.wall_version();
      for (std::size_t i = top.cell; i != cells; i = parent[i]) plan.waypoints.push_back(pos_of(i));
      std::reverse(plan.waypoints.begin(), plan.waypoints.end());
      return plan;
    }
    for (Heading hd : kHeadings) {
      const Position nb = step(cur, hd);
      if (!in_bounds(nb) || knowledge.known_wall(nb)) continue;
      const std::size_t ni = idx(nb);
      if (closed[ni]) continue;
      const int tentative = g[top.cell] + 1;
      if (tentative >= g[ni]) continue;
      g[ni] = tentative;
      parent[ni] = top.cell;
      const int h = manhattan(nb, target);
      open.push({tentative + h, h, seq++, ni});
    }
  }
  return std::nullopt;
}

FollowResult follow_plan(Plan& plan, const MazeGrid& maze, KnowledgeMap& knowledge, int history_stride) {
  const Position here = plan.current();
  if (plan.finished()) return {here, FollowOutcome::arrived};
  const Position next = plan.waypoints[plan.cursor + 1];
  const ProbeResult r = maze.probe(here, next);
  if (r != ProbeResult::passable) {
    knowledge.mark(next, r);
    return {here, FollowOutcome::replan_needed};
  }
  ++plan.cursor;
  arrive(maze, knowledge, next, history_stride);
  return {next, plan.finished() ? FollowOutcome::arrived : FollowOutcome::advanced};
}

}  // namespace mazerl
