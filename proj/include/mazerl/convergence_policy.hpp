#pragma once
// Goal-directed navigation: A* over the agent's partial knowledge with the
// freespace assumption (cells not known to be walls are traversable), and a
// follow loop that replans when a planned cell turns out to be blocked.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mazerl/grid.hpp"

namespace mazerl {

struct Plan {
  /// Current cell first, target last.
  std::vector<Position> waypoints;
  int cost = 0;
  /// KnowledgeMap::wall_version() when the plan was made.
  std::uint64_t planned_over = 0;
  /// Index of the waypoint the agent currently occupies.
  std::size_t cursor = 0;

  Position current() const { return waypoints[cursor]; }
  bool finished() const { return cursor + 1 >= waypoints.size(); }
};

/// Shortest path from start to target on the optimistic planning graph.
/// Ties on f go to lower h, then to earlier insertion (neighbors pushed in
/// E, S, W, N order). Returns nullopt when no path exists.
std::optional<Plan> astar_plan(Position start, Position target, const KnowledgeMap& knowledge, int n);

enum class FollowOutcome : std::uint8_t { advanced, replan_needed, arrived };

struct FollowResult {
  Position pos;
  FollowOutcome outcome;
};

/// Attempts the next waypoint. A passable cell is entered (sensed and
/// recorded with `history_stride`); a blocked one is recorded as a wall and
/// the agent stays put.
FollowResult follow_plan(Plan& plan, const MazeGrid& maze, KnowledgeMap& knowledge, int history_stride);

}  // namespace mazerl
