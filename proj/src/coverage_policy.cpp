#include "mazerl/coverage_policy.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace mazerl {

int spiral_ring(Position p, int n) {
  return std::min({p.x, p.y, n - 1 - p.x, n - 1 - p.y});
}

namespace {

// Cells in rings 0..r-1.
std::size_t cells_before_ring(int r, int n) {
  return 4 * static_cast<std::size_t>(r) * static_cast<std::size_t>(n - r);
}

}  // namespace

std::size_t spiral_rank(Position p, int n) {
  const int r = spiral_ring(p, n);
  const int m = n - 2 * r;
  const int lo = r;
  const int hi = n - 1 - r;
  std::size_t local = 0;
  if (m == 1) {
    local = 0;
  } else if (p.x == lo) {
    local = static_cast<std::size_t>(p.y - lo);
  } else if (p.y == hi) {
    local = static_cast<std::size_t>((m - 1) + (p.x - lo));
  } else if (p.x == hi) {
    local = static_cast<std::size_t>(2 * (m - 1) + (hi - p.y));
  } else {
    local = static_cast<std::size_t>(3 * (m - 1) + (hi - p.x));
  }
  return cells_before_ring(r, n) + local;
}

Position spiral_cell(std::size_t rank, int n) {
  if (rank >= static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw ContractViolation("spiral_cell: rank outside the grid");
  }
  int r = 0;
  while (2 * (r + 1) < n && cells_before_ring(r + 1, n) <= rank) ++r;
  const int m = n - 2 * r;
  const int lo = r;
  const int hi = n - 1 - r;
  if (m == 1) return {lo, lo};
  const int local = static_cast<int>(rank - cells_before_ring(r, n));
  const int side = m - 1;
  if (local < side) return {lo, lo + local};
  if (local < 2 * side) return {lo + (local - side), hi};
  if (local < 3 * side) return {hi, hi - (local - 2 * side)};
  return {hi - (local - 3 * side), lo};
}

SpiralState spiral_start(MemoryMode mode, int sample_stride) {
  if (sample_stride < 1) throw ConfigError("sentinel sample stride must be positive");
  SpiralState s;
  s.mode = mode;
  s.sample_stride = mode == MemoryMode::sentinel ? sample_stride : 1;
  return s;
}

bool record_visit(const SpiralState& state, KnowledgeMap& knowledge, Position pos) {
  return knowledge.record_visit(pos, state.history_stride());
}

void spiral_begin(const SpiralState& state, const MazeGrid& maze, KnowledgeMap& knowledge) {
  sense(maze, knowledge, state.pos);
  record_visit(state, knowledge, state.pos);
}

namespace {

bool in_bounds(Position p, int n) { return p.x >= 0 && p.y >= 0 && p.x < n && p.y < n; }

// Route over known-free cells to the reachable frontier cell (known free,
// unvisited) of lowest spiral rank. The route is a shortest one, neighbors
// expanded E, S, W, N. Excludes `from`; empty when no frontier remains.
std::vector<Position> route_to_frontier(Position from, const KnowledgeMap& k) {
  const int n = k.size();
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  auto idx = [n](Position p) { return static_cast<std::size_t>(p.x) * n + p.y; };
  std::vector<int> dist(cells, -1);
  std::vector<Position> parent(cells);
  std::deque<Position> queue{from};
  dist[idx(from)] = 0;

  std::size_t best_rank = std::numeric_limits<std::size_t>::max();
  Position best{-1, -1};

  while (!queue.empty()) {
    const Position cur = queue.front();
    queue.pop_front();
    const int d = dist[idx(cur)];
    if (d > 0 && !k.visited(cur)) {
      const std::size_t rank = spiral_rank(cur, n);
      if (rank < best_rank) {
        best_rank = rank;
        best = cur;
      }
      continue;
    }
    for (Heading h : kHeadings) {
      const Position nb = step(cur, h);
      if (!in_bounds(nb, n) || !k.known_free(nb) || dist[idx(nb)] >= 0) continue;
      dist[idx(nb)] = d + 1;
      parent[idx(nb)] = cur;
      queue.push_back(nb);
    }
  }
  if (best.x < 0) return {};
  std::vector<Position> path;
  for (Position p = best; p != from; p = parent[idx(p)]) path.push_back(p);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

SpiralStep spiral_next(const SpiralState& state, const MazeGrid& maze, KnowledgeMap& knowledge) {
  const int n = maze.size();
  SpiralStep out{SpiralStatus::moved, state.pos, state};
  SpiralState& s = out.state;

  Position next{-1, -1};
  if (s.route.empty()) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    for (Heading h : kHeadings) {
      const Position nb = step(s.pos, h);
      if (!in_bounds(nb, n) || !knowledge.known_free(nb) || knowledge.visited(nb)) continue;
      const std::size_t rank = spiral_rank(nb, n);
      if (rank < best_rank) {
        best_rank = rank;
        next = nb;
      }
    }
    if (next.x < 0) {
      s.route = route_to_frontier(s.pos, knowledge);
      if (s.route.empty()) {
        out.status = SpiralStatus::stuck;
        out.state = state;
        return out;
      }
    }
  }
  if (next.x < 0) {
    next = s.route.front();
    s.route.erase(s.route.begin());
  }

  if (maze.probe(s.pos, next) != ProbeResult::passable) {
    throw ContractViolation("spiral_next: chose a cell that is not passable");
  }
  s.heading = heading_between(s.pos, next);
  s.pos = next;
  sense(maze, knowledge, next);
  record_visit(s, knowledge, next);

  const int ring = spiral_ring(next, n);
  if (s.route.empty() && ring >= s.layer) s.layer = ring;
  s.detouring = !s.route.empty() || ring != s.layer;
  out.next = next;
  return out;
}

}  // namespace mazerl
