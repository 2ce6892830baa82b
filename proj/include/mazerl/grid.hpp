#pragma once
// Maze layout, local wall sensing and the agent's accumulated knowledge.
//
// Coordinates: a Position is (x, y) with x the row and y the column, both in
// [0, n). Headings move E = y+1, S = x+1, W = y-1, N = x-1.

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mazerl {

/// Invalid user-supplied configuration (bad maze size, unparsable input).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Programming error: an API precondition was violated.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Position {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Position&, const Position&) = default;
};

enum class Heading : std::uint8_t { E, S, W, N };

/// Expansion order used everywhere a deterministic neighbor order is needed.
inline constexpr std::array<Heading, 4> kHeadings{Heading::E, Heading::S, Heading::W, Heading::N};

constexpr Position step(Position p, Heading h) {
  switch (h) {
    case Heading::E: return {p.x, p.y + 1};
    case Heading::S: return {p.x + 1, p.y};
    case Heading::W: return {p.x, p.y - 1};
    case Heading::N: return {p.x - 1, p.y};
  }
  return p;
}

/// Heading of the unit move a -> b. Requires manhattan(a, b) == 1.
Heading heading_between(Position a, Position b);

const char* heading_name(Heading h);

constexpr int manhattan(Position a, Position b) {
  const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx + dy;
}

enum class ProbeResult : std::uint8_t { passable, blocked, out_of_bounds };

/// Immutable wall layout. Safe to share between threads.
class MazeGrid {
 public:
  /// Builds a grid from an explicit layout (row-major, true = wall).
  /// Validates start/target passability but not connectivity.
  MazeGrid(int n, std::uint64_t seed, std::vector<bool> walls);

  int size() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  Position start() const { return {0, 0}; }
  Position target() const { return {n_ / 2, n_ / 2}; }

  bool in_bounds(Position p) const { return p.x >= 0 && p.y >= 0 && p.x < n_ && p.y < n_; }
  bool is_wall(Position p) const { return walls_[index(p)] != 0; }
  std::size_t index(Position p) const {
    return static_cast<std::size_t>(p.x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(p.y);
  }
  std::size_t cell_count() const { return walls_.size(); }

  /// Local wall oracle. `neighbor` must be `from` or one of its 4-neighbors;
  /// anything else throws ContractViolation.
  ProbeResult probe(Position from, Position neighbor) const;

  /// FNV-1a over (n, seed, layout); equal layouts hash equal.
  std::uint64_t layout_hash() const;
  std::size_t wall_count() const;

  friend bool operator==(const MazeGrid&, const MazeGrid&) = default;

 private:
  int n_;
  std::uint64_t seed_;
  std::vector<std::uint8_t> walls_;
};

/// Braided recursive-backtracker maze. Requires n >= 8 and n even.
MazeGrid generate_maze(int n, std::uint64_t seed);

/// Wall-free n x n grid (any n >= 1); used for tests and calibration.
MazeGrid open_maze(int n);

/// Probability that a dead end gets its back wall removed during braiding.
inline constexpr double kBraidProbability = 0.10;

/// Text format: "n seed" then n rows of '#', '.', 'S', 'T'.
void write_maze(std::ostream& out, const MazeGrid& maze);
MazeGrid read_maze(std::istream& in);
std::string maze_to_string(const MazeGrid& maze);

/// What the agent has learned about the maze so far. Single owner per episode.
class KnowledgeMap {
 public:
  enum class Cell : std::uint8_t { unknown, free, wall };

  explicit KnowledgeMap(int n);

  int size() const { return n_; }
  Cell cell(Position p) const { return cells_[index(p)]; }
  bool known_wall(Position p) const { return cell(p) == Cell::wall; }
  bool known_free(Position p) const { return cell(p) == Cell::free; }
  bool visited(Position p) const { return visited_[index(p)] != 0; }

  std::size_t visited_count() const { return visited_count_; }
  std::size_t known_wall_count() const { return wall_count_; }
  std::size_t known_free_count() const { return free_count_; }
  /// Number of occupancy events recorded so far (revisits included).
  std::size_t arrivals() const { return arrivals_; }
  const std::vector<Position>& sampled_history() const { return history_; }

  /// Records a probe result. Re-marking a cell with the opposite kind throws.
  void mark(Position p, ProbeResult r);

  /// Occupancy event at p. Returns true iff p was not visited before.
  /// The position is appended to the history when arrivals() % stride == 0
  /// (evaluated before the counter advances).
  bool record_visit(Position p, int history_stride);

  /// Monotone counter bumped whenever a new wall becomes known.
  std::uint64_t wall_version() const { return wall_count_; }

 private:
  std::size_t index(Position p) const {
    return static_cast<std::size_t>(p.x) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(p.y);
  }

  int n_;
  std::vector<Cell> cells_;
  std::vector<std::uint8_t> visited_;
  std::size_t visited_count_ = 0;
  std::size_t wall_count_ = 0;
  std::size_t free_count_ = 0;
  std::size_t arrivals_ = 0;
  std::vector<Position> history_;
};

/// Probes `at` and its 4-neighbors and stores the answers.
void sense(const MazeGrid& maze, KnowledgeMap& knowledge, Position at);

/// Occupy `at`: sense the neighborhood, then record the visit.
bool arrive(const MazeGrid& maze, KnowledgeMap& knowledge, Position at, int history_stride);

/// Distinct visited cells over n^2, as a percentage.
double coverage_percent(const KnowledgeMap& knowledge, int n);

}  // namespace mazerl
