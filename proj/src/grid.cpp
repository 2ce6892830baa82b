#include "mazerl/grid.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "mazerl/rng.hpp"

namespace mazerl {

Heading heading_between(Position a, Position b) {
  for (Heading h : kHeadings) {
    if (step(a, h) == b) return h;
  }
  throw ContractViolation("heading_between: positions are not 4-adjacent");
}

const char* heading_name(Heading h) {
  switch (h) {
    case Heading::E: return "E";
    case Heading::S: return "S";
    case Heading::W: return "W";
    case Heading::N: return "N";
  }
  return "?";
}

MazeGrid::MazeGrid(int n, std::uint64_t seed, std::vector<bool> walls) : n_(n), seed_(seed) {
  if (n < 1) throw ConfigError("maze size must be positive");
  if (walls.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw ConfigError("maze layout has " + std::to_string(walls.size()) + " cells, expected " +
                      std::to_string(n * n));
  }
  walls_.assign(walls.begin(), walls.end());
  if (is_wall(start())) throw ConfigError("start cell (0,0) must be passable");
  if (is_wall(target())) throw ConfigError("target cell must be passable");
}

ProbeResult MazeGrid::probe(Position from, Position neighbor) const {
  if (!in_bounds(from)) throw ContractViolation("probe: origin outside the maze");
  if (manhattan(from, neighbor) > 1) throw ContractViolation("probe: cell is outside the 4-neighborhood");
  if (!in_bounds(neighbor)) return ProbeResult::out_of_bounds;
  return is_wall(neighbor) ? ProbeResult::blocked : ProbeResult::passable;
}

std::uint64_t MazeGrid::layout_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(n_));
  mix(seed_);
  for (std::uint8_t w : walls_) {
    h ^= w;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::size_t MazeGrid::wall_count() const {
  std::size_t c = 0;
  for (std::uint8_t w : walls_) c += w;
  return c;
}

namespace {

// Rooms sit on even coordinates 0, 2, ..., n-2; odd cells between two rooms
// are the walls that carving can remove. Row and column n-1 stay solid.
struct Carver {
  int n;
  std::vector<bool> walls;

  std::vector<bool>::reference at(Position p) { return walls[static_cast<std::size_t>(p.x) * n + p.y]; }
  bool is_room(Position p) const { return p.x >= 0 && p.y >= 0 && p.x <= n - 2 && p.y <= n - 2; }
};

Position room_step(Position p, Heading h) { return step(step(p, h), h); }

}  // namespace

MazeGrid generate_maze(int n, std::uint64_t seed) {
  if (n < 8) throw ConfigError("maze size must be at least 8, got " + std::to_string(n));
  if (n % 2 != 0) throw ConfigError("maze size must be even, got " + std::to_string(n));

  Rng rng(seed);
  Carver c{n, std::vector<bool>(static_cast<std::size_t>(n) * n, true)};

  // Iterative randomized depth-first carving from the start room.
  std::vector<Position> stack{{0, 0}};
  c.at({0, 0}) = false;
  while (!stack.empty()) {
    const Position cur = stack.back();
    std::array<Heading, 4> open{};
    std::size_t count = 0;
    for (Heading h : kHeadings) {
      const Position next = room_step(cur, h);
      if (c.is_room(next) && c.at(next)) open[count++] = h;
    }
    if (count == 0) {
      stack.pop_back();
      continue;
    }
    const Heading h = open[uniform_below(rng, count)];
    c.at(step(cur, h)) = false;
    c.at(room_step(cur, h)) = false;
    stack.push_back(room_step(cur, h));
  }

  // Braiding: a dead-end room gets the wall opposite its single exit removed
  // (or the first other removable wall, when the opposite side is the rim).
  for (int x = 0; x <= n - 2; x += 2) {
    for (int y = 0; y <= n - 2; y += 2) {
      const Position room{x, y};
      std::size_t exits = 0;
      Heading exit = Heading::E;
      for (Heading h : kHeadings) {
        const Position between = step(room, h);
        if (c.is_room(room_step(room, h)) && !c.at(between)) {
          ++exits;
          exit = h;
        }
      }
      const double draw = uniform01(rng);
      if (exits != 1 || draw >= kBraidProbability) continue;
      const Heading back = static_cast<Heading>((static_cast<int>(exit) + 2) % 4);
      for (Heading h : {back, Heading::E, Heading::S, Heading::W, Heading::N}) {
        if (h == exit) continue;
        if (c.is_room(room_step(room, h)) && c.at(step(room, h))) {
          c.at(step(room, h)) = false;
          break;
        }
      }
    }
  }

  const Position target{n / 2, n / 2};
  c.at(target) = false;
  for (Heading h : kHeadings) c.at(step(target, h)) = false;

  return MazeGrid(n, seed, std::move(c.walls));
}

MazeGrid open_maze(int n) {
  return MazeGrid(n, 0, std::vector<bool>(static_cast<std::size_t>(n) * n, false));
}

void write_maze(std::ostream& out, const MazeGrid& maze) {
  const int n = maze.size();
  out << n << ' ' << maze.seed() << '\n';
  for (int x = 0; x < n; ++x) {
    std::string row(static_cast<std::size_t>(n), '.');
    for (int y = 0; y < n; ++y) {
      const Position p{x, y};
      if (p == maze.start()) {
        row[y] = 'S';
      } else if (p == maze.target()) {
        row[y] = 'T';
      } else if (maze.is_wall(p)) {
        row[y] = '#';
      }
    }
    out << row << '\n';
  }
}

std::string maze_to_string(const MazeGrid& maze) {
  std::ostringstream os;
  write_maze(os, maze);
  return os.str();
}

MazeGrid read_maze(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("maze text: missing header line");
  std::istringstream hs(header);
  long long n = 0;
  std::uint64_t seed = 0;
  if (!(hs >> n >> seed) || n < 1 || n > 4096) throw ConfigError("maze text: bad header '" + header + "'");
  std::string trailing;
  if (hs >> trailing) throw ConfigError("maze text: trailing data in header '" + header + "'");

  const int size = static_cast<int>(n);
  std::vector<bool> walls(static_cast<std::size_t>(size) * size, false);
  for (int x = 0; x < size; ++x) {
    std::string row;
    if (!std::getline(in, row)) throw ConfigError("maze text: expected " + std::to_string(size) + " rows");
    if (row.size() != static_cast<std::size_t>(size)) {
      throw ConfigError("maze text: row " + std::to_string(x) + " has length " + std::to_string(row.size()));
    }
    for (int y = 0; y < size; ++y) {
      const Position p{x, y};
      const char ch = row[y];
      const bool is_start = p == Position{0, 0};
      const bool is_target = p == Position{size / 2, size / 2};
      switch (ch) {
        case '#': walls[x * size + y] = true; break;
        case '.': break;
        case 'S':
          if (!is_start) throw ConfigError("maze text: 'S' away from (0,0)");
          break;
        case 'T':
          if (!is_target) throw ConfigError("maze text: 'T' away from the center");
          break;
        default: throw ConfigError(std::string("maze text: unexpected character '") + ch + "'");
      }
      if ((is_start && ch != 'S') || (is_target && !is_start && ch != 'T')) {
        throw ConfigError("maze text: start/target markers missing");
      }
    }
  }
  return MazeGrid(size, seed, std::move(walls));
}

KnowledgeMap::KnowledgeMap(int n)
    : n_(n),
      cells_(static_cast<std::size_t>(n) * n, Cell::unknown),
      visited_(static_cast<std::size_t>(n) * n, 0) {}

void KnowledgeMap::mark(Position p, ProbeResult r) {
  if (r == ProbeResult::out_of_bounds) return;
  Cell& c = cells_[index(p)];
  const Cell want = r == ProbeResult::blocked ? Cell::wall : Cell::free;
  if (c == want) return;
  if (c != Cell::unknown) throw ContractViolation("knowledge: cell re-marked with a conflicting probe result");
  c = want;
  if (want == Cell::wall) {
    ++wall_count_;
  } else {
    ++free_count_;
  }
}

bool KnowledgeMap::record_visit(Position p, int history_stride) {
  if (history_stride < 1) throw ContractViolation("record_visit: history stride must be positive");
  if (known_wall(p)) throw ContractViolation("record_visit: cannot occupy a known wall");
  if (arrivals_ % static_cast<std::size_t>(history_stride) == 0) history_.push_back(p);
  ++arrivals_;
  std::uint8_t& v = visited_[index(p)];
  if (v != 0) return false;
  v = 1;
  ++visited_count_;
  return true;
}

void sense(const MazeGrid& maze, KnowledgeMap& knowledge, Position at) {
  knowledge.mark(at, maze.probe(at, at));
  for (Heading h : kHeadings) {
    const Position q = step(at, h);
    knowledge.mark(q, maze.probe(at, q));
  }
}

bool arrive(const MazeGrid& maze, KnowledgeMap& knowledge, Position at, int history_stride) {
  sense(maze, knowledge, at);
  return knowledge.record_visit(at, history_stride);
}

double coverage_percent(const KnowledgeMap& knowledge, int n) {
  const double total = static_cast<double>(n) * static_cast<double>(n);
  return static_cast<double>(knowledge.visited_count()) / total * 100.0;
}

}  // namespace mazerl
