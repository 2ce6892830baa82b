#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "mazerl/grid.hpp"
#include "mazerl/rng.hpp"
#include "oracles.hpp"

using namespace mazerl;

TEST_CASE("generated mazes satisfy the layout invariants") {
  for (int n : {8, 10, 16, 32, 64}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const MazeGrid m = generate_maze(n, seed);
      CAPTURE(n);
      CAPTURE(seed);
      CHECK(m.size() == n);
      CHECK(m.target() == Position{n / 2, n / 2});
      CHECK_FALSE(m.is_wall(m.start()));
      CHECK_FALSE(m.is_wall(m.target()));
      CHECK(oracle::shortest_path(m, m.start(), m.target()).has_value());
    }
  }
}

TEST_CASE("generation is a pure function of (n, seed)") {
  const MazeGrid a = generate_maze(16, 1);
  const MazeGrid b = generate_maze(16, 1);
  CHECK(a == b);
  CHECK(a.layout_hash() == b.layout_hash());
  CHECK(generate_maze(16, 2).layout_hash() != a.layout_hash());
  // Frozen layout: guards against silent changes to the generator or PRNG.
  CHECK(maze_to_string(a) == oracle::read_file(oracle::golden_path("maze_16_1.txt")));
}

TEST_CASE("32x32 seed 7 shortest route to the center") {
  const MazeGrid m = generate_maze(32, 7);
  // Computed once by an external BFS over the emitted maze text.
  CHECK(oracle::shortest_path(m, {0, 0}, {16, 16}) == 100);
  CHECK(oracle::reachable_count(m) == 517);
}

TEST_CASE("braiding creates loops") {
  // A perfect maze on the room lattice has passable = 2*rooms - 1 cells; any
  // extra passable cell beyond the forced center carve is a loop.
  std::size_t extra = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MazeGrid m = generate_maze(32, seed);
    const std::size_t passable = m.cell_count() - m.wall_count();
    const std::size_t rooms = 16 * 16;
    extra += passable - (2 * rooms - 1);
  }
  CHECK(extra > 10 * 4);
}

TEST_CASE("invalid sizes are configuration errors") {
  CHECK_THROWS_AS(generate_maze(6, 1), ConfigError);
  CHECK_THROWS_AS(generate_maze(17, 1), ConfigError);
  CHECK_THROWS_AS(generate_maze(0, 1), ConfigError);
  CHECK_NOTHROW(generate_maze(8, 1));
}

TEST_CASE("probe answers") {
  const MazeGrid open = open_maze(4);
  CHECK(open.probe({0, 0}, {-1, 0}) == ProbeResult::out_of_bounds);
  CHECK(open.probe({0, 0}, {0, -1}) == ProbeResult::out_of_bounds);
  CHECK(open.probe({0, 0}, {0, 1}) == ProbeResult::passable);
  CHECK(open.probe({0, 0}, {0, 0}) == ProbeResult::passable);

  const MazeGrid m = generate_maze(16, 1);
  // Row 1 of the golden layout starts with a wall under the start corridor.
  REQUIRE(m.is_wall({1, 0}));
  CHECK(m.probe({0, 0}, {1, 0}) == ProbeResult::blocked);
  CHECK(m.probe({0, 0}, {1, 0}) == ProbeResult::blocked);
}

TEST_CASE("probes outside the 4-neighborhood fail fast") {
  const MazeGrid m = generate_maze(16, 3);
  Rng rng(99);
  int illegal = 0;
  for (int i = 0; i < 2000; ++i) {
    const Position from{static_cast<int>(uniform_below(rng, 16)), static_cast<int>(uniform_below(rng, 16))};
    const Position to{from.x + static_cast<int>(uniform_below(rng, 7)) - 3,
                      from.y + static_cast<int>(uniform_below(rng, 7)) - 3};
    if (manhattan(from, to) > 1) {
      ++illegal;
      CHECK_THROWS_AS((void)m.probe(from, to), ContractViolation);
    } else {
      CHECK_NOTHROW((void)m.probe(from, to));
    }
  }
  CHECK(illegal > 1000);
  CHECK_THROWS_AS((void)m.probe({-1, 0}, {0, 0}), ContractViolation);
}

TEST_CASE("manhattan distance") {
  CHECK(manhattan({0, 0}, {0, 0}) == 0);
  CHECK(manhattan({0, 0}, {8, 8}) == 16);
  CHECK(manhattan({3, 10}, {8, 8}) == 7);
}

TEST_CASE("coverage percent counts distinct visited cells") {
  KnowledgeMap k(16);
  CHECK(coverage_percent(k, 16) == 0.0);
  for (int i = 0; i < 128; ++i) k.record_visit({i / 16, i % 16}, 1);
  CHECK(coverage_percent(k, 16) == 50.0);
  k.record_visit({0, 0}, 1);
  CHECK(coverage_percent(k, 16) == 50.0);
  for (int i = 128; i < 256; ++i) k.record_visit({i / 16, i % 16}, 1);
  CHECK(coverage_percent(k, 16) == 100.0);
  CHECK(k.visited_count() == 256);
}

TEST_CASE("knowledge never holds a cell as both wall and free") {
  KnowledgeMap k(8);
  k.mark({1, 1}, ProbeResult::blocked);
  k.mark({1, 1}, ProbeResult::blocked);
  CHECK(k.known_wall_count() == 1);
  CHECK_THROWS_AS(k.mark({1, 1}, ProbeResult::passable), ContractViolation);
  k.mark({2, 2}, ProbeResult::passable);
  CHECK_THROWS_AS(k.mark({2, 2}, ProbeResult::blocked), ContractViolation);
  k.mark({-1, 0}, ProbeResult::out_of_bounds);
  CHECK(k.known_free_count() == 1);
  CHECK_THROWS_AS(k.record_visit({1, 1}, 1), ContractViolation);
}

TEST_CASE("sensing only reveals the local neighborhood") {
  const MazeGrid m = generate_maze(16, 5);
  KnowledgeMap k(16);
  arrive(m, k, {4, 4}, 1);
  for (int x = 0; x < 16; ++x) {
    for (int y = 0; y < 16; ++y) {
      const Position p{x, y};
      if (k.cell(p) != KnowledgeMap::Cell::unknown) {
        CHECK(manhattan(p, {4, 4}) <= 1);
        CHECK(k.known_wall(p) == m.is_wall(p));
      }
    }
  }
  CHECK(k.known_wall_count() + k.known_free_count() == 5);
}

TEST_CASE("maze text round-trips bit-exactly") {
  for (std::uint64_t seed : {1ULL, 2ULL, 12345678901234ULL}) {
    const MazeGrid m = generate_maze(32, seed);
    const std::string text = maze_to_string(m);
    std::istringstream in(text);
    const MazeGrid back = read_maze(in);
    CHECK(back == m);
    CHECK(maze_to_string(back) == text);
  }
  const std::string golden = oracle::read_file(oracle::golden_path("maze_16_1.txt"));
  std::istringstream in(golden);
  CHECK(maze_to_string(read_maze(in)) == golden);
}

TEST_CASE("malformed maze text is rejected") {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_maze(in);
  };
  CHECK_THROWS_AS(parse(""), ConfigError);
  CHECK_THROWS_AS(parse("x y\n"), ConfigError);
  CHECK_THROWS_AS(parse("2 0\nS.\n"), ConfigError);         // missing row
  CHECK_THROWS_AS(parse("2 0\nS.\n..\n"), ConfigError);     // no target marker at (1,1)
  CHECK_THROWS_AS(parse("2 0\nS.\n.?\n"), ConfigError);     // bad character
  CHECK_THROWS_AS(parse("2 0\nS..\n.T\n"), ConfigError);    // bad row length
  CHECK_THROWS_AS(parse("2 0\n#.\n.T\n"), ConfigError);     // start is a wall
  CHECK_NOTHROW(parse("2 0\nS.\n.T\n"));
}
