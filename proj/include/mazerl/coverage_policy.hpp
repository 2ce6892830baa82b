#pragma once
// Clockwise spiral exploration from the (0,0) corner.
//
// Every cell has a spiral rank: its index in the clockwise ring-by-ring
// traversal of an open n x n grid (ring 0 is the perimeter). The agent steps
// to the unvisited known-free neighbour of lowest rank. At a dead end it
// follows the shortest known-free route to the reachable frontier cell of
// lowest rank. Every arrival senses the four neighbours.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mazerl/grid.hpp"

namespace mazerl {

/// Ring index of p: distance to the nearest border.
int spiral_ring(Position p, int n);

/// Position of p in the clockwise spiral order of an open n x n grid.
std::size_t spiral_rank(Position p, int n);

/// Inverse of spiral_rank. Requires rank < n^2.
Position spiral_cell(std::size_t rank, int n);

enum class MemoryMode : std::uint8_t { full_memory, sentinel };

inline constexpr int kSentinelStride = 4;

struct SpiralState {
  Position pos{0, 0};
  Heading heading = Heading::E;
  /// Outermost ring not yet left behind.
  int layer = 0;
  /// True while off the current ring or following a route.
  bool detouring = false;
  /// Remaining route to the chosen frontier cell, next move first.
  std::vector<Position> route;
  MemoryMode mode = MemoryMode::full_memory;
  int sample_stride = 1;

  int history_stride() const { return mode == MemoryMode::full_memory ? 1 : sample_stride; }

  friend bool operator==(const SpiralState&, const SpiralState&) = default;
};

SpiralState spiral_start(MemoryMode mode, int sample_stride = kSentinelStride);

enum class SpiralStatus : std::uint8_t { moved, stuck };

struct SpiralStep {
  SpiralStatus status = SpiralStatus::moved;
  Position next{};
  SpiralState state;
};

/// One coverage move. Senses the destination and records the visit in
/// `knowledge`. Returns `stuck` with the input state when no unvisited
/// known-free cell is reachable.
SpiralStep spiral_next(const SpiralState& state, const MazeGrid& maze, KnowledgeMap& knowledge);

/// Records an occupancy of `pos` using the state's memory mode.
bool record_visit(const SpiralState& state, KnowledgeMap& knowledge, Position pos);

/// Initial occupancy of the start cell: sense and record.
void spiral_begin(const SpiralState& state, const MazeGrid& maze, KnowledgeMap& knowledge);

}  // namespace mazerl
