// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Ground-plane occupancy map built from projected box footprints, and an
// 8-connected A* planner with direction-change penalties and diagonal-cut
// constraints.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proxgen/geometry.hpp"

namespace proxgen {

inline constexpr double kDefaultResolution = 0.1;
inline constexpr double kDefaultTurnPenalty = 0.1;

enum class CellState : std::uint8_t { Free, Obstacle, OutOfBounds };

struct Cell {
  int col = 0;  // x index
  int row = 0;  // y index
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class OccupancyGrid {
 public:
  OccupancyGrid(Vec3 origin, double resolution, int width, int height, std::vector<CellState> cells);

  const Vec3& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const CellState> cells() const { return cells_; }

  bool in_bounds(Cell c) const { return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_; }
  // Row-major: row * width + col.
  int index(Cell c) const { return c.row * width_ + c.col; }
  Cell cell_at(int index) const { return Cell{index % width_, index / width_}; }
  CellState state(Cell c) const { return in_bounds(c) ? cells_[index(c)] : CellState::OutOfBounds; }
  bool is_free(Cell c) const { return state(c) == CellState::Free; }

  Vec3 cell_center(Cell c) const;
  // Cell containing the ground projection of `p`, or nullopt outside the grid.
  std::optional<Cell> cell_of(const Vec3& p) const;
  std::size_t count(CellState s) const;

 private:
  Vec3 origin_;
  double resolution_;
  int width_;
  int height_;
  std::vector<CellState> cells_;
};

// Convex hull (counterclockwise, collinear points dropped).
std::vector<Vec2> convex_hull(std::vector<Vec2> points);
// Closed containment test against a counterclockwise convex polygon.
bool point_in_convex_polygon(std::span<const Vec2> hull, const Vec2& p, double tolerance = 1e-9);
// The four ground-projected corners of a box.
std::vector<Vec2> box_footprint(const Box3D& box);

// Throws EmptyScene (no boxes), DegenerateHull (all footprint points
// collinear) or InvalidArgument (resolution <= 0).
OccupancyGrid build_occupancy(std::span<const Box3D> boxes, double resolution = kDefaultResolution);

// '.' Free, '#' Obstacle, ' ' OutOfBounds. Highest row first so +Y points up.
std::string to_ascii(const OccupancyGrid& grid);
OccupancyGrid grid_from_ascii(std::string_view text, double resolution = 1.0,
                              const Vec3& origin = Vec3::Zero());

// 0..7 in the fixed neighbour order used by the planner.
struct Move {
  int dcol;
  int drow;
};
inline constexpr Move kMoves[8] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};

// A diagonal move is legal only when both flanking cardinal cells are Free.
bool move_allowed(const OccupancyGrid& grid, Cell from, Cell to);

// Cost of a move sequence in cell units: cardinal 1, diagonal sqrt(2), plus
// `turn_penalty` per change of move direction. Evaluated in one fixed order
// so equal move counts give bit-identical costs.
double canonical_path_cost(int cardinal_moves, int diagonal_moves, int direction_changes,
                           double turn_penalty);

struct GridPath {
  std::vector<Cell> cells;
  std::vector<Vec3> waypoints;  // cell centers, z = grid origin z
  double cost = 0.0;
  int cardinal_moves = 0;
  int diagonal_moves = 0;
  int direction_changes = 0;
};

// Recomputes move counts and cost from a cell sequence.
GridPath summarize_path(const OccupancyGrid& grid, std::vector<Cell> cells, double turn_penalty);

// Projects a world point onto the grid. Obstacle cells snap to the nearest
// Free cell (cell-center distance, ties row-major); cells outside the grid or
// OutOfBounds throw StartOutOfBounds / GoalOutOfBounds depending on `role`.
enum class Endpoint { Start, Goal };
Cell project_endpoint(const OccupancyGrid& grid, const Vec3& point, Endpoint role);

GridPath find_path_cells(const OccupancyGrid& grid, Cell start, Cell goal,
                         double turn_penalty = kDefaultTurnPenalty);
GridPath find_path(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                   double turn_penalty = kDefaultTurnPenalty);

struct NavStep {
  double distance = 0.0;
  Direction8 direction = Direction8::Front;
};

struct NavPath {
  std::vector<Vec3> waypoints;
  std::vector<NavStep> steps;
};

// Per consecutive waypoint pair: Euclidean distance and the direction of the
// displacement relative to `reference_pose` (the camera at the last frame).
std::vector<NavStep> path_to_steps(std::span<const Vec3> waypoints, const RigidTransform& reference_pose,
                                   const AxisConvention& convention = {});
NavPath make_nav_path(const GridPath& path, const RigidTransform& reference_pose,
                      const AxisConvention& convention = {});

}  // namespace proxgen
