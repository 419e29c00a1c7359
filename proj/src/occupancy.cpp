// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <tuple>

#include "proxgen/error.hpp"

namespace proxgen {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr int kNoDirection = 8;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool is_diagonal(int move) { return (move & 1) == 1; }

double octile(Cell a, Cell b) {
  const double dx = std::abs(a.col - b.col);
  const double dy = std::abs(a.row - b.row);
  return std::max(dx, dy) - std::min(dx, dy) + kSqrt2 * std::min(dx, dy);
}

int move_index(Cell from, Cell to) {
  for (int m = 0; m < 8; ++m) {
    if (from.col + kMoves[m].dcol == to.col && from.row + kMoves[m].drow == to.row) return m;
  }
  return -1;
}

}  // namespace

OccupancyGrid::OccupancyGrid(Vec3 origin, double resolution, int width, int height,
                             std::vector<CellState> cells)
    : origin_(std::move(origin)),
      resolution_(resolution),
      width_(width),
      height_(height),
      cells_(std::move(cells)) {
  if (!(resolution_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be > 0");
  if (width_ <= 0 || height_ <= 0 ||
      cells_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw Error(ErrorCode::InvalidArgument, "grid cell array does not match width*height");
  }
}

Vec3 OccupancyGrid::cell_center(Cell c) const {
  return Vec3(origin_.x() + (c.col + 0.5) * resolution_, origin_.y() + (c.row + 0.5) * resolution_,
              origin_.z());
}

std::optional<Cell> OccupancyGrid::cell_of(const Vec3& p) const {
  const double fx = std::floor((p.x() - origin_.x()) / resolution_);
  const double fy = std::floor((p.y() - origin_.y()) / resolution_);
  if (!std::isfinite(fx) || !std::isfinite(fy)) return std::nullopt;
  if (fx < 0 || fy < 0 || fx >= width_ || fy >= height_) return std::nullopt;
  return Cell{static_cast<int>(fx), static_cast<int>(fy)};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

std::vector<Vec2> convex_hull(std::vector<Vec2> points) {
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vec2& a, const Vec2& b) { return a.x() == b.x() && a.y() == b.y(); }),
               points.end());
  if (points.size() < 3) return points;

  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  for (const Vec2& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Vec2& p = points[i];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

bool point_in_convex_polygon(std::span<const Vec2> hull, const Vec2& p, double tolerance) {
  if (hull.size() < 3) return false;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    const double edge_len = (b - a).norm();
    if (cross(a, b, p) < -tolerance * edge_len) return false;
  }
  return true;
}

std::vector<Vec2> box_footprint(const Box3D& box) {
  const Vec3& lo = box.min_corner;
  const Vec3& hi = box.max_corner;
  return {Vec2(lo.x(), lo.y()), Vec2(hi.x(), lo.y()), Vec2(hi.x(), hi.y()), Vec2(lo.x(), hi.y())};
}

OccupancyGrid build_occupancy(std::span<const Box3D> boxes, double resolution) {
  if (boxes.empty()) throw Error(ErrorCode::EmptyScene, "no boxes to build an occupancy map from");
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidArgument, "resolution must be > 0");

  std::vector<std::vector<Vec2>> footprints;
  std::vector<Vec2> all_points;
  for (const Box3D& box : boxes) {
    auto corners = box_footprint(box);
    all_points.insert(all_points.end(), corners.begin(), corners.end());
    footprints.push_back(convex_hull(std::move(corners)));
  }
  const std::vector<Vec2> outer = convex_hull(all_points);
  if (outer.size() < 3) {
    throw Error(ErrorCode::DegenerateHull, "all footprint points are collinear");
  }

  Vec2 lo = outer.front();
  Vec2 hi = outer.front();
  for (const Vec2& p : outer) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 origin(lo.x() - resolution, lo.y() - resolution, 0.0);
  const int width = static_cast<int>(std::ceil((hi.x() - lo.x()) / resolution - 1e-9)) + 2;
  const int height = static_cast<int>(std::ceil((hi.y() - lo.y()) / resolution - 1e-9)) + 2;

  std::vector<CellState> cells(static_cast<std::size_t>(width) * height, CellState::OutOfBounds);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const Vec2 center(origin.x() + (col + 0.5) * resolution, origin.y() + (row + 0.5) * resolution);
      CellState s = CellState::OutOfBounds;
      const bool in_obstacle = std::any_of(footprints.begin(), footprints.end(),
                                           [&](const auto& fp) { return point_in_convex_polygon(fp, center); });
      if (in_obstacle) {
        s = CellState::Obstacle;
      } else if (point_in_convex_polygon(outer, center)) {
        s = CellState::Free;
      }
      cells[static_cast<std::size_t>(row) * width + col] = s;
    }
  }
  return OccupancyGrid(origin, resolution, width, height, std::move(cells));
}

std::string to_ascii(const OccupancyGrid& grid) {
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.width() + 1) * grid.height());
  for (int row = grid.height() - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width(); ++col) {
      switch (grid.state(Cell{col, row})) {
        case CellState::Free: out += '.'; break;
        case CellState::Obstacle: out += '#'; break;
        case CellState::OutOfBounds: out += ' '; break;
      }
    }
    out += '\n';
  }
  return out;
}

OccupancyGrid grid_from_ascii(std::string_view text, double resolution, const Vec3& origin) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw Error(ErrorCode::InvalidArgument, "empty grid text");
  std::size_t width = 0;
  for (const auto& l : lines) width = std::max(width, l.size());
  const int height = static_cast<int>(lines.size());
  std::vector<CellState> cells(width * lines.size(), CellState::OutOfBounds);
  for (int i = 0; i < height; ++i) {
    const int row = height - 1 - i;
    for (std::size_t col = 0; col < lines[i].size(); ++col) {
      const char c = lines[i][col];
      CellState s = CellState::OutOfBounds;
      if (c == '.') s = CellState::Free;
      else if (c == '#') s = CellState::Obstacle;
      cells[static_cast<std::size_t>(row) * width + col] = s;
    }
  }
  return OccupancyGrid(origin, resolution, static_cast<int>(width), height, std::move(cells));
}

bool move_allowed(const OccupancyGrid& grid, Cell from, Cell to) {
  const int dc = to.col - from.col;
  const int dr = to.row - from.row;
  if (std::abs(dc) > 1 || std::abs(dr) > 1 || (dc == 0 && dr == 0)) return false;
  if (!grid.is_free(to)) return false;
  if (dc != 0 && dr != 0) {
    return grid.is_free(Cell{from.col + dc, from.row}) && grid.is_free(Cell{from.col, from.row + dr});
  }
  return true;
}

double canonical_path_cost(int cardinal_moves, int diagonal_moves, int direction_changes,
                           double turn_penalty) {
  return static_cast<double>(cardinal_moves) + static_cast<double>(diagonal_moves) * kSqrt2 +
         turn_penalty * static_cast<double>(direction_changes);
}

GridPath summarize_path(const OccupancyGrid& grid, std::vector<Cell> cells, double turn_penalty) {
  GridPath out;
  int previous = kNoDirection;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const int m = move_index(cells[i - 1], cells[i]);
    if (m < 0) throw Error(ErrorCode::InvalidArgument, "path cells are not 8-adjacent");
    if (is_diagonal(m)) ++out.diagonal_moves;
    else ++out.cardinal_moves;
    if (previous != kNoDirection && previous != m) ++out.direction_changes;
    previous = m;
  }
  out.cost = canonical_path_cost(out.cardinal_moves, out.diagonal_moves, out.direction_changes,
                                 turn_penalty);
  out.waypoints.reserve(cells.size());
  for (const Cell& c : cells) out.waypoints.push_back(grid.cell_center(c));
  out.cells = std::move(cells);
  return out;
}

Cell project_endpoint(const OccupancyGrid& grid, const Vec3& point, Endpoint role) {
  const ErrorCode oob = role == Endpoint::Start ? ErrorCode::StartOutOfBounds : ErrorCode::GoalOutOfBounds;
  const char* name = role == Endpoint::Start ? "start" : "goal";
  const auto cell = grid.cell_of(point);
  if (!cell) throw Error(oob, std::string(name) + " lies outside the grid");
  const CellState s = grid.state(*cell);
  if (s == CellState::Free) return *cell;
  if (s == CellState::OutOfBounds) {
    throw Error(oob, std::string(name) + " lies outside the navigable hull");
  }
  // Obstacle: the nearest Free cell by center distance, ties row-major.
  std::optional<Cell> best;
  long best_d2 = std::numeric_limits<long>::max();
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) {
      const Cell c{col, row};
      if (!grid.is_free(c)) continue;
      const long dc = col - cell->col;
      const long dr = row - cell->row;
      const long d2 = dc * dc + dr * dr;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
  }
  if (!best) throw Error(ErrorCode::NoPath, "grid has no free cells");
  return *best;
}

GridPath find_path_cells(const OccupancyGrid& grid, Cell start, Cell goal, double turn_penalty) {
  if (!(turn_penalty >= 0.0)) throw Error(ErrorCode::InvalidArgument, "turn_penalty must be >= 0");
  if (!grid.is_free(start)) throw Error(ErrorCode::StartOutOfBounds, "start cell is not free");
  if (!grid.is_free(goal)) throw Error(ErrorCode::GoalOutOfBounds, "goal cell is not free");
  if (start == goal) return summarize_path(grid, {start}, turn_penalty);

  struct Label {
    double g = std::numeric_limits<double>::infinity();
    int cardinal = 0;
    int diagonal = 0;
    int turns = 0;
    int parent = -1;
    bool closed = false;
  };
  const int n_states = grid.width() * grid.height() * 9;
  std::vector<Label> labels(static_cast<std::size_t>(n_states));
  auto state_of = [&](Cell c, int dir) { return grid.index(c) * 9 + dir; };

  // (f, h, cell index, incoming direction, state)
  using Entry = std::tuple<double, double, int, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  const int s0 = state_of(start, kNoDirection);
  labels[s0].g = 0.0;
  const double h0 = octile(start, goal);
  open.emplace(h0, h0, grid.index(start), kNoDirection, s0);

  int reached = -1;
  while (!open.empty()) {
    const auto [f, h, cell_index, dir, state] = open.top();
    open.pop();
    Label& cur = labels[state];
    if (cur.closed) continue;
    cur.closed = true;
    const Cell cell = grid.cell_at(cell_index);
    if (cell == goal) {
      reached = state;
      break;
    }
    for (int m = 0; m < 8; ++m) {
      const Cell next{cell.col + kMoves[m].dcol, cell.row + kMoves[m].drow};
      if (!move_allowed(grid, cell, next)) continue;
      const int ns = state_of(next, m);
      Label& nl = labels[ns];
      if (nl.closed) continue;
      const int card = cur.cardinal + (is_diagonal(m) ? 0 : 1);
      const int diag = cur.diagonal + (is_diagonal(m) ? 1 : 0);
      const int turns = cur.turns + ((dir != kNoDirection && dir != m) ? 1 : 0);
      const double g = canonical_path_cost(card, diag, turns, turn_penalty);
      if (g < nl.g) {
        nl.g = g;
        nl.cardinal = card;
        nl.diagonal = diag;
        nl.turns = turns;
        nl.parent = state;
        const double hn = octile(next, goal);
        open.emplace(g + hn, hn, grid.index(next), m, ns);
      }
    }
  }
  if (reached < 0) throw Error(ErrorCode::NoPath, "goal is unreachable from start");

  std::vector<Cell> cells;
  for (int s = reached; s >= 0; s = labels[s].parent) cells.push_back(grid.cell_at(s / 9));
  std::reverse(cells.begin(), cells.end());
  return summarize_path(grid, std::move(cells), turn_penalty);
}

GridPath find_path(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal, double turn_penalty) {
  const Cell s = project_endpoint(grid, start, Endpoint::Start);
  const Cell g = project_endpoint(grid, goal, Endpoint::Goal);
  return find_path_cells(grid, s, g, turn_penalty);
}

std::vector<NavStep> path_to_steps(std::span<const Vec3> waypoints, const RigidTransform& reference_pose,
                                   const AxisConvention& convention) {
  if (waypoints.size() < 2) throw Error(ErrorCode::InvalidArgument, "path_to_steps needs >= 2 waypoints");
  std::vector<NavStep> steps;
  steps.reserve(waypoints.size() - 1);
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Vec3 delta = waypoints[i + 1] - waypoints[i];
    steps.push_back(NavStep{euclidean_distance(waypoints[i], waypoints[i + 1]),
                            discretize_direction(bev_heading_angle(reference_pose, delta, convention))});
  }
  return steps;
}

NavPath make_nav_path(const GridPath& path, const RigidTransform& reference_pose,
                      const AxisConvention& convention) {
  NavPath out;
  out.waypoints = path.waypoints;
  if (out.waypoints.size() >= 2) out.steps = path_to_steps(out.waypoints, reference_pose, convention);
  return out;
}

}  // namespace proxgen
