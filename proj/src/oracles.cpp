// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/oracles.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <tuple>

#include "proxgen/error.hpp"

namespace proxgen::oracle {

namespace {

constexpr int kDc[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDr[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNone = 8;

double path_cost(int card, int diag, int turns, double penalty) {
  return static_cast<double>(card) + static_cast<double>(diag) * std::sqrt(2.0) +
         penalty * static_cast<double>(turns);
}

bool free_cell(const OccupancyGrid& g, int col, int row) {
  if (col < 0 || row < 0 || col >= g.width() || row >= g.height()) return false;
  return g.cells()[static_cast<std::size_t>(row * g.width() + col)] == CellState::Free;
}

bool can_move(const OccupancyGrid& g, int col, int row, int m) {
  const int nc = col + kDc[m];
  const int nr = row + kDr[m];
  if (!free_cell(g, nc, nr)) return false;
  if (kDc[m] != 0 && kDr[m] != 0) return free_cell(g, nc, row) && free_cell(g, col, nr);
  return true;
}

struct Label {
  double cost = std::numeric_limits<double>::infinity();
  int card = 0;
  int diag = 0;
  int turns = 0;
};

void check_endpoints(const OccupancyGrid& g, Cell start, Cell goal) {
  if (!free_cell(g, start.col, start.row)) throw Error(ErrorCode::StartOutOfBounds, "oracle start not free");
  if (!free_cell(g, goal.col, goal.row)) throw Error(ErrorCode::GoalOutOfBounds, "oracle goal not free");
}

}  // namespace

std::optional<OraclePathCost> dijkstra_path(const OccupancyGrid& grid, Cell start, Cell goal,
                                            double turn_penalty) {
  if (grid.width() > kMaxOracleGrid || grid.height() > kMaxOracleGrid) {
    throw Error(ErrorCode::OracleTooLarge, "dijkstra oracle limited to 64x64 grids");
  }
  check_endpoints(grid, start, goal);
  const int w = grid.width();
  const int states = w * grid.height() * 9;
  std::vector<Label> label(static_cast<std::size_t>(states));
  std::vector<char> done(static_cast<std::size_t>(states), 0);
  auto id = [&](int col, int row, int m) { return (row * w + col) * 9 + m; };

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  const int s0 = id(start.col, start.row, kNone);
  label[s0].cost = 0.0;
  heap.push({0.0, s0});
  while (!heap.empty()) {
    auto [cost, s] = heap.top();
    heap.pop();
    if (done[s]) continue;
    done[s] = 1;
    const int cell = s / 9;
    const int dir = s % 9;
    const int col = cell % w;
    const int row = cell / w;
    if (col == goal.col && row == goal.row) {
      const Label& l = label[s];
      return OraclePathCost{l.cost, l.card, l.diag, l.turns};
    }
    for (int m = 0; m < 8; ++m) {
      if (!can_move(grid, col, row, m)) continue;
      const int ns = id(col + kDc[m], row + kDr[m], m);
      if (done[ns]) continue;
      Label next = label[s];
      if (kDc[m] != 0 && kDr[m] != 0) {
        ++next.diag;
      } else {
        ++next.card;
      }
      if (dir != kNone && dir != m) ++next.turns;
      next.cost = path_cost(next.card, next.diag, next.turns, turn_penalty);
      if (next.cost < label[ns].cost) {
        label[ns] = next;
        heap.push({next.cost, ns});
      }
    }
  }
  return std::nullopt;
}

std::optional<OraclePathCost> exhaustive_path(const OccupancyGrid& grid, Cell start, Cell goal,
                                              double turn_penalty) {
  if (grid.width() > kMaxExhaustiveGrid || grid.height() > kMaxExhaustiveGrid) {
    throw Error(ErrorCode::OracleTooLarge, "exhaustive oracle limited to 8x8 grids");
  }
  check_endpoints(grid, start, goal);
  const int w = grid.width();
  std::vector<double> seen(static_cast<std::size_t>(w * grid.height() * 9),
                           std::numeric_limits<double>::infinity());
  std::optional<OraclePathCost> best;

  std::function<void(int, int, int, Label)> dfs = [&](int col, int row, int dir, Label l) {
    const int s = (row * w + col) * 9 + dir;
    if (l.cost >= seen[s]) return;
    seen[s] = l.cost;
    if (best && l.cost > best->cost) return;
    if (col == goal.col && row == goal.row) {
      if (!best || l.cost < best->cost) best = OraclePathCost{l.cost, l.card, l.diag, l.turns};
      return;
    }
    for (int m = 0; m < 8; ++m) {
      if (!can_move(grid, col, row, m)) continue;
      Label next = l;
      if (kDc[m] != 0 && kDr[m] != 0) {
        ++next.diag;
      } else {
        ++next.card;
      }
      if (dir != kNone && dir != m) ++next.turns;
      next.cost = path_cost(next.card, next.diag, next.turns, turn_penalty);
      dfs(col + kDc[m], row + kDr[m], m, next);
    }
  };
  dfs(start.col, start.row, kNone, Label{0.0, 0, 0, 0});
  return best;
}

std::optional<MarchHit> ray_march_hit(const Ray& ray, const Box3D& box, double step, double max_t) {
  if (!(step > 0.0) || max_t / step > static_cast<double>(kMaxMarchSteps)) {
    throw Error(ErrorCode::OracleTooLarge, "ray march exceeds 1e6 steps");
  }
  const Vec3 dir = ray.dir.normalized();
  auto inside_axis = [&](const Vec3& p, int a) { return p[a] >= box.min_corner[a] && p[a] <= box.max_corner[a]; };
  auto inside = [&](const Vec3& p) { return inside_axis(p, 0) && inside_axis(p, 1) && inside_axis(p, 2); };

  if (inside(ray.origin)) return MarchHit{0.0, BoxFace::Interior};
  const long n = static_cast<long>(std::floor(max_t / step));
  Vec3 prev = ray.origin;
  for (long i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) * step;
    const Vec3 p = ray.origin + t * dir;
    if (inside(p)) {
      // Among axes that were outside at the previous sample, the one whose
      // plane is crossed last is the entry face.
      int axis = -1;
      double latest = -1.0;
      bool positive = false;
      for (int a = 0; a < 3; ++a) {
        if (inside_axis(prev, a)) continue;
        const bool below = prev[a] < box.min_corner[a];
        const double plane = below ? box.min_corner[a] : box.max_corner[a];
        const double frac = (plane - prev[a]) / (p[a] - prev[a]);
        if (frac > latest) {
          latest = frac;
          axis = a;
          positive = !below;
        }
      }
      static constexpr BoxFace kNeg[3] = {BoxFace::NegX, BoxFace::NegY, BoxFace::NegZ};
      static constexpr BoxFace kPos[3] = {BoxFace::PosX, BoxFace::PosY, BoxFace::PosZ};
      const BoxFace face = axis < 0 ? BoxFace::Interior : (positive ? kPos[axis] : kNeg[axis]);
      return MarchHit{t, face};
    }
    prev = p;
  }
  return std::nullopt;
}

ChainScore exhaustive_chain_score(const std::vector<int>& nodes, const std::vector<Direction8>& edges,
                                  const std::vector<ActionChain>& truth) {
  ChainScore best;
  for (const ActionChain& chain : truth) {
    if (chain.node_ids.size() != nodes.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) same = same && chain.node_ids[i] == nodes[i];
    if (!same || chain.edges.size() != edges.size() || edges.empty()) continue;
    int strict = 0;
    int loose = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const double diff =
          std::abs(normalize_degrees(sector_center_degrees(edges[i]) - sector_center_degrees(chain.edges[i])));
      if (diff < 1.0) ++strict;
      if (diff < 46.0) ++loose;
    }
    const double denom = static_cast<double>(nodes.size() - 1);
    const double s = strict / denom;
    if (!best.act_correct || s > best.rel_s) {
      best = ChainScore{true, s, loose / denom};
    }
  }
  return best;
}

namespace {

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  const double area = cross(a, b, c);
  if (std::abs(area) < 1e-12) return false;
  const double sign = area > 0 ? 1.0 : -1.0;
  const double tol = -1e-9;
  return sign * cross(a, b, p) >= tol && sign * cross(b, c, p) >= tol && sign * cross(c, a, p) >= tol;
}

std::vector<Vec2> corners(const Box3D& box) {
  return {Vec2(box.min_corner.x(), box.min_corner.y()), Vec2(box.max_corner.x(), box.min_corner.y()),
          Vec2(box.max_corner.x(), box.max_corner.y()), Vec2(box.min_corner.x(), box.max_corner.y())};
}

}  // namespace

CellState cell_label(const Vec2& point, std::span<const Box3D> boxes) {
  std::vector<Vec2> all;
  for (const Box3D& box : boxes) {
    const std::vector<Vec2> c = corners(box);
    if (in_triangle(point, c[0], c[1], c[2]) || in_triangle(point, c[0], c[2], c[3])) return CellState::Obstacle;
    all.insert(all.end(), c.begin(), c.end());
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      for (std::size_t k = j + 1; k < all.size(); ++k) {
        if (in_triangle(point, all[i], all[j], all[k])) return CellState::Free;
      }
    }
  }
  return CellState::OutOfBounds;
}

namespace {

double angle_deg(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / 3.14159265358979323846;
}

double dispersion(std::span<const Vec3> dirs, std::size_t first, std::size_t last) {
  double worst = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    for (std::size_t j = first; j <= last; ++j) worst = std::max(worst, angle_deg(dirs[i], dirs[j]));
  }
  return worst;
}

}  // namespace

std::vector<FixationWindow> fixation_windows(std::span<const double> timestamps, std::span<const Vec3> directions,
                                             double dispersion_deg, double min_duration_s) {
  std::vector<FixationWindow> out;
  const std::size_t n = timestamps.size();
  const double limit = dispersion_deg + 1e-9;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && timestamps[j] - timestamps[i] < min_duration_s - 1e-9) ++j;
    if (j == n) break;
    if (dispersion(directions, i, j) > limit) {
      ++i;
      continue;
    }
    while (j + 1 < n && dispersion(directions, i, j + 1) <= limit) ++j;
    out.push_back({i, j});
    i = j + 1;
  }
  return out;
}

}  // namespace proxgen::oracle
