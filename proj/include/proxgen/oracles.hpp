// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Slow reference implementations used only by tests. Each one follows the
// naive definition of the fast routine it checks and shares no code with it
// beyond the basic value types.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxgen/chains.hpp"
#include "proxgen/geometry.hpp"
#include "proxgen/occupancy.hpp"
#include "proxgen/perception.hpp"

namespace proxgen::oracle {

inline constexpr int kMaxOracleGrid = 64;
inline constexpr int kMaxExhaustiveGrid = 8;
inline constexpr long kMaxMarchSteps = 1000000;

struct OraclePathCost {
  double cost = 0.0;
  int cardinal_moves = 0;
  int diagonal_moves = 0;
  int direction_changes = 0;
};

// Dijkstra over (cell, incoming move) states with a plain binary heap.
// nullopt when the goal cannot be reached. Throws OracleTooLarge above 64x64.
std::optional<OraclePathCost> dijkstra_path(const OccupancyGrid& grid, Cell start, Cell goal,
                                            double turn_penalty);

// Depth-first enumeration of move sequences, pruned only by dominance on
// (cell, incoming move). Throws OracleTooLarge above 8x8.
std::optional<OraclePathCost> exhaustive_path(const OccupancyGrid& grid, Cell start, Cell goal,
                                              double turn_penalty);

struct MarchHit {
  double t = 0.0;
  BoxFace face = BoxFace::Interior;
};

// Walks the ray in fixed steps until a sample lands inside the closed box.
// The entry face is the axis whose slab was entered last between the two
// samples. Throws OracleTooLarge when max_t / step exceeds 1e6.
std::optional<MarchHit> ray_march_hit(const Ray& ray, const Box3D& box, double step = 1e-4,
                                      double max_t = 50.0);

struct ChainScore {
  bool act_correct = false;
  double rel_s = 0.0;
  double rel_l = 0.0;
};

// Scores a predicted chain against every ground-truth chain and keeps the
// best strict score among exact node matches. Loose adjacency is judged by
// sector-center angle difference.
ChainScore exhaustive_chain_score(const std::vector<int>& nodes, const std::vector<Direction8>& edges,
                                  const std::vector<ActionChain>& truth);

// Label of a ground point: inside some footprint triangle -> Obstacle, inside
// some triangle spanned by three footprint corners of any boxes -> Free,
// otherwise OutOfBounds.
CellState cell_label(const Vec2& point, std::span<const Box3D> boxes);

struct FixationWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

// Left-to-right scan that, for every candidate start, recomputes the full
// pairwise dispersion of each extension from scratch.
std::vector<FixationWindow> fixation_windows(std::span<const double> timestamps, std::span<const Vec3> directions,
                                             double dispersion_deg, double min_duration_s);

}  // namespace proxgen::oracle
