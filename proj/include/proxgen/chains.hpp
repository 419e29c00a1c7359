// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Keystep extraction and chain construction. A chain is an ordered list of
// keystep ids plus the egocentric direction of each hop, measured in the
// camera frame of the clip's last frame.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "proxgen/geometry.hpp"
#include "proxgen/rng.hpp"
#include "proxgen/scene.hpp"

namespace proxgen {

struct Keystep {
  int id = 0;
  std::string text;
  double start = 0.0;
  double end = 0.0;
  Vec3 location = Vec3::Zero();
};

// Mean hand position over skeleton samples with start <= t <= end. Each hand's
// position is the mean of its joints; with several hands the per-hand means
// are averaged. An empty `hands` list means both. Throws MissingLocation.
Vec3 mean_hand_location(std::span<const SkeletonSample> skeletons, double start, double end,
                        std::span<const Hand> hands);

// Annotations overlapping [window_start, window_end], ordered by onset then id.
std::vector<Keystep> extract_keysteps(const SceneStream& stream, double window_start, double window_end);
std::vector<Keystep> extract_keysteps(const SceneStream& stream, std::span<const KeystepAnnotation> annotations);

// Direction of each hop l_i -> l_{i+1} in the BEV frame of `reference`.
// Throws ZeroDisplacement when consecutive locations coincide within 1e-6 m.
std::vector<Direction8> edge_directions(std::span<const Vec3> locations, const RigidTransform& reference,
                                        const AxisConvention& convention = {});
std::vector<Direction8> edge_directions(std::span<const Keystep> steps, const RigidTransform& reference,
                                        const AxisConvention& convention = {});

struct ActionChain {
  std::vector<int> node_ids;
  std::vector<Direction8> edges;

  friend bool operator==(const ActionChain&, const ActionChain&) = default;
};

// Step `before` must precede step `after` (indices into the annotated order).
struct OrderConstraint {
  int before = 0;
  int after = 0;
};

struct ChainProposalRequest {
  std::string goal_text;
  std::vector<std::string> step_texts;  // annotated order
  std::vector<OrderConstraint> constraints;
  std::vector<std::pair<int, int>> independent_pairs;
};

// Proposes alternative orderings (permutations of 0..k-1). Must be safe to
// call concurrently.
class ChainOrderGenerator {
 public:
  virtual ~ChainOrderGenerator() = default;
  virtual std::vector<std::vector<int>> propose(const ChainProposalRequest& request) const = 0;
  virtual std::string name() const = 0;
};

// Proposes one swap per order-independent pair, in pair order.
class SwapIndependentGenerator : public ChainOrderGenerator {
 public:
  std::vector<std::vector<int>> propose(const ChainProposalRequest& request) const override;
  std::string name() const override { return "swap-independent"; }
};

// Pairs flagged order-independent in the annotations, as (i, j) with i < j.
std::vector<std::pair<int, int>> independent_pairs(std::span<const KeystepAnnotation> steps);
// Every pair not flagged order-independent keeps its annotated order.
std::vector<OrderConstraint> default_order_constraints(std::span<const KeystepAnnotation> steps);

bool satisfies_constraints(std::span<const int> order, std::span<const OrderConstraint> constraints);

inline constexpr std::size_t kMaxValidChains = 3;

// Annotated order first, then valid proposals in proposal order; duplicates and
// malformed or constraint-violating proposals are dropped and the result is
// truncated to kMaxValidChains. Node ids are the keystep ids. Throws
// ConstraintConflict when the annotated order itself violates a constraint.
std::vector<ActionChain> enumerate_valid_chains(std::span<const Keystep> true_steps,
                                                std::span<const OrderConstraint> constraints,
                                                const ChainOrderGenerator& generator,
                                                const RigidTransform& reference,
                                                std::span<const std::pair<int, int>> independent = {},
                                                const std::string& goal_text = {},
                                                const AxisConvention& convention = {});

inline constexpr std::size_t kCandidateSetSize = 10;

struct CandidateSet {
  std::vector<std::string> texts;  // id = index + 1
  std::vector<int> true_ids;       // candidate id of true step i
};

// True steps plus 10 - k distractors sampled from the pool, shuffled by the
// rng. Pool entries equal to a true step's text are ignored. Throws
// PoolExhausted.
CandidateSet build_candidate_set(std::span<const Keystep> true_steps, std::span<const std::string> distractor_pool,
                                 SeededRng& rng);

struct ChainGroundTruth {
  std::string goal_text;
  std::vector<std::string> candidates;
  int k = 0;
  std::vector<ActionChain> valid_chains;
};

// Rewrites keystep ids into candidate ids.
ActionChain remap_chain(const ActionChain& chain, std::span<const Keystep> true_steps, const CandidateSet& set);

}  // namespace proxgen
