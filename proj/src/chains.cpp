// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/chains.hpp"

#include <algorithm>
#include <set>

#include "proxgen/error.hpp"

namespace proxgen {

namespace {

constexpr double kZeroDisplacement = 1e-6;

bool joint_of_hand(const std::string& joint, Hand hand) {
  const std::string_view prefix = hand == Hand::Left ? "left_hand" : "right_hand";
  return joint.compare(0, prefix.size(), prefix) == 0;
}

bool is_permutation_of_k(const std::vector<int>& order, std::size_t k) {
  if (order.size() != k) return false;
  std::vector<bool> seen(k, false);
  for (int i : order) {
    if (i < 0 || static_cast<std::size_t>(i) >= k || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

}  // namespace

Vec3 mean_hand_location(std::span<const SkeletonSample> skeletons, double start, double end,
                        std::span<const Hand> hands) {
  std::vector<Hand> wanted(hands.begin(), hands.end());
  if (wanted.empty()) wanted = {Hand::Left, Hand::Right};

  Vec3 total = Vec3::Zero();
  int hands_found = 0;
  for (Hand hand : wanted) {
    Vec3 sum = Vec3::Zero();
    int samples = 0;
    for (const SkeletonSample& s : skeletons) {
      if (s.timestamp < start || s.timestamp > end) continue;
      Vec3 joint_sum = Vec3::Zero();
      int joints = 0;
      for (const auto& [name, p] : s.joints) {
        if (!joint_of_hand(name, hand)) continue;
        joint_sum += p;
        ++joints;
      }
      if (joints == 0) continue;
      sum += joint_sum / joints;
      ++samples;
    }
    if (samples == 0) continue;
    total += sum / samples;
    ++hands_found;
  }
  if (hands_found == 0) {
    throw Error(ErrorCode::MissingLocation, "no hand skeleton samples in [" + std::to_string(start) + ", " +
                                                std::to_string(end) + "]");
  }
  return total / hands_found;
}

std::vector<Keystep> extract_keysteps(const SceneStream& stream, std::span<const KeystepAnnotation> annotations) {
  std::vector<KeystepAnnotation> sorted(annotations.begin(), annotations.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.start < b.start || (a.start == b.start && a.id < b.id);
  });
  const std::vector<SkeletonSample> skeletons = stream.skeletons();
  std::vector<Keystep> out;
  out.reserve(sorted.size());
  for (const KeystepAnnotation& a : sorted) {
    if (a.text.empty()) throw Error(ErrorCode::InvalidArgument, "keystep " + std::to_string(a.id) + " has no text");
    Keystep k;
    k.id = a.id;
    k.text = a.text;
    k.start = a.start;
    k.end = a.end;
    try {
      k.location = mean_hand_location(skeletons, a.start, a.end, a.hands);
    } catch (const Error& e) {
      throw Error(ErrorCode::MissingLocation, "keystep " + std::to_string(a.id) + ": " + e.detail());
    }
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Keystep> extract_keysteps(const SceneStream& stream, double window_start, double window_end) {
  std::vector<KeystepAnnotation> overlapping;
  for (const KeystepAnnotation& a : stream.keysteps) {
    if (a.end >= window_start && a.start <= window_end) overlapping.push_back(a);
  }
  return extract_keysteps(stream, overlapping);
}

std::vector<Direction8> edge_directions(std::span<const Vec3> locations, const RigidTransform& reference,
                                        const AxisConvention& convention) {
  if (locations.size() < 2) throw Error(ErrorCode::InvalidArgument, "edge_directions needs >= 2 steps");
  std::vector<Direction8> out;
  out.reserve(locations.size() - 1);
  for (std::size_t i = 0; i + 1 < locations.size(); ++i) {
    const Vec3 delta = locations[i + 1] - locations[i];
    if (delta.norm() < kZeroDisplacement) {
      throw Error(ErrorCode::ZeroDisplacement,
                  "steps " + std::to_string(i) + " and " + std::to_string(i + 1) + " share a location");
    }
    out.push_back(discretize_direction(bev_heading_angle(reference, delta, convention)));
  }
  return out;
}

std::vector<Direction8> edge_directions(std::span<const Keystep> steps, const RigidTransform& reference,
                                        const AxisConvention& convention) {
  std::vector<Vec3> locations;
  locations.reserve(steps.size());
  for (const Keystep& s : steps) locations.push_back(s.location);
  return edge_directions(locations, reference, convention);
}

std::vector<std::vector<int>> SwapIndependentGenerator::propose(const ChainProposalRequest& request) const {
  std::vector<std::vector<int>> out;
  const int k = static_cast<int>(request.step_texts.size());
  for (const auto& [i, j] : request.independent_pairs) {
    if (i < 0 || j < 0 || i >= k || j >= k || i == j) continue;
    std::vector<int> order(k);
    for (int n = 0; n < k; ++n) order[n] = n;
    std::swap(order[i], order[j]);
    out.push_back(std::move(order));
  }
  return out;
}

std::vector<std::pair<int, int>> independent_pairs(std::span<const KeystepAnnotation> steps) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      const auto& a = steps[i].order_independent_with;
      const auto& b = steps[j].order_independent_with;
      const bool flagged = std::find(a.begin(), a.end(), steps[j].id) != a.end() ||
                           std::find(b.begin(), b.end(), steps[i].id) != b.end();
      if (flagged) out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return out;
}

std::vector<OrderConstraint> default_order_constraints(std::span<const KeystepAnnotation> steps) {
  const auto free_pairs = independent_pairs(steps);
  std::vector<OrderConstraint> out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      const std::pair<int, int> p{static_cast<int>(i), static_cast<int>(j)};
      if (std::find(free_pairs.begin(), free_pairs.end(), p) == free_pairs.end()) {
        out.push_back(OrderConstraint{p.first, p.second});
      }
    }
  }
  return out;
}

bool satisfies_constraints(std::span<const int> order, std::span<const OrderConstraint> constraints) {
  std::vector<int> position(order.size(), -1);
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (order[p] >= 0 && static_cast<std::size_t>(order[p]) < order.size()) position[order[p]] = static_cast<int>(p);
  }
  for (const OrderConstraint& c : constraints) {
    if (c.before < 0 || c.after < 0 || static_cast<std::size_t>(c.before) >= order.size() ||
        static_cast<std::size_t>(c.after) >= order.size()) {
      continue;
    }
    if (position[c.before] > position[c.after]) return false;
  }
  return true;
}

std::vector<ActionChain> enumerate_valid_chains(std::span<const Keystep> true_steps,
                                                std::span<const OrderConstraint> constraints,
                                                const ChainOrderGenerator& generator,
                                                const RigidTransform& reference,
                                                std::span<const std::pair<int, int>> independent,
                                                const std::string& goal_text, const AxisConvention& convention) {
  const std::size_t k = true_steps.size();
  if (k < 3 || k > 5) throw Error(ErrorCode::InvalidArgument, "chains need 3-5 steps, got " + std::to_string(k));

  std::vector<int> annotated(k);
  for (std::size_t i = 0; i < k; ++i) annotated[i] = static_cast<int>(i);
  if (!satisfies_constraints(annotated, constraints)) {
    throw Error(ErrorCode::ConstraintConflict, "annotated order violates the declared order constraints");
  }

  ChainProposalRequest request;
  request.goal_text = goal_text;
  for (const Keystep& s : true_steps) request.step_texts.push_back(s.text);
  request.constraints.assign(constraints.begin(), constraints.end());
  request.independent_pairs.assign(independent.begin(), independent.end());

  std::vector<std::vector<int>> orders{annotated};
  for (std::vector<int>& proposal : generator.propose(request)) {
    if (orders.size() >= kMaxValidChains) break;
    if (!is_permutation_of_k(proposal, k)) continue;
    if (!satisfies_constraints(proposal, constraints)) continue;
    if (std::find(orders.begin(), orders.end(), proposal) != orders.end()) continue;
    orders.push_back(std::move(proposal));
  }

  std::vector<ActionChain> out;
  out.reserve(orders.size());
  for (const std::vector<int>& order : orders) {
    ActionChain chain;
    std::vector<Vec3> locations;
    for (int i : order) {
      chain.node_ids.push_back(true_steps[i].id);
      locations.push_back(true_steps[i].location);
    }
    chain.edges = edge_directions(locations, reference, convention);
    out.push_back(std::move(chain));
  }
  return out;
}

CandidateSet build_candidate_set(std::span<const Keystep> true_steps, std::span<const std::string> distractor_pool,
                                 SeededRng& rng) {
  const std::size_t k = true_steps.size();
  if (k == 0 || k > kCandidateSetSize) {
    throw Error(ErrorCode::InvalidArgument, "candidate set needs 1-10 true steps, got " + std::to_string(k));
  }
  std::set<std::string> taken;
  for (const Keystep& s : true_steps) {
    if (!taken.insert(s.text).second) throw Error(ErrorCode::InvalidArgument, "duplicate step text '" + s.text + "'");
  }
  std::vector<std::string> pool;
  for (const std::string& text : distractor_pool) {
    if (taken.count(text)) continue;
    if (std::find(pool.begin(), pool.end(), text) == pool.end()) pool.push_back(text);
  }
  const std::size_t need = kCandidateSetSize - k;
  if (pool.size() < need) {
    throw Error(ErrorCode::PoolExhausted, "distractor pool has " + std::to_string(pool.size()) + " usable texts, need " +
                                              std::to_string(need));
  }

  // Entries 0..k-1 are the true steps, the rest distractors.
  std::vector<std::string> entries;
  for (const Keystep& s : true_steps) entries.push_back(s.text);
  for (std::size_t i : rng.sample_indices(pool.size(), need)) entries.push_back(pool[i]);

  std::vector<std::size_t> perm(kCandidateSetSize);
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(perm);

  CandidateSet set;
  set.true_ids.assign(k, 0);
  for (std::size_t slot = 0; slot < perm.size(); ++slot) {
    set.texts.push_back(entries[perm[slot]]);
    if (perm[slot] < k) set.true_ids[perm[slot]] = static_cast<int>(slot) + 1;
  }
  return set;
}

ActionChain remap_chain(const ActionChain& chain, std::span<const Keystep> true_steps, const CandidateSet& set) {
  ActionChain out;
  out.edges = chain.edges;
  for (int id : chain.node_ids) {
    auto it = std::find_if(true_steps.begin(), true_steps.end(), [id](const Keystep& s) { return s.id == id; });
    if (it == true_steps.end()) throw Error(ErrorCode::InvalidArgument, "chain node " + std::to_string(id) + " is not a true step");
    out.node_ids.push_back(set.true_ids[static_cast<std::size_t>(it - true_steps.begin())]);
  }
  return out;
}

}  // namespace proxgen
