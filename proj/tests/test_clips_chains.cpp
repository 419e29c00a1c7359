// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "proxgen/chains.hpp"
#include "proxgen/clip_sampler.hpp"
#include "proxgen/error.hpp"

using namespace proxgen;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// Camera looking along world +X; left is +Y.
RigidTransform facing_x() {
  RigidTransform p;
  p.rotation.col(0) = Vec3(0, -1, 0);
  p.rotation.col(1) = Vec3(0, 0, -1);
  p.rotation.col(2) = Vec3(1, 0, 0);
  return p;
}

// Camera looking along world +Y; left is -X.
RigidTransform facing_y() {
  RigidTransform p;
  p.rotation.col(0) = Vec3(1, 0, 0);
  p.rotation.col(1) = Vec3(0, 0, -1);
  p.rotation.col(2) = Vec3(0, 1, 0);
  return p;
}

SceneStream stream_of(double seconds, const std::function<Vec3(double)>& goal_center = {}) {
  SceneStream s;
  s.stream_id = "s0";
  s.scenario = "kitchen";
  const int n = static_cast<int>(seconds * 30.0);
  ObjectTrack goal;
  goal.object_id = "goal";
  goal.name = "mug";
  for (int i = 0; i < n; ++i) {
    Frame f;
    f.timestamp = i / 30.0;
    f.device_pose = facing_x();
    SkeletonSample sk;
    sk.timestamp = f.timestamp;
    sk.joints["left_hand_wrist"] = Vec3(0.1 * f.timestamp, 1, 1);
    sk.joints["right_hand_wrist"] = Vec3(0.1 * f.timestamp, -1, 1);
    f.skeleton = sk;
    s.frames.push_back(f);
    const Vec3 c = goal_center ? goal_center(f.timestamp) : Vec3(2, 0, 1);
    goal.boxes.push_back(Box3D::make(c - Vec3::Constant(0.1), c + Vec3::Constant(0.1), "goal"));
  }
  s.objects.push_back(goal);
  return s;
}

KeystepAnnotation step(int id, double start, double end) {
  KeystepAnnotation k;
  k.id = id;
  k.text = "step " + std::to_string(id);
  k.start = start;
  k.end = end;
  return k;
}

Keystep keystep_at(int id, const Vec3& location) {
  Keystep k;
  k.id = id;
  k.text = "step " + std::to_string(id);
  k.location = location;
  return k;
}

class AllPermutations : public ChainOrderGenerator {
 public:
  std::vector<std::vector<int>> propose(const ChainProposalRequest& request) const override {
    std::vector<int> order(request.step_texts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<std::vector<int>> out;
    while (std::next_permutation(order.begin(), order.end())) out.push_back(order);
    return out;
  }
  std::string name() const override { return "all"; }
};

}  // namespace

TEST_CASE("forecasting clip ends before the event") {
  const SceneStream s = stream_of(12.0);
  const ClipSpec clip = sample_forecasting_clip(s, {10.0, AnchorKind::Fixation}, Category::Intention, 4.0);
  CHECK(clip.start == doctest::Approx(6.0));
  CHECK(clip.end == doctest::Approx(10.0));
  CHECK(clip.first_frame == 180);
  CHECK(clip.last_frame == 299);
  CHECK(clip.frame_count() == 120);
  CHECK(s.frames[clip.last_frame].timestamp < 10.0);

  CHECK(code_of([&] { sample_forecasting_clip(s, {3.0, AnchorKind::Fixation}, Category::Intention, 4.0); }) ==
        ErrorCode::InsufficientHistory);
}

TEST_CASE("planning clip spans the last sighting") {
  const auto moves_behind = [](double t) { return t < 3.0 - 1e-9 ? Vec3(2, 0, 1) : Vec3(-2, 0, 1); };

  SUBCASE("sighting older than the minimum length") {
    const SceneStream s = stream_of(6.0, moves_behind);
    const ClipSpec clip = sample_planning_clip(s, "goal", Category::Exploration);
    CHECK(clip.last_frame == 179);
    CHECK(clip.first_frame == 89);
    CHECK(clip.anchor.kind == AnchorKind::GoalVisibility);
    CHECK(clip.goal_object_id == "goal");
  }
  SUBCASE("recent sighting is padded to the minimum length") {
    const SceneStream s = stream_of(4.0, moves_behind);
    const ClipSpec clip = sample_planning_clip(s, "goal", Category::Exploration);
    CHECK(clip.last_frame == 119);
    CHECK(clip.first_frame == 59);
  }
  SUBCASE("always visible") {
    const SceneStream s = stream_of(4.0);
    CHECK(code_of([&] { sample_planning_clip(s, "goal", Category::Exploration); }) == ErrorCode::NoValidWindow);
  }
  SUBCASE("unknown goal") {
    const SceneStream s = stream_of(4.0);
    CHECK(code_of([&] { sample_planning_clip(s, "nope", Category::Exploration); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("chain clip picks the densest placement") {
  SceneStream s = stream_of(41.0);
  s.keysteps = {step(0, 0, 5), step(1, 20, 21), step(2, 21, 22), step(3, 22, 23), step(4, 23, 24), step(5, 30, 40)};
  const ChainClip c = sample_chain_clip(s);
  REQUIRE(c.past.size() == 1);
  REQUIRE(c.future.size() == 3);
  CHECK(c.past[0].id == 1);
  CHECK(c.future[0].id == 2);
  CHECK(c.future[2].id == 4);
  CHECK(c.goal_text == "kitchen");
  CHECK(c.clip.start == doctest::Approx(20.0));
  CHECK(c.clip.end == doctest::Approx(21.0));
  CHECK(c.clip.first_frame == 600);
  CHECK(c.clip.last_frame == 629);
  CHECK(c.clip.category == Category::ChainOfActions);

  s.keysteps.resize(3);
  CHECK(code_of([&] { sample_chain_clip(s); }) == ErrorCode::TooFewKeysteps);
}

TEST_CASE("mean hand location") {
  std::vector<SkeletonSample> sk(2);
  sk[0].timestamp = 0.0;
  sk[0].joints = {{"left_hand_wrist", {0, 0, 0}}, {"left_hand_index", {0, 2, 0}}, {"right_hand_wrist", {2, 0, 0}}};
  sk[1].timestamp = 1.0;
  sk[1].joints = {{"left_hand_wrist", {0, 0, 0}}, {"left_hand_index", {0, 2, 0}}, {"right_hand_wrist", {4, 0, 0}}};

  CHECK(mean_hand_location(sk, 0.0, 1.0, {}).isApprox(Vec3(1.5, 0.5, 0)));
  const std::vector<Hand> right = {Hand::Right};
  CHECK(mean_hand_location(sk, 0.0, 1.0, right).isApprox(Vec3(3, 0, 0)));
  CHECK(mean_hand_location(sk, 0.5, 1.0, right).isApprox(Vec3(4, 0, 0)));
  CHECK(code_of([&] { mean_hand_location(sk, 2.0, 3.0, {}); }) == ErrorCode::MissingLocation);
}

TEST_CASE("keystep extraction uses the stream skeletons") {
  SceneStream s = stream_of(10.0);
  s.keysteps = {step(7, 4, 6), step(3, 1, 2)};
  const auto ks = extract_keysteps(s, 0.0, 10.0);
  REQUIRE(ks.size() == 2);
  CHECK(ks[0].id == 3);
  CHECK(ks[1].id == 7);
  CHECK(ks[1].location.x() == doctest::Approx(0.5).epsilon(0.01));
  CHECK(ks[1].location.y() == doctest::Approx(0.0));
  CHECK(extract_keysteps(s, 2.5, 3.5).empty());
}

TEST_CASE("edge directions") {
  const std::vector<Vec3> path = {{0, 0, 0}, {0, 1, 0}, {-1, 1, 0}, {-1, 0, 0}, {0, 1, 0}};
  const auto e = edge_directions(path, facing_y());
  REQUIRE(e.size() == 4);
  CHECK(e[0] == Direction8::Front);
  CHECK(e[1] == Direction8::Left);
  CHECK(e[2] == Direction8::Back);
  CHECK(e[3] == Direction8::FrontRight);

  const std::vector<Vec3> same = {{1, 1, 0}, {1, 1, 0}};
  CHECK(code_of([&] { edge_directions(same, facing_y()); }) == ErrorCode::ZeroDisplacement);
  const std::vector<Vec3> one = {{1, 1, 0}};
  CHECK(code_of([&] { edge_directions(one, facing_y()); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("valid chain enumeration") {
  const std::vector<Keystep> steps = {keystep_at(10, {0, 0, 0}), keystep_at(11, {0, 1, 0}),
                                      keystep_at(12, {1, 1, 0}), keystep_at(13, {1, 2, 0})};

  SUBCASE("one free pair gives two orders") {
    std::vector<KeystepAnnotation> ann = {step(10, 0, 1), step(11, 1, 2), step(12, 2, 3), step(13, 3, 4)};
    ann[1].order_independent_with = {12};
    const auto free_pairs = independent_pairs(ann);
    REQUIRE(free_pairs.size() == 1);
    CHECK(free_pairs[0] == std::pair<int, int>{1, 2});
    const auto constraints = default_order_constraints(ann);
    CHECK(constraints.size() == 5);

    const auto chains = enumerate_valid_chains(steps, constraints, SwapIndependentGenerator{}, facing_y(), free_pairs);
    REQUIRE(chains.size() == 2);
    CHECK(chains[0].node_ids == std::vector<int>{10, 11, 12, 13});
    CHECK(chains[1].node_ids == std::vector<int>{10, 12, 11, 13});
    CHECK(chains[0].edges == std::vector<Direction8>{Direction8::Front, Direction8::Right, Direction8::Front});
    CHECK(chains[1].edges == std::vector<Direction8>{Direction8::FrontRight, Direction8::Left, Direction8::FrontRight});
  }
  SUBCASE("at most three chains") {
    const auto chains = enumerate_valid_chains(steps, {}, AllPermutations{}, facing_y());
    REQUIRE(chains.size() == kMaxValidChains);
    CHECK(chains[0].node_ids == std::vector<int>{10, 11, 12, 13});
    std::set<std::vector<int>> distinct;
    for (const auto& c : chains) distinct.insert(c.node_ids);
    CHECK(distinct.size() == 3);
  }
  SUBCASE("constraints filter proposals") {
    const std::vector<OrderConstraint> fixed = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(enumerate_valid_chains(steps, fixed, AllPermutations{}, facing_y()).size() == 1);
    const std::vector<OrderConstraint> conflict = {{3, 0}};
    CHECK(code_of([&] { enumerate_valid_chains(steps, conflict, AllPermutations{}, facing_y()); }) ==
          ErrorCode::ConstraintConflict);
  }
  SUBCASE("length limits") {
    const std::vector<Keystep> two(steps.begin(), steps.begin() + 2);
    CHECK(code_of([&] { enumerate_valid_chains(two, {}, AllPermutations{}, facing_y()); }) ==
          ErrorCode::InvalidArgument);
  }
}

TEST_CASE("candidate set") {
  const std::vector<Keystep> steps = {keystep_at(1, {0, 0, 0}), keystep_at(2, {0, 1, 0}), keystep_at(3, {1, 1, 0})};
  std::vector<std::string> pool = {"step 1"};
  for (int i = 0; i < 12; ++i) pool.push_back("distractor " + std::to_string(i));

  SeededRng rng(42);
  const CandidateSet set = build_candidate_set(steps, pool, rng);
  REQUIRE(set.texts.size() == kCandidateSetSize);
  REQUIRE(set.true_ids.size() == 3);
  CHECK(std::set<std::string>(set.texts.begin(), set.texts.end()).size() == kCandidateSetSize);
  int distractors = 0;
  for (const auto& t : set.texts) distractors += t.rfind("distractor", 0) == 0 ? 1 : 0;
  CHECK(distractors == 7);
  for (std::size_t i = 0; i < 3; ++i) CHECK(set.texts[set.true_ids[i] - 1] == steps[i].text);

  SeededRng again(42);
  CHECK(build_candidate_set(steps, pool, again).texts == set.texts);

  const ActionChain chain{{3, 1, 2}, {Direction8::Left, Direction8::Front}};
  const ActionChain mapped = remap_chain(chain, steps, set);
  CHECK(mapped.node_ids == std::vector<int>{set.true_ids[2], set.true_ids[0], set.true_ids[1]});
  CHECK(mapped.edges == chain.edges);

  pool.resize(7);
  SeededRng short_rng(1);
  CHECK(code_of([&] { build_candidate_set(steps, pool, short_rng); }) == ErrorCode::PoolExhausted);
}
