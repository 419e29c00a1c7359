// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "proxgen/error.hpp"
#include "proxgen/oracles.hpp"
#include "proxgen/perception.hpp"
#include "proxgen/rng.hpp"

using namespace proxgen;

namespace {

Vec3 yawed(double deg) {
  const double a = deg * std::numbers::pi / 180.0;
  return Vec3(std::cos(a), std::sin(a), 0.0);
}

RigidTransform level_camera(double yaw_deg, const Vec3& t = Vec3::Zero()) {
  const Vec3 f = yawed(yaw_deg);
  RigidTransform p;
  p.rotation.col(2) = f;
  p.rotation.col(1) = Vec3(0, 0, -1);
  p.rotation.col(0) = p.rotation.col(1).cross(f);
  p.translation = t;
  return p;
}

std::vector<TrackSample> track_of(const std::function<Vec3(double)>& center, double seconds) {
  std::vector<TrackSample> out;
  for (int i = 0; i <= static_cast<int>(std::round(seconds * 30.0)); ++i) {
    const double t = i / 30.0;
    const Vec3 c = center(t);
    out.push_back({t, Box3D::make(c - Vec3::Constant(0.1), c + Vec3::Constant(0.1), "obj")});
  }
  return out;
}

std::vector<SkeletonSample> hands_at(const std::function<Vec3(double)>& hand, double seconds) {
  std::vector<SkeletonSample> out;
  for (int i = 0; i <= static_cast<int>(std::round(seconds * 30.0)); ++i) {
    SkeletonSample s;
    s.timestamp = i / 30.0;
    s.joints["right_hand_wrist"] = hand(s.timestamp);
    s.joints["head"] = Vec3(0, 0, 1.6);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("gaze ray in world frame") {
  const Ray r0 = gaze_ray_world(GazeSample::make(0, Vec3::UnitZ()), RigidTransform::identity());
  CHECK(r0.origin.isZero());
  CHECK(r0.dir.isApprox(Vec3::UnitZ()));

  const RigidTransform yaw = RigidTransform::from_yaw(90.0);
  const Ray r1 = gaze_ray_world(GazeSample::make(0, Vec3::UnitX()), yaw);
  CHECK((r1.dir - Vec3::UnitY()).norm() < 1e-12);

  const Ray r2 = gaze_ray_world(GazeSample::make(0, Vec3(0, 0.6, 0.8)), RigidTransform::from_translation({1, 2, 3}));
  CHECK(r2.origin == Vec3(1, 2, 3));
  CHECK(r2.dir.isApprox(Vec3(0, 0.6, 0.8)));

  CHECK_THROWS_AS(GazeSample::make(0, Vec3(0, 3, 4)), Error);
}

TEST_CASE("ray box intersection") {
  const Box3D b = Box3D::make({2, -1, -1}, {3, 1, 1});
  const auto hit = ray_box_intersect({Vec3::Zero(), Vec3::UnitX()}, b);
  REQUIRE(hit);
  CHECK(hit->t == doctest::Approx(2.0));
  CHECK(hit->hit_point.isApprox(Vec3(2, 0, 0)));
  CHECK(hit->face == BoxFace::NegX);
  CHECK_FALSE(ray_box_intersect({Vec3::Zero(), Vec3::UnitZ()}, b));

  const auto inside = ray_box_intersect({Vec3(2.5, 0, 0), Vec3::UnitY()}, b);
  REQUIRE(inside);
  CHECK(inside->t == 0.0);
  CHECK(inside->face == BoxFace::Interior);

  const auto march = oracle::ray_march_hit({Vec3::Zero(), Vec3::UnitX()}, b);
  REQUIRE(march);
  CHECK(std::abs(march->t - 2.0) <= 1e-3);
  CHECK(march->face == BoxFace::NegX);
}

TEST_CASE("closest visible box wins") {
  const std::vector<Box3D> boxes = {Box3D::make({5, -1, -1}, {6, 1, 1}, "far"),
                                    Box3D::make({2, -1, -1}, {3, 1, 1}, "near")};
  const Ray ray{Vec3::Zero(), Vec3::UnitX()};
  const auto both = resolve_fixated_object(ray, boxes, [](const Box3D&) { return true; });
  REQUIRE(both);
  CHECK(both->object_id == "near");
  CHECK(both->t == doctest::Approx(2.0));

  const auto filtered = resolve_fixated_object(ray, boxes, [](const Box3D& b) { return b.object_id != "near"; });
  REQUIRE(filtered);
  CHECK(filtered->object_id == "far");

  CHECK_FALSE(resolve_fixated_object({Vec3::Zero(), Vec3::UnitZ()}, boxes, {}));
}

TEST_CASE("fixation detection") {
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(i / 30.0);  // 400 ms

  SUBCASE("constant gaze") {
    const std::vector<Vec3> dirs(ts.size(), Vec3::UnitX());
    const auto ev = detect_fixations_world(ts, dirs);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].first_sample == 0);
    CHECK(ev[0].last_sample == ts.size() - 1);
  }
  SUBCASE("sweep") {
    std::vector<Vec3> dirs;
    for (std::size_t i = 0; i < ts.size(); ++i) dirs.push_back(yawed(30.0 * static_cast<double>(i) / 12.0));
    CHECK(detect_fixations_world(ts, dirs).empty());
  }
  SUBCASE("two windows split by a saccade") {
    std::vector<double> t2;
    std::vector<Vec3> dirs;
    for (int i = 0; i < 30; ++i) {
      t2.push_back(i / 30.0);
      dirs.push_back(i < 14 ? yawed(0.3 * (i % 3)) : i < 16 ? yawed(10.0 * (i - 13)) : yawed(25.0 + 0.2 * (i % 2)));
    }
    const auto ev = detect_fixations_world(t2, dirs);
    const auto want = oracle::fixation_windows(t2, dirs, 2.0, 0.3);
    REQUIRE(ev.size() == 2);
    REQUIRE(want.size() == ev.size());
    for (std::size_t k = 0; k < ev.size(); ++k) {
      CHECK(ev[k].first_sample == want[k].first);
      CHECK(ev[k].last_sample == want[k].last);
    }
  }
  SUBCASE("random streams agree with the oracle") {
    SeededRng rng(17);
    for (int s = 0; s < 40; ++s) {
      std::vector<double> t3;
      std::vector<Vec3> dirs;
      double yaw = 0.0;
      for (int i = 0; i < 90; ++i) {
        t3.push_back(i / 30.0);
        yaw += rng.uniform01() < 0.08 ? rng.uniform(-20.0, 20.0) : rng.uniform(-0.6, 0.6);
        dirs.push_back(yawed(yaw));
      }
      const auto ev = detect_fixations_world(t3, dirs);
      const auto want = oracle::fixation_windows(t3, dirs, 2.0, 0.3);
      REQUIRE(ev.size() == want.size());
      for (std::size_t k = 0; k < ev.size(); ++k) {
        CHECK(ev[k].first_sample == want[k].first);
        CHECK(ev[k].last_sample == want[k].last);
      }
    }
  }
  SUBCASE("too short") {
    const std::vector<double> t4 = {0.0, 0.1};
    const std::vector<Vec3> d4(2, Vec3::UnitX());
    CHECK_THROWS_AS(detect_fixations_world(t4, d4), Error);
  }
}

TEST_CASE("interaction detection") {
  const auto far_hand = [](double) { return Vec3(-5, 0, 1); };
  SUBCASE("fast enough") {
    const auto ev = detect_interaction(track_of([](double t) { return Vec3(0.10 * t, 0, 0.5); }, 2.0),
                                       hands_at(far_hand, 2.0));
    REQUIRE(ev);
    CHECK(ev->evidence == InteractionEvidence::Velocity);
  }
  SUBCASE("too slow") {
    CHECK_FALSE(detect_interaction(track_of([](double t) { return Vec3(0.02 * t, 0, 0.5); }, 2.0),
                                   hands_at(far_hand, 2.0)));
  }
  SUBCASE("hand enters the box") {
    const auto hand = [](double t) { return t >= 3.2 - 1e-9 ? Vec3(0, 0, 0.5) : Vec3(1, 0, 0.5); };
    const auto ev = detect_interaction(track_of([](double) { return Vec3(0, 0, 0.5); }, 4.0), hands_at(hand, 4.0));
    REQUIRE(ev);
    CHECK(ev->onset == doctest::Approx(3.2));
    CHECK(ev->evidence == InteractionEvidence::HandContainment);
  }
  SUBCASE("not_before skips earlier events") {
    const auto hand = [](double t) { return t < 1.0 || t > 3.0 ? Vec3(0, 0, 0.5) : Vec3(1, 0, 0.5); };
    const auto ev = detect_interaction(track_of([](double) { return Vec3(0, 0, 0.5); }, 4.0), hands_at(hand, 4.0),
                                       {}, 2.0);
    REQUIRE(ev);
    CHECK(ev->onset > 3.0);
  }
}

TEST_CASE("visibility") {
  const RigidTransform cam = level_camera(0.0);
  CHECK(is_visible(cam, {2, 0, 0}));
  CHECK_FALSE(is_visible(cam, {-2, 0, 0}));
  CHECK_FALSE(is_visible(cam, yawed(76.0) * 2.0));
  CHECK(is_visible(cam, yawed(74.0) * 2.0));
  CHECK_FALSE(is_visible(cam, {9, 0, 0}));
}

TEST_CASE("affordance answers") {
  const RigidTransform cam = level_camera(90.0);  // forward +Y
  const AffordAnswer a = afford_answer(cam, {0, 2, 0});
  CHECK(a.direction == Direction8::Front);
  CHECK(a.distance == doctest::Approx(2.0));

  // Camera-left is -X; move by +0.5 forward and +0.5 left.
  CHECK(place_answer(cam, {-1, 0, 0}, {-1.5, 0.5, 0}) == Direction8::FrontLeft);

  const RigidTransform right_turn = level_camera(0.0);
  CHECK(action_answer(cam, right_turn).degrees == doctest::Approx(-90.0));

  AffordanceContext ctx;
  ctx.pose_last = cam;
  ctx.object_center_last = Vec3(0, 2, 0);
  CHECK_THROWS_AS(affordance_answer(InteractionKind::Place, ctx), Error);
  CHECK(std::holds_alternative<AffordAnswer>(affordance_answer(InteractionKind::Afford, ctx)));
}
