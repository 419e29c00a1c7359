// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include <Eigen/Geometry>

#include "proxgen/error.hpp"
#include "proxgen/geometry.hpp"
#include "proxgen/rng.hpp"

using namespace proxgen;

namespace {

// Camera looking along world +Y: columns right, down, forward.
RigidTransform looking_along_y(const Vec3& t = Vec3::Zero()) {
  RigidTransform p;
  p.rotation.col(0) = Vec3(1, 0, 0);
  p.rotation.col(1) = Vec3(0, 0, -1);
  p.rotation.col(2) = Vec3(0, 1, 0);
  p.translation = t;
  return p;
}

RigidTransform random_pose(SeededRng& rng) {
  const Vec3 axis = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)).normalized();
  RigidTransform p;
  p.rotation = Eigen::AngleAxisd(rng.uniform(-3.0, 3.0), axis).toRotationMatrix();
  p.translation = Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
  return p;
}

}  // namespace

TEST_CASE("box center is the corner midpoint") {
  CHECK(box_center(Box3D::make({0, 0, 0}, {2, 4, 1})).isApprox(Vec3(1, 2, 0.5)));
  CHECK(box_center(Box3D::make({-1, -1, -1}, {1, 1, 1})).isZero());
  CHECK(box_center(Box3D::make({3, 3, 3}, {3, 3, 3})) == Vec3(3, 3, 3));
  CHECK_THROWS_AS(Box3D::make({1, 0, 0}, {0, 1, 1}), Error);
}

TEST_CASE("compose") {
  const RigidTransform id = compose(RigidTransform::identity(), RigidTransform::identity());
  CHECK(id.rotation.isIdentity());
  CHECK(id.translation.isZero());

  const RigidTransform t = compose(RigidTransform::from_translation({1, 0, 0}), RigidTransform::from_translation({0, 2, 0}));
  CHECK(t.translation.isApprox(Vec3(1, 2, 0)));

  const RigidTransform a = RigidTransform::from_yaw(90.0);
  const RigidTransform twice = compose(a, a);
  for (const Vec3& e : {Vec3::UnitX().eval(), Vec3::UnitY().eval(), Vec3::UnitZ().eval()}) {
    CHECK((twice.apply(e) - a.apply(a.apply(e))).norm() < 1e-12);
  }
  CHECK((twice.apply(Vec3::UnitX()) - Vec3(-1, 0, 0)).norm() < 1e-12);

  RigidTransform bad;
  bad.rotation(0, 0) = 2.0;
  CHECK_FALSE(bad.is_orthonormal());
  try {
    compose(bad, a);
    FAIL("expected OrthonormalityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OrthonormalityViolation);
  }
}

TEST_CASE("camera center of a composed pose") {
  CHECK(camera_center(RigidTransform::identity()).isZero());
  CHECK(camera_center(RigidTransform::from_translation({2, 3, 1})) == Vec3(2, 3, 1));
  const RigidTransform device = RigidTransform::from_translation({1, 0, 0});
  const RigidTransform offset = RigidTransform::from_translation({0, 1, 0});
  CHECK(camera_center(compose(device, offset)).isApprox(Vec3(1, 1, 0)));
}

TEST_CASE("bev projection and distance") {
  CHECK(bev_project({1, 2, 3}) == Vec2(1, 2));
  CHECK(bev_project({0, 0, 5}) == Vec2(0, 0));
  CHECK(bev_project({-3, 4, 0}) == Vec2(-3, 4));
  CHECK(euclidean_distance({0, 0, 0}, {3, 4, 0}) == doctest::Approx(5.0));
  CHECK(euclidean_distance({1, 1, 1}, {1, 1, 1}) == 0.0);
  CHECK(euclidean_distance({1, 1, 1}, {2, 3, 6}) == doctest::Approx(std::sqrt(30.0)));
}

TEST_CASE("bev signed angle") {
  const RigidTransform cam = looking_along_y();
  CHECK(bev_signed_angle(cam, {0, 5, 0}).degrees == doctest::Approx(0.0));
  CHECK(bev_signed_angle(cam, {1, 1, 0}).degrees == doctest::Approx(-45.0));
  CHECK(bev_signed_angle(cam, {0, -3, 0}).degrees == doctest::Approx(180.0));
  CHECK(bev_signed_angle(cam, {-1, 1, 0}).degrees == doctest::Approx(45.0));

  SUBCASE("degenerate inputs") {
    try {
      bev_signed_angle(cam, {0, 0, 3});
      FAIL("expected DegenerateTarget");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateTarget);
    }
    RigidTransform up;
    up.rotation.col(0) = Vec3(1, 0, 0);
    up.rotation.col(1) = Vec3(0, 1, 0);
    up.rotation.col(2) = Vec3(0, 0, 1);
    try {
      bev_signed_angle(up, {1, 0, 0});
      FAIL("expected DegenerateForward");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateForward);
    }
  }
}

TEST_CASE("sector table") {
  CHECK(discretize_direction({0.0}) == Direction8::Front);
  CHECK(discretize_direction({-45.0}) == Direction8::FrontRight);
  CHECK(discretize_direction({22.5}) == Direction8::FrontLeft);
  CHECK(discretize_direction({-22.5}) == Direction8::Front);
  CHECK(discretize_direction({157.5}) == Direction8::Back);
  CHECK(discretize_direction({180.0}) == Direction8::Back);
  CHECK(discretize_direction({-157.5}) == Direction8::BackRight);
  CHECK(discretize_direction({-157.4999}) == Direction8::BackRight);
  CHECK(discretize_direction({-157.5001}) == Direction8::Back);
  for (Direction8 d : kAllDirections) {
    CHECK(discretize_direction({sector_center_degrees(d)}) == d);
    CHECK(parse_direction_name(direction_name(d)) == d);
    CHECK(direction_from_letter(direction_letter(d)) == d);
  }
}

TEST_CASE("letters and ring") {
  CHECK(direction_letter(Direction8::Right) == 'A');
  CHECK(direction_letter(Direction8::Left) == 'B');
  CHECK(direction_letter(Direction8::Front) == 'C');
  CHECK(direction_letter(Direction8::Back) == 'D');
  CHECK(direction_letter(Direction8::FrontRight) == 'E');
  CHECK(direction_letter(Direction8::FrontLeft) == 'F');
  CHECK(direction_letter(Direction8::BackLeft) == 'G');
  CHECK(direction_letter(Direction8::BackRight) == 'H');
  CHECK(ring_distance(Direction8::Front, Direction8::FrontRight) == 1);
  CHECK(ring_distance(Direction8::FrontLeft, Direction8::FrontRight) == 2);
  CHECK(ring_distance(Direction8::Front, Direction8::Back) == 4);
  CHECK(direction_phrase(Direction8::BackLeft) == "back-left");
}

TEST_CASE("angle normalization") {
  CHECK(normalize_degrees(-180.0) == 180.0);
  CHECK(normalize_degrees(540.0) == doctest::Approx(180.0));
  CHECK(normalize_degrees(-190.0) == doctest::Approx(170.0));
  SeededRng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-179.0, 179.0);
    const int k = static_cast<int>(rng.uniform_index(7)) - 3;
    CHECK(discretize_direction({normalize_degrees(a + 360.0 * k)}) == discretize_direction({a}));
  }
}

TEST_CASE("geometry properties") {
  SeededRng rng(11);
  for (int i = 0; i < 300; ++i) {
    const Vec3 a(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9));
    const Vec3 b(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9));
    const Vec3 c(rng.uniform(-9, 9), rng.uniform(-9, 9), rng.uniform(-9, 9));
    CHECK(euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9);

    const RigidTransform p = random_pose(rng);
    const RigidTransform q = random_pose(rng);
    const RigidTransform r = random_pose(rng);
    const RigidTransform left = compose(compose(p, q), r);
    const RigidTransform right = compose(p, compose(q, r));
    CHECK((left.rotation - right.rotation).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((left.translation - right.translation).cwiseAbs().maxCoeff() < 1e-9);

    // Mirror across the forward axis of a level camera flips the sign.
    const RigidTransform cam = looking_along_y(Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), 1.5));
    const Vec3 off(rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-1, 1));
    if (off.head<2>().norm() < 1e-3) continue;
    const double theta = bev_signed_angle(cam, cam.translation + off).degrees;
    const double mirrored = bev_signed_angle(cam, cam.translation + Vec3(-off.x(), off.y(), off.z())).degrees;
    if (std::abs(theta) < 179.999) CHECK(mirrored == doctest::Approx(-theta).epsilon(1e-9));
  }
}
