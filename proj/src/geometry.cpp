// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/geometry.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "proxgen/error.hpp"

namespace proxgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace

bool is_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

RigidTransform RigidTransform::from_translation(const Vec3& t) {
  RigidTransform out;
  out.translation = t;
  return out;
}

RigidTransform RigidTransform::from_yaw(double degrees, const Vec3& t) {
  RigidTransform out;
  out.rotation = Eigen::AngleAxisd(deg2rad(degrees), Vec3::UnitZ()).toRotationMatrix();
  out.translation = t;
  return out;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform out;
  out.rotation = rotation.transpose();
  out.translation = -(out.rotation * translation);
  return out;
}

bool RigidTransform::is_orthonormal(double tolerance) const {
  if (!rotation.allFinite() || !is_finite(translation)) return false;
  const Mat3 gram = rotation.transpose() * rotation - Mat3::Identity();
  if (gram.cwiseAbs().maxCoeff() >= tolerance) return false;
  return std::abs(rotation.determinant() - 1.0) <= tolerance;
}

RigidTransform compose(const RigidTransform& outer, const RigidTransform& inner) {
  RigidTransform out;
  out.rotation = outer.rotation * inner.rotation;
  out.translation = outer.rotation * inner.translation + outer.translation;
  if (!out.is_orthonormal(kComposeDriftTolerance)) {
    throw Error(ErrorCode::OrthonormalityViolation,
                "composed rotation is not in SO(3); an input pose is corrupt");
  }
  return out;
}

Box3D Box3D::make(const Vec3& min_corner, const Vec3& max_corner, std::string object_id) {
  if (!is_finite(min_corner) || !is_finite(max_corner)) {
    throw Error(ErrorCode::InvalidArgument, "box corners must be finite");
  }
  if ((min_corner.array() > max_corner.array()).any()) {
    throw Error(ErrorCode::InvalidArgument, "box min_corner must be <= max_corner on every axis");
  }
  return Box3D{min_corner, max_corner, std::move(object_id)};
}

bool Box3D::contains(const Vec3& p, double tolerance) const {
  return (p.array() >= min_corner.array() - tolerance).all() &&
         (p.array() <= max_corner.array() + tolerance).all();
}

Vec3 box_center(const Box3D& box) { return 0.5 * (box.min_corner + box.max_corner); }

double euclidean_distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

Direction8 direction_from_ring(int index) {
  return static_cast<Direction8>(((index % 8) + 8) % 8);
}

int ring_distance(Direction8 a, Direction8 b) {
  const int d = std::abs(ring_index(a) - ring_index(b)) % 8;
  return d > 4 ? 8 - d : d;
}

double sector_center_degrees(Direction8 d) { return normalize_degrees(45.0 * ring_index(d)); }

std::string_view direction_name(Direction8 d) {
  switch (d) {
    case Direction8::Front: return "Front";
    case Direction8::FrontLeft: return "FrontLeft";
    case Direction8::Left: return "Left";
    case Direction8::BackLeft: return "BackLeft";
    case Direction8::Back: return "Back";
    case Direction8::BackRight: return "BackRight";
    case Direction8::Right: return "Right";
    case Direction8::FrontRight: return "FrontRight";
  }
  return "Front";
}

std::optional<Direction8> parse_direction_name(std::string_view name) {
  for (const Direction8 d : kAllDirections) {
    if (direction_name(d) == name) return d;
  }
  return std::nullopt;
}

std::string_view direction_phrase(Direction8 d) {
  switch (d) {
    case Direction8::Front: return "front";
    case Direction8::FrontLeft: return "front-left";
    case Direction8::Left: return "left";
    case Direction8::BackLeft: return "back-left";
    case Direction8::Back: return "back";
    case Direction8::BackRight: return "back-right";
    case Direction8::Right: return "right";
    case Direction8::FrontRight: return "front-right";
  }
  return "front";
}

char direction_letter(Direction8 d) {
  switch (d) {
    case Direction8::Right: return 'A';
    case Direction8::Left: return 'B';
    case Direction8::Front: return 'C';
    case Direction8::Back: return 'D';
    case Direction8::FrontRight: return 'E';
    case Direction8::FrontLeft: return 'F';
    case Direction8::BackLeft: return 'G';
    case Direction8::BackRight: return 'H';
  }
  return 'C';
}

std::optional<Direction8> direction_from_letter(char letter) {
  for (const Direction8 d : kAllDirections) {
    if (direction_letter(d) == letter) return d;
  }
  return std::nullopt;
}

double normalize_degrees(double degrees) {
  double out = std::fmod(degrees, 360.0);
  if (out <= -180.0) out += 360.0;
  if (out > 180.0) out -= 360.0;
  return out;
}

Vec3 forward_axis(const RigidTransform& pose, const AxisConvention& convention) {
  return convention.forward_sign * pose.rotation.col(convention.forward_column);
}

SignedAngle planar_signed_angle(const Vec2& from, const Vec2& to) {
  const double cross = from.x() * to.y() - from.y() * to.x();
  const double dot = from.dot(to);
  return SignedAngle{normalize_degrees(rad2deg(std::atan2(cross, dot)))};
}

SignedAngle bev_heading_angle(const RigidTransform& pose, const Vec3& displacement,
                              const AxisConvention& convention) {
  const Vec2 forward = bev_project(forward_axis(pose, convention));
  if (forward.norm() < kDegenerateNorm) {
    throw Error(ErrorCode::DegenerateForward, "camera forward axis is vertical");
  }
  const Vec2 target = bev_project(displacement);
  if (target.norm() < kDegenerateNorm) {
    throw Error(ErrorCode::DegenerateTarget, "target direction has no ground-plane component");
  }
  return planar_signed_angle(forward, target);
}

SignedAngle bev_signed_angle(const RigidTransform& pose, const Vec3& target,
                             const AxisConvention& convention) {
  return bev_heading_angle(pose, target - camera_center(pose), convention);
}

Direction8 discretize_direction(SignedAngle angle) {
  const double a = normalize_degrees(angle.degrees);
  const int sector = static_cast<int>(std::floor((a + 22.5) / 45.0));
  return direction_from_ring(sector);
}

}  // namespace proxgen
