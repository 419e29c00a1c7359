// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Rigid transforms, boxes, bird's-eye-view angles and the 8-way egocentric
// direction taxonomy shared by every other module.
//
// Conventions:
//   * World frame is right-handed, +Z up, ground plane z = 0.
//   * Camera forward is a column of the camera-to-world rotation (by default
//     the camera +Z axis, i.e. the third column), see AxisConvention.
//   * Signed BEV angles are positive counterclockwise about +Z seen from
//     above, so a positive angle means the target is on the wearer's left.
//   * Angles live in (-180, 180]; exactly 180 is "behind" and maps to Back.

#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace proxgen {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kOrthonormalTolerance = 1e-9;
inline constexpr double kComposeDriftTolerance = 1e-6;
inline constexpr double kDegenerateNorm = 1e-6;

bool is_finite(const Vec3& v);

struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t);
  // Rotation about world +Z by `degrees`, then translation.
  static RigidTransform from_yaw(double degrees, const Vec3& t = Vec3::Zero());

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 rotate(const Vec3& v) const { return rotation * v; }
  RigidTransform inverse() const;

  // ||R^T R - I||_inf and |det R - 1| both within `tolerance`.
  bool is_orthonormal(double tolerance = kOrthonormalTolerance) const;
};

// outer * inner, i.e. apply `inner` first. Throws OrthonormalityViolation if
// the product drifts from SO(3) by more than kComposeDriftTolerance.
RigidTransform compose(const RigidTransform& outer, const RigidTransform& inner);

// Translation of a camera-to-world transform.
inline Vec3 camera_center(const RigidTransform& pose) { return pose.translation; }

struct Box3D {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();
  std::string object_id;

  // Validating constructor: corners finite and ordered on every axis.
  static Box3D make(const Vec3& min_corner, const Vec3& max_corner, std::string object_id = {});
  bool contains(const Vec3& p, double tolerance = 0.0) const;
  Vec3 extent() const { return max_corner - min_corner; }
};

Vec3 box_center(const Box3D& box);

inline Vec2 bev_project(const Vec3& v) { return v.head<2>(); }

double euclidean_distance(const Vec3& a, const Vec3& b);

enum class Direction8 { Front, FrontLeft, Left, BackLeft, Back, BackRight, Right, FrontRight };

inline constexpr std::array<Direction8, 8> kAllDirections = {
    Direction8::Front, Direction8::FrontLeft, Direction8::Left,      Direction8::BackLeft,
    Direction8::Back,  Direction8::BackRight, Direction8::Right, Direction8::FrontRight};

// Counterclockwise ring position; Front = 0, FrontLeft = 1, ..., FrontRight = 7.
inline int ring_index(Direction8 d) { return static_cast<int>(d); }
Direction8 direction_from_ring(int index);
// Shortest hop count around the ring, in [0, 4].
int ring_distance(Direction8 a, Direction8 b);
// Sector center in degrees, in (-180, 180].
double sector_center_degrees(Direction8 d);

// "Front", "FrontLeft", ... (record spelling).
std::string_view direction_name(Direction8 d);
std::optional<Direction8> parse_direction_name(std::string_view name);
// "front", "front-left", ... (question/option text).
std::string_view direction_phrase(Direction8 d);
// Chain-answer letters: A=right B=left C=front D=back E=front-right
// F=front-left G=back-left H=back-right.
char direction_letter(Direction8 d);
std::optional<Direction8> direction_from_letter(char letter);

struct SignedAngle {
  double degrees = 0.0;
};

// Maps any finite angle into (-180, 180].
double normalize_degrees(double degrees);

// Which column of the camera-to-world rotation is the viewing direction.
struct AxisConvention {
  int forward_column = 2;
  double forward_sign = 1.0;
};

Vec3 forward_axis(const RigidTransform& pose, const AxisConvention& convention = {});

// Signed angle from planar vector `from` to planar vector `to`.
SignedAngle planar_signed_angle(const Vec2& from, const Vec2& to);

// Angle from the pose's BEV forward direction to the BEV direction of
// `displacement` (a world-frame vector, not a point).
SignedAngle bev_heading_angle(const RigidTransform& pose, const Vec3& displacement,
                              const AxisConvention& convention = {});

// Angle from the BEV forward direction to the target point seen from the
// camera center. Throws DegenerateForward / DegenerateTarget.
SignedAngle bev_signed_angle(const RigidTransform& pose, const Vec3& target,
                             const AxisConvention& convention = {});

// 45-degree half-open sectors centered on the canonical directions.
Direction8 discretize_direction(SignedAngle angle);

}  // namespace proxgen
