// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "proxgen/geometry.hpp"

namespace proxgen {

/// Eye-tracking sample: a unit ray in the device frame plus optional depth.
struct GazeSample {
  double timestamp = 0.0;
  Vec3 ray_dir_device = Vec3::UnitZ();
  std::optional<double> depth;

  static GazeSample make(double timestamp, const Vec3& ray_dir_device,
                         std::optional<double> depth = std::nullopt);
};

/// Named joint positions in the world frame.
struct SkeletonSample {
  double timestamp = 0.0;
  std::map<std::string, Vec3> joints;
};

// Joint names beginning with "left_hand" or "right_hand".
bool is_hand_joint(std::string_view name);

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 dir = Vec3::UnitZ();
};

enum class BoxFace { NegX, PosX, NegY, PosY, NegZ, PosZ, Interior };
std::string_view face_name(BoxFace face);

struct RayHit {
  double t = 0.0;
  Vec3 hit_point = Vec3::Zero();
  BoxFace face = BoxFace::Interior;
};

// Origin at the device position, direction = R * device ray (renormalized).
Ray gaze_ray_world(const GazeSample& sample, const RigidTransform& device_pose);

// Slab test. Returns the smallest t >= 0 at which the ray enters the box and
// the face it enters through; an origin inside the (closed) box gives t = 0
// and BoxFace::Interior.
std::optional<RayHit> ray_box_intersect(const Ray& ray, const Box3D& box);

struct FixatedObject {
  std::string object_id;
  Vec3 hit_point = Vec3::Zero();
  double t = 0.0;
};

using BoxPredicate = std::function<bool(const Box3D&)>;

// Nearest hit among boxes accepted by `visible_at_last_frame`. Equal t keeps
// the earlier box in `boxes`.
std::optional<FixatedObject> resolve_fixated_object(const Ray& ray, std::span<const Box3D> boxes,
                                                    const BoxPredicate& visible_at_last_frame);

struct TimedPose {
  double timestamp = 0.0;
  RigidTransform pose;
};

struct FixationParams {
  double dispersion_deg = 2.0;
  double min_duration_s = 0.3;
};

struct FixationEvent {
  double start = 0.0;
  double end = 0.0;
  std::size_t first_sample = 0;
  std::size_t last_sample = 0;
  Vec3 mean_direction = Vec3::UnitZ();
  std::optional<std::string> object_id;
  std::optional<Vec3> hit_point;
};

double angle_between_degrees(const Vec3& a, const Vec3& b);

// Largest pairwise angle among the directions, in degrees.
double angular_dispersion(std::span<const Vec3> directions);

// Dispersion-threshold (I-DT) detection over world-frame gaze directions.
// Windows are grown to the right while the pairwise dispersion stays within
// the threshold; a window is emitted once it spans at least min_duration.
// Throws InsufficientSamples if the whole stream is shorter than min_duration.
std::vector<FixationEvent> detect_fixations_world(std::span<const double> timestamps,
                                                  std::span<const Vec3> directions,
                                                  const FixationParams& params = {});

// Pairs each gaze sample with the nearest device pose (which must be within
// one frame period) and runs detect_fixations_world.
std::vector<FixationEvent> detect_fixations(std::span<const GazeSample> gaze, std::span<const TimedPose> poses,
                                            const FixationParams& params = {});

enum class InteractionKind { Afford, Place, Action };
enum class InteractionEvidence { Velocity, HandContainment, KeystepAnnotation };
std::string_view interaction_kind_name(InteractionKind k);
std::optional<InteractionKind> parse_interaction_kind(std::string_view s);
std::string_view interaction_evidence_name(InteractionEvidence e);

struct InteractionEvent {
  std::string object_id;
  double onset = 0.0;
  InteractionKind kind = InteractionKind::Afford;
  InteractionEvidence evidence = InteractionEvidence::Velocity;
};

struct TrackSample {
  double timestamp = 0.0;
  Box3D box;
};

struct InteractionParams {
  double speed_threshold = 0.05;  // m/s, strictly exceeded
  double window_s = 0.5;
};

// Average speed of the box center over the window ending at track[index]:
// distance / time from the latest sample at or before t - window. nullopt when
// no such sample exists yet.
std::optional<double> window_speed(std::span<const TrackSample> track, std::size_t index, double window_s);

// First timestamp >= not_before at which the object's windowed average speed
// exceeds the threshold or a hand joint lies inside its box. On a tie the
// velocity criterion is reported.
std::optional<InteractionEvent> detect_interaction(std::span<const TrackSample> track,
                                                   std::span<const SkeletonSample> skeletons,
                                                   const InteractionParams& params = {},
                                                   double not_before = -std::numeric_limits<double>::infinity());

struct VisibilityParams {
  double half_angle_deg = 75.0;
  double max_range_m = 8.0;
};

// Full 3D angle to the target within half_angle and distance within range. No
// occlusion test. Throws DegenerateTarget when the target is at the camera.
bool is_visible(const RigidTransform& pose, const Vec3& target, const VisibilityParams& params = {},
                const AxisConvention& convention = {});

struct AffordAnswer {
  Direction8 direction = Direction8::Front;
  double distance = 0.0;
  SignedAngle angle;
};

// Afford: direction and distance from the camera at x_T to the object center.
AffordAnswer afford_answer(const RigidTransform& pose_last, const Vec3& object_center,
                           const AxisConvention& convention = {});
// Place: direction of the object's displacement, in x_T's egocentric BEV frame.
Direction8 place_answer(const RigidTransform& pose_last, const Vec3& center_last, const Vec3& center_future,
                        const AxisConvention& convention = {});
// Action: signed BEV turn from x_T's forward axis to the future forward axis.
SignedAngle action_answer(const RigidTransform& pose_last, const RigidTransform& pose_future,
                          const AxisConvention& convention = {});

struct AffordanceContext {
  RigidTransform pose_last;
  std::optional<RigidTransform> pose_future;
  Vec3 object_center_last = Vec3::Zero();
  std::optional<Vec3> object_center_future;
};

using AffordanceAnswer = std::variant<AffordAnswer, Direction8, SignedAngle>;

// Dispatches on kind; throws NoFutureEvent when Place/Action lack the future
// frame data.
AffordanceAnswer affordance_answer(InteractionKind kind, const AffordanceContext& context,
                                   const AxisConvention& convention = {});

}  // namespace proxgen
