// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/perception.hpp"

#include <algorithm>
#include <cmath>

#include "proxgen/error.hpp"

namespace proxgen {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTimeEps = 1e-9;

}  // namespace

GazeSample GazeSample::make(double timestamp, const Vec3& ray_dir_device, std::optional<double> depth) {
  const double n = ray_dir_device.norm();
  if (!std::isfinite(timestamp) || !is_finite(ray_dir_device) || std::abs(n - 1.0) > 1e-6) {
    throw Error(ErrorCode::InvalidArgument, "gaze ray must be a finite unit vector");
  }
  if (depth && !(*depth > 0.0)) throw Error(ErrorCode::InvalidArgument, "gaze depth must be > 0");
  return GazeSample{timestamp, ray_dir_device, depth};
}

bool is_hand_joint(std::string_view name) {
  return name.starts_with("left_hand") || name.starts_with("right_hand");
}

std::string_view face_name(BoxFace face) {
  switch (face) {
    case BoxFace::NegX: return "-X";
    case BoxFace::PosX: return "+X";
    case BoxFace::NegY: return "-Y";
    case BoxFace::PosY: return "+Y";
    case BoxFace::NegZ: return "-Z";
    case BoxFace::PosZ: return "+Z";
    case BoxFace::Interior: return "Interior";
  }
  return "Interior";
}

Ray gaze_ray_world(const GazeSample& sample, const RigidTransform& device_pose) {
  return Ray{camera_center(device_pose), device_pose.rotate(sample.ray_dir_device).normalized()};
}

std::optional<RayHit> ray_box_intersect(const Ray& ray, const Box3D& box) {
  if (box.contains(ray.origin)) return RayHit{0.0, ray.origin, BoxFace::Interior};

  // The origin is outside the closed box, so a hit needs t_enter >= 0; the
  // axis that is entered last owns the face. Ties keep the lowest axis.
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  int enter_axis = -1;
  for (int axis = 0; axis < 3; ++axis) {
    const double o = ray.origin[axis];
    const double d = ray.dir[axis];
    const double lo = box.min_corner[axis];
    const double hi = box.max_corner[axis];
    if (d == 0.0) {
      if (o < lo || o > hi) return std::nullopt;
      continue;
    }
    double t0 = (lo - o) / d;
    double t1 = (hi - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    if (t0 > t_enter) {
      t_enter = t0;
      enter_axis = axis;
    }
    t_exit = std::min(t_exit, t1);
  }
  if (enter_axis < 0 || t_enter < 0.0 || t_exit < t_enter) return std::nullopt;

  RayHit hit;
  hit.t = t_enter;
  hit.hit_point = ray.origin + t_enter * ray.dir;
  const bool positive_dir = ray.dir[enter_axis] > 0.0;
  hit.hit_point[enter_axis] = positive_dir ? box.min_corner[enter_axis] : box.max_corner[enter_axis];
  hit.face = static_cast<BoxFace>(2 * enter_axis + (positive_dir ? 0 : 1));
  return hit;
}

std::optional<FixatedObject> resolve_fixated_object(const Ray& ray, std::span<const Box3D> boxes,
                                                    const BoxPredicate& visible_at_last_frame) {
  std::optional<FixatedObject> best;
  for (const Box3D& box : boxes) {
    if (visible_at_last_frame && !visible_at_last_frame(box)) continue;
    const auto hit = ray_box_intersect(ray, box);
    if (!hit) continue;
    if (!best || hit->t < best->t) best = FixatedObject{box.object_id, hit->hit_point, hit->t};
  }
  return best;
}

double angle_between_degrees(const Vec3& a, const Vec3& b) {
  const double c = a.normalized().dot(b.normalized());
  return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / kPi;
}

double angular_dispersion(std::span<const Vec3> directions) {
  double worst = 0.0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    for (std::size_t j = i + 1; j < directions.size(); ++j) {
      worst = std::max(worst, angle_between_degrees(directions[i], directions[j]));
    }
  }
  return worst;
}

std::vector<FixationEvent> detect_fixations_world(std::span<const double> timestamps,
                                                  std::span<const Vec3> directions,
                                                  const FixationParams& params) {
  if (timestamps.size() != directions.size()) {
    throw Error(ErrorCode::InvalidArgument, "timestamps and directions differ in length");
  }
  const std::size_t n = timestamps.size();
  if (n == 0 || timestamps.back() - timestamps.front() < params.min_duration_s - kTimeEps) {
    throw Error(ErrorCode::InsufficientSamples, "gaze stream is shorter than the minimum fixation duration");
  }
  const double limit = params.dispersion_deg + 1e-9;

  std::vector<FixationEvent> out;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && timestamps[j] - timestamps[i] < params.min_duration_s - kTimeEps) ++j;
    if (j == n) break;
    if (angular_dispersion(directions.subspan(i, j - i + 1)) > limit) {
      ++i;
      continue;
    }
    while (j + 1 < n) {
      bool ok = true;
      for (std::size_t m = i; m <= j && ok; ++m) {
        ok = angle_between_degrees(directions[m], directions[j + 1]) <= limit;
      }
      if (!ok) break;
      ++j;
    }
    FixationEvent ev;
    ev.start = timestamps[i];
    ev.end = timestamps[j];
    ev.first_sample = i;
    ev.last_sample = j;
    Vec3 sum = Vec3::Zero();
    for (std::size_t m = i; m <= j; ++m) sum += directions[m].normalized();
    ev.mean_direction = sum.normalized();
    out.push_back(std::move(ev));
    i = j + 1;
  }
  return out;
}

std::vector<FixationEvent> detect_fixations(std::span<const GazeSample> gaze, std::span<const TimedPose> poses,
                                            const FixationParams& params) {
  if (poses.empty()) throw Error(ErrorCode::InsufficientSamples, "no poses to align gaze with");
  double period = 0.0;
  if (poses.size() >= 2) {
    std::vector<double> gaps;
    for (std::size_t k = 1; k < poses.size(); ++k) gaps.push_back(poses[k].timestamp - poses[k - 1].timestamp);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    period = gaps[gaps.size() / 2];
  }
  std::vector<double> times;
  std::vector<Vec3> dirs;
  times.reserve(gaze.size());
  dirs.reserve(gaze.size());
  for (const GazeSample& g : gaze) {
    auto it = std::lower_bound(poses.begin(), poses.end(), g.timestamp,
                               [](const TimedPose& p, double t) { return p.timestamp < t; });
    if (it == poses.end() || (it != poses.begin() && g.timestamp - std::prev(it)->timestamp <
                                                         it->timestamp - g.timestamp)) {
      it = std::prev(it);
    }
    if (std::abs(it->timestamp - g.timestamp) > period + kTimeEps) {
      throw Error(ErrorCode::InvalidArgument, "gaze sample has no pose within one frame period");
    }
    times.push_back(g.timestamp);
    dirs.push_back(gaze_ray_world(g, it->pose).dir);
  }
  return detect_fixations_world(times, dirs, params);
}

std::string_view interaction_kind_name(InteractionKind k) {
  switch (k) {
    case InteractionKind::Afford: return "Afford";
    case InteractionKind::Place: return "Place";
    case InteractionKind::Action: return "Action";
  }
  return "Afford";
}

std::optional<InteractionKind> parse_interaction_kind(std::string_view s) {
  for (auto k : {InteractionKind::Afford, InteractionKind::Place, InteractionKind::Action}) {
    if (interaction_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

std::string_view interaction_evidence_name(InteractionEvidence e) {
  switch (e) {
    case InteractionEvidence::Velocity: return "Velocity";
    case InteractionEvidence::HandContainment: return "HandContainment";
    case InteractionEvidence::KeystepAnnotation: return "KeystepAnnotation";
  }
  return "Velocity";
}

std::optional<double> window_speed(std::span<const TrackSample> track, std::size_t index, double window_s) {
  if (index >= track.size()) return std::nullopt;
  const double t_end = track[index].timestamp;
  // Latest sample at or before t_end - window.
  std::optional<std::size_t> from;
  for (std::size_t k = index; k-- > 0;) {
    if (track[k].timestamp <= t_end - window_s + kTimeEps) {
      from = k;
      break;
    }
  }
  if (!from) return std::nullopt;
  const double dt = t_end - track[*from].timestamp;
  if (!(dt > 0.0)) return std::nullopt;
  return euclidean_distance(box_center(track[index].box), box_center(track[*from].box)) / dt;
}

std::optional<InteractionEvent> detect_interaction(std::span<const TrackSample> track,
                                                   std::span<const SkeletonSample> skeletons,
                                                   const InteractionParams& params, double not_before) {
  if (track.size() < 2) throw Error(ErrorCode::InvalidArgument, "interaction detection needs >= 2 track samples");

  std::optional<InteractionEvent> best;
  const std::string& id = track.front().box.object_id;
  for (std::size_t j = 0; j < track.size(); ++j) {
    if (track[j].timestamp < not_before) continue;
    const auto speed = window_speed(track, j, params.window_s);
    if (speed && *speed > params.speed_threshold) {
      best = InteractionEvent{id, track[j].timestamp, InteractionKind::Afford, InteractionEvidence::Velocity};
      break;
    }
  }
  for (const SkeletonSample& s : skeletons) {
    if (s.timestamp < not_before) continue;
    if (best && s.timestamp >= best->onset) break;
    // Box at the latest track sample not after the skeleton timestamp.
    auto it = std::upper_bound(track.begin(), track.end(), s.timestamp + kTimeEps,
                               [](double t, const TrackSample& ts) { return t < ts.timestamp; });
    const Box3D& box = (it == track.begin() ? track.front() : *std::prev(it)).box;
    const bool inside = std::any_of(s.joints.begin(), s.joints.end(), [&](const auto& joint) {
      return is_hand_joint(joint.first) && box.contains(joint.second);
    });
    if (inside) {
      best = InteractionEvent{id, s.timestamp, InteractionKind::Afford, InteractionEvidence::HandContainment};
      break;
    }
  }
  return best;
}

bool is_visible(const RigidTransform& pose, const Vec3& target, const VisibilityParams& params,
                const AxisConvention& convention) {
  if (!(params.half_angle_deg > 0.0 && params.half_angle_deg < 180.0) || !(params.max_range_m > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "visibility half angle must be in (0, 180) and range > 0");
  }
  const Vec3 offset = target - camera_center(pose);
  const double distance = offset.norm();
  if (distance < kDegenerateNorm) throw Error(ErrorCode::DegenerateTarget, "target coincides with the camera");
  if (distance > params.max_range_m) return false;
  return angle_between_degrees(forward_axis(pose, convention), offset) <= params.half_angle_deg;
}

AffordAnswer afford_answer(const RigidTransform& pose_last, const Vec3& object_center,
                           const AxisConvention& convention) {
  AffordAnswer out;
  out.angle = bev_signed_angle(pose_last, object_center, convention);
  out.direction = discretize_direction(out.angle);
  out.distance = euclidean_distance(camera_center(pose_last), object_center);
  return out;
}

Direction8 place_answer(const RigidTransform& pose_last, const Vec3& center_last, const Vec3& center_future,
                        const AxisConvention& convention) {
  return discretize_direction(bev_heading_angle(pose_last, center_future - center_last, convention));
}

SignedAngle action_answer(const RigidTransform& pose_last, const RigidTransform& pose_future,
                          const AxisConvention& convention) {
  return bev_heading_angle(pose_last, forward_axis(pose_future, convention), convention);
}

AffordanceAnswer affordance_answer(InteractionKind kind, const AffordanceContext& context,
                                   const AxisConvention& convention) {
  switch (kind) {
    case InteractionKind::Afford:
      return afford_answer(context.pose_last, context.object_center_last, convention);
    case InteractionKind::Place:
      if (!context.object_center_future) {
        throw Error(ErrorCode::NoFutureEvent, "place answer needs the object's future position");
      }
      return place_answer(context.pose_last, context.object_center_last, *context.object_center_future,
                          convention);
    case InteractionKind::Action:
      if (!context.pose_future) throw Error(ErrorCode::NoFutureEvent, "action answer needs the future pose");
      return action_answer(context.pose_last, *context.pose_future, convention);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown interaction kind");
}

}  // namespace proxgen
