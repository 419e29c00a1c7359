// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/scene.hpp"

#include <algorithm>

namespace proxgen {

RigidTransform SceneStream::camera_pose(std::size_t frame) const {
  const Frame& f = frames.at(frame);
  return compose(f.device_pose, f.camera_offset);
}

std::size_t SceneStream::frame_at_or_before(double t) const {
  auto it = std::upper_bound(frames.begin(), frames.end(), t,
                             [](double value, const Frame& f) { return value < f.timestamp; });
  if (it == frames.begin()) return 0;
  return static_cast<std::size_t>(std::distance(frames.begin(), it) - 1);
}

std::optional<std::size_t> SceneStream::frame_before(double t) const {
  auto it = std::lower_bound(frames.begin(), frames.end(), t,
                             [](const Frame& f, double value) { return f.timestamp < value; });
  if (it == frames.begin()) return std::nullopt;
  return static_cast<std::size_t>(std::distance(frames.begin(), it) - 1);
}

const ObjectTrack* SceneStream::find_object(const std::string& object_id) const {
  for (const ObjectTrack& o : objects) {
    if (o.object_id == object_id) return &o;
  }
  return nullptr;
}

std::vector<Box3D> SceneStream::boxes_at(std::size_t frame) const {
  std::vector<Box3D> out;
  out.reserve(objects.size());
  for (const ObjectTrack& o : objects) out.push_back(o.boxes.at(frame));
  return out;
}

std::vector<TrackSample> SceneStream::track_of(const ObjectTrack& object) const {
  std::vector<TrackSample> out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) out.push_back(TrackSample{frames[i].timestamp, object.boxes[i]});
  return out;
}

std::vector<SkeletonSample> SceneStream::skeletons() const {
  std::vector<SkeletonSample> out;
  for (const Frame& f : frames) {
    if (f.skeleton) out.push_back(*f.skeleton);
  }
  return out;
}

}  // namespace proxgen
