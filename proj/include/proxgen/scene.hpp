// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// In-memory form of one recording: per-frame poses, gaze and skeletons on a
// shared timestamp grid, per-object per-frame boxes, and keystep annotations.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxgen/geometry.hpp"
#include "proxgen/perception.hpp"

namespace proxgen {

struct Frame {
  double timestamp = 0.0;
  RigidTransform device_pose;    // device -> scene
  RigidTransform camera_offset;  // camera -> device
  std::optional<GazeSample> gaze;
  std::optional<SkeletonSample> skeleton;
};

struct ObjectTrack {
  std::string object_id;
  std::string name;
  std::vector<Box3D> boxes;  // one per frame
};

enum class Hand { Left, Right };

struct KeystepAnnotation {
  int id = 0;
  std::string text;
  double start = 0.0;
  double end = 0.0;
  std::string goal;
  std::vector<Hand> hands;
  // Ids of keysteps whose relative order with this one is free.
  std::vector<int> order_independent_with;
};

struct SceneStream {
  std::string stream_id;
  std::string scenario;
  double frame_rate = 30.0;
  AxisConvention convention;
  std::vector<Frame> frames;
  std::vector<ObjectTrack> objects;
  std::vector<KeystepAnnotation> keysteps;
  // Keystep texts from the same scenario usable as chain distractors.
  std::vector<std::string> distractor_texts;

  std::size_t frame_count() const { return frames.size(); }
  double start_time() const { return frames.empty() ? 0.0 : frames.front().timestamp; }
  double end_time() const { return frames.empty() ? 0.0 : frames.back().timestamp; }
  double frame_period() const { return 1.0 / frame_rate; }

  // Camera-to-scene pose: device pose composed with the camera offset.
  RigidTransform camera_pose(std::size_t frame) const;
  // Last frame with timestamp <= t (clamped to the first frame).
  std::size_t frame_at_or_before(double t) const;
  // Last frame with timestamp < t; nullopt when t <= first timestamp.
  std::optional<std::size_t> frame_before(double t) const;

  const ObjectTrack* find_object(const std::string& object_id) const;
  std::vector<Box3D> boxes_at(std::size_t frame) const;
  std::vector<TrackSample> track_of(const ObjectTrack& object) const;
  std::vector<SkeletonSample> skeletons() const;
};

}  // namespace proxgen
