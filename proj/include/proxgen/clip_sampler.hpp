// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Chooses the observable segment X = {x_1..x_T} for each task so that the
// question is answerable from the last frame x_T:
//   * forecasting clips end right before a detected fixation/interaction;
//   * planning clips end where the goal has left the field of view after
//     being visible earlier;
//   * chain clips leave 3-5 keysteps after x_T and at least one before it.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxgen/perception.hpp"
#include "proxgen/scene.hpp"

namespace proxgen {

enum class Category { Intention, Exploration, Exploitation, ChainOfActions };
std::string_view category_name(Category c);
std::optional<Category> parse_category(std::string_view s);

enum class AnchorKind { Fixation, Interaction, GoalVisibility, Keystep };
std::string_view anchor_kind_name(AnchorKind k);
std::optional<AnchorKind> parse_anchor_kind(std::string_view s);

struct AnchorEvent {
  double timestamp = 0.0;
  AnchorKind kind = AnchorKind::Fixation;
};

// Half-open time window [start, end) over one stream; frames first_frame ..
// last_frame (inclusive) are the frames inside it and last_frame is x_T.
struct ClipSpec {
  std::string stream_id;
  double start = 0.0;
  double end = 0.0;
  Category category = Category::Intention;
  AnchorEvent anchor;
  std::optional<std::string> goal_object_id;
  std::size_t first_frame = 0;
  std::size_t last_frame = 0;

  std::size_t frame_count() const { return last_frame - first_frame + 1; }
};

struct ClipParams {
  double lead_s = 4.0;
  double min_len_s = 2.0;
  double max_len_s = 60.0;
  int max_past_keysteps = 2;
};

// [onset - lead, onset). Throws InsufficientHistory when the window would
// start before the stream does.
ClipSpec sample_forecasting_clip(const SceneStream& stream, const AnchorEvent& event, Category category,
                                 double lead_s, std::optional<std::string> goal_object_id = std::nullopt);

// Per-frame visibility of the goal's box center from the camera.
std::vector<bool> goal_visibility(const SceneStream& stream, const std::string& goal_object_id,
                                  const VisibilityParams& visibility);

// Latest x_T at which the goal is out of view while having been in view at an
// earlier frame of the clip (at least one frame period before x_T). Throws
// NoValidWindow when the goal is always or never visible.
ClipSpec sample_planning_clip(const SceneStream& stream, const std::string& goal_object_id, Category category,
                              const VisibilityParams& visibility = {}, const ClipParams& params = {});

struct ChainClip {
  ClipSpec clip;
  std::string goal_text;
  std::vector<KeystepAnnotation> past;
  std::vector<KeystepAnnotation> future;
};

// Keystep-density score of a placement: keysteps per minute over the span
// from the first past keystep's start to the last future keystep's end.
double placement_density(const std::vector<KeystepAnnotation>& sorted, std::size_t first, std::size_t past,
                         std::size_t future);

// Densest run of (1..max_past) past + (3..5) future keysteps; ties prefer more
// future steps, then the earlier run, then fewer past steps. Throws
// TooFewKeysteps with fewer than 4 keysteps.
ChainClip sample_chain_clip(const SceneStream& stream, const ClipParams& params = {});

}  // namespace proxgen
