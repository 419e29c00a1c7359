// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/clip_sampler.hpp"

#include <algorithm>
#include <cmath>

#include "proxgen/error.hpp"

namespace proxgen {

namespace {

constexpr double kTimeEps = 1e-9;

std::size_t first_frame_at_or_after(const SceneStream& stream, double t) {
  auto it = std::lower_bound(stream.frames.begin(), stream.frames.end(), t - kTimeEps,
                             [](const Frame& f, double value) { return f.timestamp < value; });
  return static_cast<std::size_t>(std::distance(stream.frames.begin(), it));
}

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Intention: return "Intention";
    case Category::Exploration: return "Exploration";
    case Category::Exploitation: return "Exploitation";
    case Category::ChainOfActions: return "ChainOfActions";
  }
  return "Intention";
}

std::optional<Category> parse_category(std::string_view s) {
  for (auto c : {Category::Intention, Category::Exploration, Category::Exploitation, Category::ChainOfActions}) {
    if (category_name(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view anchor_kind_name(AnchorKind k) {
  switch (k) {
    case AnchorKind::Fixation: return "Fixation";
    case AnchorKind::Interaction: return "Interaction";
    case AnchorKind::GoalVisibility: return "GoalVisibility";
    case AnchorKind::Keystep: return "Keystep";
  }
  return "Fixation";
}

std::optional<AnchorKind> parse_anchor_kind(std::string_view s) {
  for (auto k : {AnchorKind::Fixation, AnchorKind::Interaction, AnchorKind::GoalVisibility, AnchorKind::Keystep}) {
    if (anchor_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

ClipSpec sample_forecasting_clip(const SceneStream& stream, const AnchorEvent& event, Category category,
                                 double lead_s, std::optional<std::string> goal_object_id) {
  if (stream.frames.empty()) throw Error(ErrorCode::InsufficientHistory, "stream has no frames");
  const double start = event.timestamp - lead_s;
  if (start < stream.start_time() - kTimeEps) {
    throw Error(ErrorCode::InsufficientHistory, "event at t=" + std::to_string(event.timestamp) +
                                                    " leaves less than the lead time of history");
  }
  const auto last = stream.frame_before(event.timestamp);
  const std::size_t first = first_frame_at_or_after(stream, start);
  if (!last || first > *last) throw Error(ErrorCode::InsufficientHistory, "no frames precede the event");

  ClipSpec clip;
  clip.stream_id = stream.stream_id;
  clip.start = start;
  clip.end = event.timestamp;
  clip.category = category;
  clip.anchor = event;
  clip.goal_object_id = std::move(goal_object_id);
  clip.first_frame = first;
  clip.last_frame = *last;
  return clip;
}

std::vector<bool> goal_visibility(const SceneStream& stream, const std::string& goal_object_id,
                                  const VisibilityParams& visibility) {
  const ObjectTrack* goal = stream.find_object(goal_object_id);
  if (!goal) throw Error(ErrorCode::InvalidArgument, "unknown goal object '" + goal_object_id + "'");
  std::vector<bool> out(stream.frames.size(), false);
  for (std::size_t f = 0; f < stream.frames.size(); ++f) {
    try {
      out[f] = is_visible(stream.camera_pose(f), box_center(goal->boxes[f]), visibility, stream.convention);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateTarget) throw;
    }
  }
  return out;
}

ClipSpec sample_planning_clip(const SceneStream& stream, const std::string& goal_object_id, Category category,
                              const VisibilityParams& visibility, const ClipParams& params) {
  const std::vector<bool> visible = goal_visibility(stream, goal_object_id, visibility);
  const std::size_t n = visible.size();
  for (std::size_t e = n; e-- > 1;) {
    if (visible[e]) continue;
    const double t_end = stream.frames[e].timestamp;
    std::optional<std::size_t> seen;
    for (std::size_t v = e; v-- > 0;) {
      if (t_end - stream.frames[v].timestamp > params.max_len_s + kTimeEps) break;
      if (visible[v]) {
        seen = v;
        break;
      }
    }
    if (!seen) continue;

    const double start =
        std::max(stream.start_time(), std::min(stream.frames[*seen].timestamp, t_end - params.min_len_s));
    ClipSpec clip;
    clip.stream_id = stream.stream_id;
    clip.start = start;
    clip.end = t_end + 0.5 * stream.frame_period();
    clip.category = category;
    clip.anchor = AnchorEvent{t_end, AnchorKind::GoalVisibility};
    clip.goal_object_id = goal_object_id;
    clip.first_frame = first_frame_at_or_after(stream, start);
    clip.last_frame = e;
    return clip;
  }
  throw Error(ErrorCode::NoValidWindow,
              "goal '" + goal_object_id + "' is never out of view after having been in view");
}

double placement_density(const std::vector<KeystepAnnotation>& sorted, std::size_t first, std::size_t past,
                         std::size_t future) {
  const std::size_t last = first + past + future - 1;
  const double span_min = std::max(sorted[last].end - sorted[first].start, 1e-9) / 60.0;
  return static_cast<double>(past + future) / span_min;
}

ChainClip sample_chain_clip(const SceneStream& stream, const ClipParams& params) {
  std::vector<KeystepAnnotation> steps = stream.keysteps;
  if (steps.size() < 4) {
    throw Error(ErrorCode::TooFewKeysteps, "need at least 4 keysteps (1 past + 3 future), stream has " +
                                               std::to_string(steps.size()));
  }
  std::stable_sort(steps.begin(), steps.end(), [](const auto& a, const auto& b) {
    return a.start < b.start || (a.start == b.start && a.id < b.id);
  });

  struct Placement {
    std::size_t first, past, future;
    double density;
  };
  std::optional<Placement> best;
  const std::size_t n = steps.size();
  const std::size_t max_past = static_cast<std::size_t>(std::max(1, params.max_past_keysteps));
  for (std::size_t first = 0; first < n; ++first) {
    for (std::size_t past = 1; past <= max_past; ++past) {
      for (std::size_t future = 3; future <= 5; ++future) {
        if (first + past + future > n) continue;
        // x_T must have at least one frame before the first future keystep.
        if (!stream.frame_before(steps[first + past].start)) continue;
        const double d = placement_density(steps, first, past, future);
        const bool better = !best || d > best->density ||
                            (d == best->density && future > best->future);
        if (better) best = Placement{first, past, future, d};
      }
    }
  }
  if (!best) throw Error(ErrorCode::TooFewKeysteps, "no placement leaves 3-5 future keysteps");

  ChainClip out;
  out.past.assign(steps.begin() + best->first, steps.begin() + best->first + best->past);
  out.future.assign(steps.begin() + best->first + best->past,
                    steps.begin() + best->first + best->past + best->future);
  out.goal_text = out.past.front().goal.empty() ? stream.scenario : out.past.front().goal;

  ClipSpec& clip = out.clip;
  clip.stream_id = stream.stream_id;
  clip.category = Category::ChainOfActions;
  clip.start = std::max(stream.start_time(), out.past.front().start);
  clip.end = out.future.front().start;
  clip.anchor = AnchorEvent{clip.end, AnchorKind::Keystep};
  clip.first_frame = first_frame_at_or_after(stream, clip.start);
  clip.last_frame = *stream.frame_before(clip.end);
  clip.first_frame = std::min(clip.first_frame, clip.last_frame);
  return out;
}

}  // namespace proxgen
