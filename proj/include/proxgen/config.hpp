// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Generation settings. The JSON form mirrors the struct:
//
//   {"seed": 0,
//    "categories": {"intention": true, "exploration": true,
//                   "exploitation": true, "chain_of_actions": true},
//    "occupancy": {"resolution": 0.1, "turn_penalty": 0.1},
//    "bins": {"distance_edges": [...], "distance_labels": [...],
//             "angle_none": 10, "angle_slight": 30, "angle_moderate": 90},
//    "fixation": {"dispersion_deg": 2, "min_duration_s": 0.3},
//    "visibility": {"half_angle_deg": 75, "max_range_m": 8},
//    "interaction": {"speed_threshold": 0.05, "window_s": 0.5},
//    "clip": {"lead_s": 4, "min_len_s": 2, "max_len_s": 60, "max_past_keysteps": 2},
//    "exploration_distance": "path_length" | "first_step",
//    "place_min_displacement": 0.2,
//    "max_items_per_task": 4,
//    "workers": 4,
//    "generator_endpoint": null | "http://host:port/path"}
//
// Unknown keys are rejected. Overrides use dotted paths ("occupancy.turn_penalty=0.5");
// the value is read as JSON when it parses, otherwise as a string.

#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "proxgen/clip_sampler.hpp"
#include "proxgen/perception.hpp"
#include "proxgen/qa_forge.hpp"

namespace proxgen {

enum class ExplorationDistance { PathLength, FirstStep };

struct CategoryToggles {
  bool intention = true;
  bool exploration = true;
  bool exploitation = true;
  bool chain_of_actions = true;

  bool enabled(Category c) const;
};

struct RunConfig {
  std::uint64_t seed = 0;
  CategoryToggles categories;
  double resolution = 0.1;
  double turn_penalty = 0.1;
  std::vector<double> distance_edges{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::string> distance_labels{"under 0.5 m", "0.5–1 m", "1–2 m", "2–4 m", "over 4 m"};
  double angle_none = 10.0;
  double angle_slight = 30.0;
  double angle_moderate = 90.0;
  FixationParams fixation;
  VisibilityParams visibility;
  InteractionParams interaction;
  ClipParams clip;
  ExplorationDistance exploration_distance = ExplorationDistance::PathLength;
  double place_min_displacement = 0.2;
  int max_items_per_task = 4;
  int workers = 4;
  std::optional<std::string> generator_endpoint;

  DistanceBinning distance_binning() const { return DistanceBinning(distance_edges, distance_labels); }
  AngleBinning angle_binning() const { return AngleBinning(angle_none, angle_slight, angle_moderate); }
};

nlohmann::json config_to_json(const RunConfig& config);
// Missing keys keep their defaults. Throws InvalidConfig.
RunConfig config_from_json(const nlohmann::json& j);
// Applies "dotted.key=value" overrides on top of a JSON config document.
void apply_override(nlohmann::json& config, const std::string& assignment);
RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides = {});
// Range checks on every tunable; throws InvalidConfig.
void validate_config(const RunConfig& config);

}  // namespace proxgen
