// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Scripted synthetic recordings. A recipe places boxes in a rectangular room,
// walks a camera through waypoints (yaw follows the direction of travel and
// optionally turns toward a fixed heading while dwelling), aims gaze at
// scripted targets, moves objects for scripted interactions and places hands
// at keystep locations. Everything downstream is derived from the geometry.

#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "proxgen/perception.hpp"
#include "proxgen/scene.hpp"

namespace proxgen {

struct RecipeObject {
  std::string id;
  std::string name;
  Vec3 center = Vec3::Zero();  // box center; the box rests on z = 0 when center.z = size.z / 2
  Vec3 size = Vec3::Ones();
};

struct RandomObjects {
  int count = 0;
  double min_size = 0.3;
  double max_size = 0.8;
  double min_height = 0.4;
  double max_height = 0.9;
};

struct RecipeWaypoint {
  Vec2 position = Vec2::Zero();
  double dwell_s = 0.0;
  std::optional<double> face_yaw_deg;
};

struct GazeScript {
  double start = 0.0;
  double end = 0.0;
  std::string target;
};

struct InteractionScript {
  double time = 0.0;
  std::string object;
  InteractionKind kind = InteractionKind::Afford;
  double duration_s = 1.0;
  Vec3 displacement = Vec3(0.0, 0.0, 0.15);
  Hand hand = Hand::Right;
};

struct KeystepScript {
  double start = 0.0;
  double end = 0.0;
  std::string text;
  std::string goal;
  std::optional<std::string> object;
  std::optional<Vec3> location;
  std::vector<Hand> hands{Hand::Right};
  std::vector<int> order_independent_with;
};

struct SceneRecipe {
  std::string stream_id = "synth";
  std::string scenario = "generic";
  std::uint64_t seed = 0;
  double frame_rate = 30.0;
  Vec2 room_min = Vec2(0.0, 0.0);
  Vec2 room_max = Vec2(8.0, 6.0);
  bool corner_fixtures = true;
  double camera_height = 1.6;
  Vec3 camera_offset = Vec3(0.0, -0.05, 0.02);  // camera origin in the device frame
  double speed = 1.0;
  std::vector<RecipeWaypoint> waypoints;
  std::vector<RecipeObject> objects;
  RandomObjects random_objects;
  std::vector<GazeScript> gaze;
  std::vector<InteractionScript> interactions;
  std::vector<KeystepScript> keysteps;
  std::vector<std::string> distractor_texts;
};

SceneRecipe recipe_from_json(const nlohmann::json& j);
nlohmann::json recipe_to_json(const SceneRecipe& recipe);
SceneRecipe load_recipe(const std::string& path);

// Duration of the scripted walk including dwells.
double trajectory_duration(const SceneRecipe& recipe);
// Time at which the camera reaches each waypoint (start of its dwell).
std::vector<double> waypoint_arrivals(const SceneRecipe& recipe);

// Device rotation for a camera looking along world yaw `yaw_deg` with image y
// pointing down: columns (right, down, forward).
Mat3 yaw_camera_rotation(double yaw_deg);

// Throws InvalidRecipe.
SceneStream synthesize(const SceneRecipe& recipe);

// Random room with fixtures, 4-6 objects, one dwell per object with gaze, an
// interaction and a keystep there. Deterministic in `seed`.
SceneRecipe make_random_recipe(std::uint64_t seed, const std::string& stream_id,
                               const std::string& scenario = "household");

}  // namespace proxgen
