// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "proxgen/error.hpp"

namespace proxgen {

using nlohmann::json;

bool CategoryToggles::enabled(Category c) const {
  switch (c) {
    case Category::Intention: return intention;
    case Category::Exploration: return exploration;
    case Category::Exploitation: return exploitation;
    case Category::ChainOfActions: return chain_of_actions;
  }
  return false;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["categories"] = {{"intention", c.categories.intention},
                     {"exploration", c.categories.exploration},
                     {"exploitation", c.categories.exploitation},
                     {"chain_of_actions", c.categories.chain_of_actions}};
  j["occupancy"] = {{"resolution", c.resolution}, {"turn_penalty", c.turn_penalty}};
  j["bins"] = {{"distance_edges", c.distance_edges},
               {"distance_labels", c.distance_labels},
               {"angle_none", c.angle_none},
               {"angle_slight", c.angle_slight},
               {"angle_moderate", c.angle_moderate}};
  j["fixation"] = {{"dispersion_deg", c.fixation.dispersion_deg}, {"min_duration_s", c.fixation.min_duration_s}};
  j["visibility"] = {{"half_angle_deg", c.visibility.half_angle_deg}, {"max_range_m", c.visibility.max_range_m}};
  j["interaction"] = {{"speed_threshold", c.interaction.speed_threshold}, {"window_s", c.interaction.window_s}};
  j["clip"] = {{"lead_s", c.clip.lead_s},
               {"min_len_s", c.clip.min_len_s},
               {"max_len_s", c.clip.max_len_s},
               {"max_past_keysteps", c.clip.max_past_keysteps}};
  j["exploration_distance"] =
      c.exploration_distance == ExplorationDistance::PathLength ? "path_length" : "first_step";
  j["place_min_displacement"] = c.place_min_displacement;
  j["max_items_per_task"] = c.max_items_per_task;
  j["workers"] = c.workers;
  j["generator_endpoint"] = c.generator_endpoint ? json(*c.generator_endpoint) : json(nullptr);
  return j;
}

namespace {

void check_known(const json& given, const json& known, const std::string& prefix) {
  if (!given.is_object()) throw Error(ErrorCode::InvalidConfig, "config" + prefix + " must be an object");
  for (auto it = given.begin(); it != given.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (!known.contains(it.key())) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + path + "'");
    if (known[it.key()].is_object()) check_known(it.value(), known[it.key()], path);
  }
}

template <typename T>
T get(const json& j, const char* section, const char* key) {
  const json& v = section ? j.at(section).at(key) : j.at(key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    const std::string name = section ? std::string(section) + "." + key : std::string(key);
    throw Error(ErrorCode::InvalidConfig, "config key '" + name + "' has the wrong type");
  }
}

}  // namespace

RunConfig config_from_json(const json& given) {
  json merged = config_to_json(RunConfig{});
  check_known(given, merged, "");
  merged.merge_patch(given);
  // merge_patch treats null as deletion.
  if (!merged.contains("generator_endpoint")) merged["generator_endpoint"] = nullptr;

  RunConfig c;
  c.seed = get<std::uint64_t>(merged, nullptr, "seed");
  c.categories.intention = get<bool>(merged, "categories", "intention");
  c.categories.exploration = get<bool>(merged, "categories", "exploration");
  c.categories.exploitation = get<bool>(merged, "categories", "exploitation");
  c.categories.chain_of_actions = get<bool>(merged, "categories", "chain_of_actions");
  c.resolution = get<double>(merged, "occupancy", "resolution");
  c.turn_penalty = get<double>(merged, "occupancy", "turn_penalty");
  c.distance_edges = get<std::vector<double>>(merged, "bins", "distance_edges");
  c.distance_labels = get<std::vector<std::string>>(merged, "bins", "distance_labels");
  c.angle_none = get<double>(merged, "bins", "angle_none");
  c.angle_slight = get<double>(merged, "bins", "angle_slight");
  c.angle_moderate = get<double>(merged, "bins", "angle_moderate");
  c.fixation.dispersion_deg = get<double>(merged, "fixation", "dispersion_deg");
  c.fixation.min_duration_s = get<double>(merged, "fixation", "min_duration_s");
  c.visibility.half_angle_deg = get<double>(merged, "visibility", "half_angle_deg");
  c.visibility.max_range_m = get<double>(merged, "visibility", "max_range_m");
  c.interaction.speed_threshold = get<double>(merged, "interaction", "speed_threshold");
  c.interaction.window_s = get<double>(merged, "interaction", "window_s");
  c.clip.lead_s = get<double>(merged, "clip", "lead_s");
  c.clip.min_len_s = get<double>(merged, "clip", "min_len_s");
  c.clip.max_len_s = get<double>(merged, "clip", "max_len_s");
  c.clip.max_past_keysteps = get<int>(merged, "clip", "max_past_keysteps");
  const std::string dist = get<std::string>(merged, nullptr, "exploration_distance");
  if (dist == "path_length") {
    c.exploration_distance = ExplorationDistance::PathLength;
  } else if (dist == "first_step") {
    c.exploration_distance = ExplorationDistance::FirstStep;
  } else {
    throw Error(ErrorCode::InvalidConfig, "exploration_distance must be path_length or first_step");
  }
  c.place_min_displacement = get<double>(merged, nullptr, "place_min_displacement");
  c.max_items_per_task = get<int>(merged, nullptr, "max_items_per_task");
  c.workers = get<int>(merged, nullptr, "workers");
  if (!merged["generator_endpoint"].is_null()) {
    c.generator_endpoint = get<std::string>(merged, nullptr, "generator_endpoint");
  }
  validate_config(c);
  return c;
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::InvalidConfig, "override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &config;
  std::size_t pos = 0;
  while (true) {
    const auto dot = key.find('.', pos);
    const std::string part = key.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty()) throw Error(ErrorCode::InvalidConfig, "override key '" + key + "' is malformed");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = json::object();
    node = &(*node)[part];
    pos = dot + 1;
  }
}

RunConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::IOFailure, "cannot read config " + *path);
    std::stringstream ss;
    ss << in.rdbuf();
    doc = json::parse(ss.str(), nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::InvalidConfig, "config " + *path + " is not valid JSON");
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return config_from_json(doc);
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, message);
}

}  // namespace

void validate_config(const RunConfig& c) {
  require(c.resolution > 0.0 && c.resolution <= 1.0, "occupancy.resolution must be in (0, 1]");
  require(c.turn_penalty >= 0.0 && std::isfinite(c.turn_penalty), "occupancy.turn_penalty must be >= 0");
  (void)c.distance_binning();
  (void)c.angle_binning();
  require(c.fixation.dispersion_deg > 0.0 && c.fixation.dispersion_deg < 90.0,
          "fixation.dispersion_deg must be in (0, 90)");
  require(c.fixation.min_duration_s > 0.0, "fixation.min_duration_s must be > 0");
  require(c.visibility.half_angle_deg > 0.0 && c.visibility.half_angle_deg < 180.0,
          "visibility.half_angle_deg must be in (0, 180)");
  require(c.visibility.max_range_m > 0.0, "visibility.max_range_m must be > 0");
  require(c.interaction.speed_threshold > 0.0, "interaction.speed_threshold must be > 0");
  require(c.interaction.window_s > 0.0, "interaction.window_s must be > 0");
  require(c.clip.lead_s > 0.0, "clip.lead_s must be > 0");
  require(c.clip.min_len_s > 0.0 && c.clip.min_len_s <= c.clip.max_len_s,
          "clip.min_len_s must be in (0, clip.max_len_s]");
  require(c.clip.max_past_keysteps >= 1, "clip.max_past_keysteps must be >= 1");
  require(c.place_min_displacement > 0.0, "place_min_displacement must be > 0");
  require(c.max_items_per_task >= 1, "max_items_per_task must be >= 1");
  require(c.workers >= 1 && c.workers <= 64, "workers must be in [1, 64]");
}

}  // namespace proxgen
