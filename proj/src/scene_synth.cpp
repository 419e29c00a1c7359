// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/scene_synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "proxgen/error.hpp"
#include "proxgen/rng.hpp"

namespace proxgen {

using nlohmann::json;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kTimeEps = 1e-9;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidRecipe, what); }

Vec3 vec3_from(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 3) invalid(std::string(field) + " must be [x, y, z]");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Vec2 vec2_from(const json& j, const char* field) {
  if (!j.is_array() || j.size() != 2) invalid(std::string(field) + " must be [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

json to_json3(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json to_json2(const Vec2& v) { return json::array({v.x(), v.y()}); }

Hand hand_from(const std::string& s) {
  if (s == "left") return Hand::Left;
  if (s == "right") return Hand::Right;
  invalid("hand must be 'left' or 'right', got '" + s + "'");
}

std::string hand_name(Hand h) { return h == Hand::Left ? "left" : "right"; }

double heading_deg(const Vec2& from, const Vec2& to) {
  const Vec2 d = to - from;
  return std::atan2(d.y(), d.x()) / kDegToRad;
}

// One piece of the timeline: linear position and shortest-arc yaw.
struct Piece {
  double t0 = 0.0;
  double t1 = 0.0;
  Vec2 p0 = Vec2::Zero();
  Vec2 p1 = Vec2::Zero();
  double yaw0 = 0.0;
  double yaw1 = 0.0;
};

struct Timeline {
  std::vector<Piece> pieces;
  std::vector<double> arrivals;
  double duration = 0.0;
};

Timeline build_timeline(const SceneRecipe& r) {
  const auto& w = r.waypoints;
  if (w.empty()) invalid("recipe needs at least one waypoint");
  if (!(r.speed > 0.0)) invalid("speed must be > 0");
  std::vector<double> headings;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if ((w[i + 1].position - w[i].position).norm() < 1e-6) invalid("consecutive waypoints coincide");
    headings.push_back(heading_deg(w[i].position, w[i + 1].position));
  }
  const double fallback = w.front().face_yaw_deg.value_or(headings.empty() ? 0.0 : headings.front());

  Timeline tl;
  double t = 0.0;
  auto push = [&](double dt, Vec2 p0, Vec2 p1, double y0, double y1) {
    if (dt <= 0.0) return;
    tl.pieces.push_back(Piece{t, t + dt, p0, p1, y0, y1});
    t += dt;
  };
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i].dwell_s < 0.0) invalid("dwell must be >= 0");
    tl.arrivals.push_back(t);
    const double in = i > 0 ? headings[i - 1] : fallback;
    const double out = i + 1 < w.size() ? headings[i] : w[i].face_yaw_deg.value_or(in);
    const double d = w[i].dwell_s;
    const Vec2 p = w[i].position;
    if (w[i].face_yaw_deg) {
      const double face = *w[i].face_yaw_deg;
      push(0.25 * d, p, p, in, face);
      push(0.5 * d, p, p, face, face);
      push(0.25 * d, p, p, face, out);
    } else {
      push(d, p, p, in, out);
    }
    if (i + 1 < w.size()) {
      push((w[i + 1].position - p).norm() / r.speed, p, w[i + 1].position, headings[i], headings[i]);
    }
  }
  if (tl.pieces.empty()) tl.pieces.push_back(Piece{0.0, 0.0, w[0].position, w[0].position, fallback, fallback});
  tl.duration = t;
  return tl;
}

void sample_timeline(const Timeline& tl, double t, Vec2& position, double& yaw) {
  const Piece* piece = &tl.pieces.back();
  for (const Piece& p : tl.pieces) {
    if (t <= p.t1 + kTimeEps) {
      piece = &p;
      break;
    }
  }
  const double span = piece->t1 - piece->t0;
  const double s = span > 0.0 ? std::clamp((t - piece->t0) / span, 0.0, 1.0) : 1.0;
  position = piece->p0 + s * (piece->p1 - piece->p0);
  yaw = piece->yaw0 + s * normalize_degrees(piece->yaw1 - piece->yaw0);
}

std::vector<RecipeObject> all_objects(const SceneRecipe& r) {
  std::vector<RecipeObject> out;
  if (r.corner_fixtures) {
    const double s = 0.6;
    const double h = 1.0;
    const Vec2 lo = r.room_min;
    const Vec2 hi = r.room_max;
    const std::vector<Vec2> corners = {{lo.x() + s / 2, lo.y() + s / 2},
                                       {hi.x() - s / 2, lo.y() + s / 2},
                                       {hi.x() - s / 2, hi.y() - s / 2},
                                       {lo.x() + s / 2, hi.y() - s / 2}};
    for (std::size_t i = 0; i < corners.size(); ++i) {
      out.push_back(RecipeObject{"fixture_" + std::to_string(i), "cabinet",
                                 Vec3(corners[i].x(), corners[i].y(), h / 2), Vec3(s, s, h)});
    }
  }
  for (const RecipeObject& o : r.objects) out.push_back(o);

  const RandomObjects& ro = r.random_objects;
  if (ro.count > 0) {
    static const std::vector<std::string> kNames = {"chair", "stool", "basket", "crate", "bin", "plant", "box",
                                                    "bucket", "suitcase", "bench"};
    SeededRng rng(derive_seed(r.seed, "random-objects"));
    int placed = 0;
    for (int attempt = 0; attempt < 500 && placed < ro.count; ++attempt) {
      const Vec3 size(rng.uniform(ro.min_size, ro.max_size), rng.uniform(ro.min_size, ro.max_size),
                      rng.uniform(ro.min_height, ro.max_height));
      const Vec2 c(rng.uniform(r.room_min.x() + 1.0, r.room_max.x() - 1.0),
                   rng.uniform(r.room_min.y() + 1.0, r.room_max.y() - 1.0));
      bool clear = true;
      for (const RecipeObject& o : out) {
        const Vec2 gap = (c - o.center.head<2>()).cwiseAbs() - 0.5 * (size.head<2>() + o.size.head<2>());
        if (gap.maxCoeff() < 0.8) clear = false;
      }
      if (!clear) continue;
      const std::string name = kNames[static_cast<std::size_t>(placed) % kNames.size()];
      out.push_back(RecipeObject{"obj_r" + std::to_string(placed), name, Vec3(c.x(), c.y(), size.z() / 2), size});
      ++placed;
    }
  }
  return out;
}

}  // namespace

SceneRecipe recipe_from_json(const json& j) {
  SceneRecipe r;
  try {
    r.stream_id = j.value("stream_id", r.stream_id);
    r.scenario = j.value("scenario", r.scenario);
    r.seed = j.value("seed", std::uint64_t{0});
    r.frame_rate = j.value("frame_rate", r.frame_rate);
    if (j.contains("room")) {
      r.room_min = vec2_from(j["room"].at("min"), "room.min");
      r.room_max = vec2_from(j["room"].at("max"), "room.max");
    }
    r.corner_fixtures = j.value("corner_fixtures", r.corner_fixtures);
    r.camera_height = j.value("camera_height", r.camera_height);
    if (j.contains("camera_offset")) r.camera_offset = vec3_from(j["camera_offset"], "camera_offset");
    r.speed = j.value("speed", r.speed);
    for (const json& w : j.value("trajectory", json::array())) {
      RecipeWaypoint wp;
      wp.position = vec2_from(w.at("position"), "trajectory.position");
      wp.dwell_s = w.value("dwell", 0.0);
      if (w.contains("face_yaw") && !w["face_yaw"].is_null()) wp.face_yaw_deg = w["face_yaw"].get<double>();
      r.waypoints.push_back(wp);
    }
    for (const json& o : j.value("objects", json::array())) {
      r.objects.push_back(RecipeObject{o.at("id").get<std::string>(), o.value("name", o.at("id").get<std::string>()),
                                       vec3_from(o.at("center"), "objects.center"),
                                       vec3_from(o.at("size"), "objects.size")});
    }
    if (j.contains("random_objects")) {
      const json& ro = j["random_objects"];
      r.random_objects.count = ro.value("count", 0);
      r.random_objects.min_size = ro.value("min_size", r.random_objects.min_size);
      r.random_objects.max_size = ro.value("max_size", r.random_objects.max_size);
      r.random_objects.min_height = ro.value("min_height", r.random_objects.min_height);
      r.random_objects.max_height = ro.value("max_height", r.random_objects.max_height);
    }
    for (const json& g : j.value("gaze", json::array())) {
      r.gaze.push_back(GazeScript{g.at("start").get<double>(), g.at("end").get<double>(),
                                  g.at("target").get<std::string>()});
    }
    for (const json& i : j.value("interactions", json::array())) {
      InteractionScript s;
      s.time = i.at("time").get<double>();
      s.object = i.at("object").get<std::string>();
      const auto kind = parse_interaction_kind(i.value("kind", std::string("Afford")));
      if (!kind) invalid("unknown interaction kind");
      s.kind = *kind;
      s.duration_s = i.value("duration", s.duration_s);
      if (i.contains("displacement")) s.displacement = vec3_from(i["displacement"], "interactions.displacement");
      s.hand = hand_from(i.value("hand", std::string("right")));
      r.interactions.push_back(s);
    }
    for (const json& k : j.value("keysteps", json::array())) {
      KeystepScript s;
      s.start = k.at("start").get<double>();
      s.end = k.at("end").get<double>();
      s.text = k.at("text").get<std::string>();
      s.goal = k.value("goal", std::string());
      if (k.contains("object") && !k["object"].is_null()) s.object = k["object"].get<std::string>();
      if (k.contains("location") && !k["location"].is_null()) s.location = vec3_from(k["location"], "keysteps.location");
      if (k.contains("hands")) {
        s.hands.clear();
        for (const json& h : k["hands"]) s.hands.push_back(hand_from(h.get<std::string>()));
      }
      s.order_independent_with = k.value("order_independent_with", std::vector<int>{});
      r.keysteps.push_back(s);
    }
    r.distractor_texts = j.value("distractor_texts", std::vector<std::string>{});
  } catch (const json::exception& e) {
    invalid(std::string("malformed recipe: ") + e.what());
  }
  return r;
}

json recipe_to_json(const SceneRecipe& r) {
  json j;
  j["stream_id"] = r.stream_id;
  j["scenario"] = r.scenario;
  j["seed"] = r.seed;
  j["frame_rate"] = r.frame_rate;
  j["room"] = {{"min", to_json2(r.room_min)}, {"max", to_json2(r.room_max)}};
  j["corner_fixtures"] = r.corner_fixtures;
  j["camera_height"] = r.camera_height;
  j["camera_offset"] = to_json3(r.camera_offset);
  j["speed"] = r.speed;
  j["trajectory"] = json::array();
  for (const RecipeWaypoint& w : r.waypoints) {
    json wj = {{"position", to_json2(w.position)}, {"dwell", w.dwell_s}};
    wj["face_yaw"] = w.face_yaw_deg ? json(*w.face_yaw_deg) : json(nullptr);
    j["trajectory"].push_back(wj);
  }
  j["objects"] = json::array();
  for (const RecipeObject& o : r.objects) {
    j["objects"].push_back({{"id", o.id}, {"name", o.name}, {"center", to_json3(o.center)}, {"size", to_json3(o.size)}});
  }
  const RandomObjects& ro = r.random_objects;
  j["random_objects"] = {{"count", ro.count},       {"min_size", ro.min_size},     {"max_size", ro.max_size},
                         {"min_height", ro.min_height}, {"max_height", ro.max_height}};
  j["gaze"] = json::array();
  for (const GazeScript& g : r.gaze) j["gaze"].push_back({{"start", g.start}, {"end", g.end}, {"target", g.target}});
  j["interactions"] = json::array();
  for (const InteractionScript& s : r.interactions) {
    j["interactions"].push_back({{"time", s.time},
                                 {"object", s.object},
                                 {"kind", interaction_kind_name(s.kind)},
                                 {"duration", s.duration_s},
                                 {"displacement", to_json3(s.displacement)},
                                 {"hand", hand_name(s.hand)}});
  }
  j["keysteps"] = json::array();
  for (const KeystepScript& k : r.keysteps) {
    json kj = {{"start", k.start}, {"end", k.end}, {"text", k.text}, {"goal", k.goal}};
    kj["object"] = k.object ? json(*k.object) : json(nullptr);
    kj["location"] = k.location ? to_json3(*k.location) : json(nullptr);
    kj["hands"] = json::array();
    for (Hand h : k.hands) kj["hands"].push_back(hand_name(h));
    kj["order_independent_with"] = k.order_independent_with;
    j["keysteps"].push_back(kj);
  }
  j["distractor_texts"] = r.distractor_texts;
  return j;
}

SceneRecipe load_recipe(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open recipe " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::InvalidRecipe, path + " is not valid JSON");
  return recipe_from_json(j);
}

double trajectory_duration(const SceneRecipe& recipe) { return build_timeline(recipe).duration; }

std::vector<double> waypoint_arrivals(const SceneRecipe& recipe) { return build_timeline(recipe).arrivals; }

Mat3 yaw_camera_rotation(double yaw_deg) {
  const double y = yaw_deg * kDegToRad;
  const double c = std::cos(y);
  const double s = std::sin(y);
  Mat3 r;
  r.col(0) = Vec3(s, -c, 0.0);
  r.col(1) = Vec3(0.0, 0.0, -1.0);
  r.col(2) = Vec3(c, s, 0.0);
  return r;
}

SceneStream synthesize(const SceneRecipe& recipe) {
  if (!(recipe.frame_rate > 0.0)) invalid("frame_rate must be > 0");
  if (!(recipe.room_max.array() > recipe.room_min.array()).all()) invalid("room max must exceed room min");
  const Timeline tl = build_timeline(recipe);
  const std::vector<RecipeObject> objects = all_objects(recipe);

  auto find = [&](const std::string& id) -> const RecipeObject& {
    for (const RecipeObject& o : objects) {
      if (o.id == id) return o;
    }
    invalid("unknown object '" + id + "'");
  };
  auto in_time = [&](double t, const std::string& what) {
    if (t < -kTimeEps || t > tl.duration + kTimeEps) {
      invalid(what + " at t=" + std::to_string(t) + " lies outside the trajectory [0, " +
              std::to_string(tl.duration) + "]");
    }
  };
  for (const RecipeObject& o : objects) {
    if ((o.size.array() <= 0.0).any()) invalid("object " + o.id + " has a non-positive size");
    const Vec2 lo = o.center.head<2>() - 0.5 * o.size.head<2>();
    const Vec2 hi = o.center.head<2>() + 0.5 * o.size.head<2>();
    if ((lo.array() < recipe.room_min.array() - 1e-9).any() || (hi.array() > recipe.room_max.array() + 1e-9).any()) {
      invalid("object " + o.id + " extends outside the room");
    }
  }
  for (const GazeScript& g : recipe.gaze) {
    find(g.target);
    in_time(g.start, "gaze");
    in_time(g.end, "gaze");
  }
  for (const InteractionScript& s : recipe.interactions) {
    find(s.object);
    in_time(s.time, "interaction");
    if (!(s.duration_s > 0.0)) invalid("interaction duration must be > 0");
  }
  for (const KeystepScript& k : recipe.keysteps) {
    in_time(k.start, "keystep");
    in_time(k.end, "keystep");
    if (!(k.end > k.start)) invalid("keystep '" + k.text + "' must end after it starts");
    if (k.text.empty()) invalid("keystep text must not be empty");
    if (k.object) find(*k.object);
    if (!k.object && !k.location) invalid("keystep '" + k.text + "' needs an object or a location");
  }

  auto box_at = [&](const RecipeObject& o, double t) {
    Vec3 c = o.center;
    for (const InteractionScript& s : recipe.interactions) {
      if (s.object != o.id) continue;
      c += s.displacement * std::clamp((t - s.time) / s.duration_s, 0.0, 1.0);
    }
    return Box3D::make(c - 0.5 * o.size, c + 0.5 * o.size, o.id);
  };

  std::vector<Vec3> keystep_locations;
  for (const KeystepScript& k : recipe.keysteps) {
    keystep_locations.push_back(k.location ? *k.location : box_center(box_at(find(*k.object), k.start)));
  }

  SceneStream stream;
  stream.stream_id = recipe.stream_id;
  stream.scenario = recipe.scenario;
  stream.frame_rate = recipe.frame_rate;
  stream.distractor_texts = recipe.distractor_texts;
  for (const RecipeObject& o : objects) stream.objects.push_back(ObjectTrack{o.id, o.name, {}});

  const auto frame_count = static_cast<std::size_t>(std::floor(tl.duration * recipe.frame_rate + 1e-6)) + 1;
  stream.frames.reserve(frame_count);
  for (std::size_t i = 0; i < frame_count; ++i) {
    const double t = static_cast<double>(i) / recipe.frame_rate;
    Vec2 pos;
    double yaw = 0.0;
    sample_timeline(tl, t, pos, yaw);

    Frame f;
    f.timestamp = t;
    f.device_pose.rotation = yaw_camera_rotation(yaw);
    f.device_pose.translation = Vec3(pos.x(), pos.y(), recipe.camera_height);
    f.camera_offset = RigidTransform::from_translation(recipe.camera_offset);
    const Mat3& rot = f.device_pose.rotation;
    const Vec3& dev = f.device_pose.translation;

    for (std::size_t o = 0; o < objects.size(); ++o) stream.objects[o].boxes.push_back(box_at(objects[o], t));

    std::optional<Vec3> gaze_target;
    for (const GazeScript& g : recipe.gaze) {
      if (t >= g.start - kTimeEps && t < g.end - kTimeEps) gaze_target = box_center(box_at(find(g.target), t));
    }
    if (gaze_target && (*gaze_target - dev).norm() > 1e-6) {
      const Vec3 offset = *gaze_target - dev;
      f.gaze = GazeSample::make(t, rot.transpose() * offset.normalized(), offset.norm());
    } else {
      f.gaze = GazeSample::make(t, Vec3::UnitZ());
    }

    SkeletonSample skel;
    skel.timestamp = t;
    skel.joints["head"] = dev;
    for (Hand hand : {Hand::Left, Hand::Right}) {
      const double side = hand == Hand::Left ? -1.0 : 1.0;
      Vec3 p = dev + rot * Vec3(0.2 * side, 0.5, 0.35);
      for (std::size_t k = 0; k < recipe.keysteps.size(); ++k) {
        const KeystepScript& ks = recipe.keysteps[k];
        if (t < ks.start - kTimeEps || t > ks.end + kTimeEps) continue;
        if (std::find(ks.hands.begin(), ks.hands.end(), hand) == ks.hands.end()) continue;
        p = keystep_locations[k];
        if (ks.hands.size() > 1) p.x() += 0.04 * side;
      }
      for (const InteractionScript& s : recipe.interactions) {
        if (s.hand != hand || t < s.time - kTimeEps || t > s.time + s.duration_s + kTimeEps) continue;
        p = box_center(box_at(find(s.object), t));
      }
      skel.joints[hand == Hand::Left ? "left_hand_wrist" : "right_hand_wrist"] = p;
    }
    f.skeleton = std::move(skel);
    stream.frames.push_back(std::move(f));
  }

  for (std::size_t k = 0; k < recipe.keysteps.size(); ++k) {
    const KeystepScript& ks = recipe.keysteps[k];
    KeystepAnnotation a;
    a.id = static_cast<int>(k) + 1;
    a.text = ks.text;
    a.start = ks.start;
    a.end = ks.end;
    a.goal = ks.goal;
    a.hands = ks.hands;
    a.order_independent_with = ks.order_independent_with;
    stream.keysteps.push_back(std::move(a));
  }
  return stream;
}

SceneRecipe make_random_recipe(std::uint64_t seed, const std::string& stream_id, const std::string& scenario) {
  static const std::vector<std::string> kVerbs = {"pick up the", "inspect the", "wipe the", "open the",
                                                  "move the",    "check the",   "clean the"};
  static const std::vector<std::string> kDistractors = {
      "wash the cup",        "fold the towel",      "water the plant",      "close the window",
      "turn on the lamp",    "sweep the floor",     "plug in the charger",  "hang up the coat",
      "empty the trash",     "stack the plates",    "read the label",       "tie the bag",
      "sort the mail",       "refill the bottle",   "switch off the fan",   "lock the drawer",
      "unpack the groceries", "wind the clock",     "adjust the shelf",     "store the shoes"};

  SeededRng rng(seed);
  SceneRecipe r;
  r.stream_id = stream_id;
  r.scenario = scenario;
  r.seed = seed;
  r.room_max = Vec2(rng.uniform(7.0, 10.0), rng.uniform(5.5, 8.0));
  r.random_objects.count = 4 + static_cast<int>(rng.uniform_index(3));
  r.distractor_texts = kDistractors;

  const std::vector<RecipeObject> objects = all_objects(r);
  std::vector<RecipeObject> movable;
  for (const RecipeObject& o : objects) {
    if (o.id.rfind("obj_", 0) == 0) movable.push_back(o);
  }

  auto blocked = [&](const Vec2& p, double clearance) {
    if ((p.array() < r.room_min.array() + 0.8).any() || (p.array() > r.room_max.array() - 0.8).any()) return true;
    for (const RecipeObject& o : objects) {
      const Vec2 gap = (p - o.center.head<2>()).cwiseAbs() - 0.5 * o.size.head<2>();
      if (gap.maxCoeff() < clearance) return true;
    }
    return false;
  };

  Vec2 start = 0.5 * (r.room_min + r.room_max);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Vec2 c(rng.uniform(1.0, r.room_max.x() - 1.0), rng.uniform(1.0, r.room_max.y() - 1.0));
    if (!blocked(c, 0.5)) {
      start = c;
      break;
    }
  }
  r.waypoints.push_back(RecipeWaypoint{start, 1.0, std::nullopt});

  rng.shuffle(movable);
  const Vec2 room_center = 0.5 * (r.room_min + r.room_max);
  struct Visit {
    RecipeObject object;
    std::size_t waypoint;
  };
  std::vector<Visit> visits;
  for (const RecipeObject& o : movable) {
    Vec2 dir = room_center - o.center.head<2>();
    if (dir.norm() < 1e-3) dir = Vec2(1.0, 0.0);
    dir.normalize();
    const Vec2 stand = o.center.head<2>() + dir * (0.5 * o.size.head<2>().maxCoeff() + 0.6);
    if (blocked(stand, 0.3)) continue;
    if ((stand - r.waypoints.back().position).norm() < 0.5) continue;
    const double face = heading_deg(stand, o.center.head<2>());
    r.waypoints.push_back(RecipeWaypoint{stand, 4.0, face});
    visits.push_back(Visit{o, r.waypoints.size() - 1});
  }
  r.waypoints.push_back(RecipeWaypoint{start, 1.0, std::nullopt});
  if ((r.waypoints.back().position - r.waypoints[r.waypoints.size() - 2].position).norm() < 1e-3) {
    r.waypoints.pop_back();
  }

  const std::vector<double> arrivals = waypoint_arrivals(r);
  const std::string goal = "tidy up the room";
  for (std::size_t v = 0; v < visits.size(); ++v) {
    const Visit& visit = visits[v];
    const double a = arrivals[visit.waypoint];
    r.gaze.push_back(GazeScript{a + 0.3, a + 3.0, visit.object.id});

    InteractionScript s;
    s.time = a + 1.5;
    s.object = visit.object.id;
    s.hand = Hand::Right;
    if (v % 3 == 1) {
      const double ang = rng.uniform(-180.0, 180.0) * kDegToRad;
      s.kind = InteractionKind::Place;
      s.duration_s = 1.5;
      s.displacement = Vec3(0.4 * std::cos(ang), 0.4 * std::sin(ang), 0.0);
    } else {
      s.kind = InteractionKind::Afford;
      s.duration_s = 1.0;
      s.displacement = Vec3(0.0, 0.0, 0.15);
    }
    r.interactions.push_back(s);

    KeystepScript k;
    k.start = a + 1.5;
    k.end = a + 3.5;
    k.text = kVerbs[rng.uniform_index(kVerbs.size())] + " " + visit.object.name;
    k.goal = goal;
    k.object = visit.object.id;
    k.hands = {Hand::Left};
    if (!r.keysteps.empty() && rng.uniform01() < 0.3) {
      const int prev_id = static_cast<int>(r.keysteps.size());
      k.order_independent_with.push_back(prev_id);
    }
    r.keysteps.push_back(k);
  }
  return r;
}

}  // namespace proxgen
