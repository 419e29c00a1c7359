// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/generate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <thread>

#include "proxgen/error.hpp"
#include "proxgen/eval.hpp"
#include "proxgen/http_util.hpp"
#include "proxgen/metadata.hpp"
#include "proxgen/occupancy.hpp"

namespace proxgen {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

const ObjectTrack& object_or_throw(const SceneStream& stream, const std::string& id) {
  const ObjectTrack* t = stream.find_object(id);
  if (!t) throw Error(ErrorCode::InvalidArgument, "unknown object '" + id + "'");
  return *t;
}

std::size_t frame_or_throw(const SceneStream& stream, const json& recipe, const char* key) {
  const std::size_t f = recipe.at(key).get<std::size_t>();
  if (f >= stream.frame_count()) throw Error(ErrorCode::InvalidArgument, std::string(key) + " out of range");
  return f;
}

Vec3 center_at(const ObjectTrack& track, std::size_t frame) { return box_center(track.boxes.at(frame)); }

json distance_bins_json(const RunConfig& c) {
  return {{"distance_edges", c.distance_edges}, {"distance_labels", c.distance_labels}};
}

json angle_bins_json(const RunConfig& c) {
  return {{"angle_none", c.angle_none}, {"angle_slight", c.angle_slight}, {"angle_moderate", c.angle_moderate}};
}

DistanceBinning distance_bins_from(const json& recipe) {
  const json& b = recipe.at("bins");
  return DistanceBinning(b.at("distance_edges").get<std::vector<double>>(),
                         b.at("distance_labels").get<std::vector<std::string>>());
}

AngleBinning angle_bins_from(const json& recipe) {
  const json& b = recipe.at("bins");
  return AngleBinning(b.at("angle_none").get<double>(), b.at("angle_slight").get<double>(),
                      b.at("angle_moderate").get<double>());
}

class FixedGenerator : public ChainOrderGenerator {
 public:
  explicit FixedGenerator(std::vector<std::vector<int>> orders) : orders_(std::move(orders)) {}
  std::vector<std::vector<int>> propose(const ChainProposalRequest&) const override { return orders_; }
  std::string name() const override { return "recorded"; }

 private:
  std::vector<std::vector<int>> orders_;
};

std::vector<KeystepAnnotation> annotations_by_id(const SceneStream& stream, const std::vector<int>& ids) {
  std::vector<KeystepAnnotation> out;
  for (int id : ids) {
    auto it = std::find_if(stream.keysteps.begin(), stream.keysteps.end(),
                           [id](const KeystepAnnotation& k) { return k.id == id; });
    if (it == stream.keysteps.end()) throw Error(ErrorCode::InvalidArgument, "unknown keystep " + std::to_string(id));
    out.push_back(*it);
  }
  return out;
}

ChainProposalRequest proposal_request(const std::vector<KeystepAnnotation>& steps, const std::string& goal) {
  ChainProposalRequest req;
  req.goal_text = goal;
  for (const KeystepAnnotation& s : steps) req.step_texts.push_back(s.text);
  req.constraints = default_order_constraints(steps);
  req.independent_pairs = independent_pairs(steps);
  return req;
}

ComputedAnswer compute_head_turn(const SceneStream& stream, const json& recipe) {
  const ObjectTrack& obj = object_or_throw(stream, recipe.at("object_id").get<std::string>());
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const Vec3 center = center_at(obj, f);
  const SignedAngle theta = bev_signed_angle(stream.camera_pose(f), center, stream.convention);
  ComputedAnswer a;
  a.payload = angle_payload(theta, angle_bins_from(recipe));
  a.object_name = obj.name;
  a.tool_calls.push_back({"spatial_calculator", {{"frame", f}, {"target", vec_json(center)}},
                          {{"angle_deg", theta.degrees}, {"bin", a.payload.value}}});
  return a;
}

ComputedAnswer compute_gaze_target(const SceneStream& stream, const json& recipe) {
  const std::size_t fix = frame_or_throw(stream, recipe, "fixation_frame");
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const Frame& frame = stream.frames[fix];
  if (!frame.gaze) throw Error(ErrorCode::InvalidArgument, "fixation frame has no gaze sample");
  const Ray ray = gaze_ray_world(*frame.gaze, frame.device_pose);
  const RigidTransform last = stream.camera_pose(f);
  const std::vector<Box3D> boxes = stream.boxes_at(fix);
  auto visible = [&](const Box3D& box) {
    const ObjectTrack* t = stream.find_object(box.object_id);
    if (!t) return false;
    try {
      return is_visible(last, center_at(*t, f), VisibilityParams{recipe.at("half_angle_deg").get<double>(),
                                                                 recipe.at("max_range_m").get<double>()},
                        stream.convention);
    } catch (const Error&) {
      return false;
    }
  };
  const std::optional<FixatedObject> hit = resolve_fixated_object(ray, boxes, visible);
  if (!hit) throw Error(ErrorCode::NoFutureEvent, "gaze ray hits no object visible at the last frame");
  const ObjectTrack& obj = object_or_throw(stream, hit->object_id);
  const Vec3 center = center_at(obj, f);
  const SignedAngle theta = bev_signed_angle(last, center, stream.convention);
  ComputedAnswer a;
  a.payload = direction_payload(discretize_direction(theta));
  a.object_name = obj.name;
  a.tool_calls.push_back({"gaze_parser",
                          {{"frame", fix}, {"origin", vec_json(ray.origin)}, {"dir", vec_json(ray.dir)}},
                          {{"object_id", hit->object_id}, {"hit_point", vec_json(hit->hit_point)}, {"t", hit->t}}});
  a.tool_calls.push_back({"spatial_calculator", {{"frame", f}, {"target", vec_json(center)}},
                          {{"angle_deg", theta.degrees}, {"direction", a.payload.value}}});
  return a;
}

ComputedAnswer compute_path(const SceneStream& stream, const json& recipe) {
  const ObjectTrack& obj = object_or_throw(stream, recipe.at("object_id").get<std::string>());
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const double resolution = recipe.at("resolution").get<double>();
  const double penalty = recipe.at("turn_penalty").get<double>();
  const std::string measure = recipe.at("measure").get<std::string>();
  const std::vector<Box3D> boxes = stream.boxes_at(f);
  const OccupancyGrid grid = build_occupancy(boxes, resolution);
  const RigidTransform pose = stream.camera_pose(f);
  const Vec3 start = camera_center(pose);
  const Vec3 goal = center_at(obj, f);
  const GridPath path = find_path(grid, start, goal, penalty);
  const NavPath nav = make_nav_path(path, pose, stream.convention);
  if (nav.steps.empty()) throw Error(ErrorCode::NoPath, "start and goal project to the same cell");

  ComputedAnswer a;
  a.object_name = obj.name;
  double length = 0.0;
  for (const NavStep& s : nav.steps) length += s.distance;
  if (measure == "direction") {
    a.payload = direction_payload(nav.steps.front().direction);
  } else if (measure == "first_step") {
    a.payload = distance_payload(nav.steps.front().distance, distance_bins_from(recipe));
  } else if (measure == "path_length") {
    a.payload = distance_payload(length, distance_bins_from(recipe));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown path measure '" + measure + "'");
  }
  a.tool_calls.push_back({"occupancy_map_generator",
                          {{"frame", f}, {"resolution", resolution}, {"boxes", boxes.size()}},
                          {{"width", grid.width()}, {"height", grid.height()}, {"free", grid.count(CellState::Free)}}});
  a.tool_calls.push_back({"exploration_path_generator",
                          {{"start", vec_json(start)}, {"goal", vec_json(goal)}, {"turn_penalty", penalty}},
                          {{"cost", path.cost},
                           {"steps", nav.steps.size()},
                           {"length_m", length},
                           {"first_step", {{"distance", nav.steps.front().distance},
                                           {"direction", direction_name(nav.steps.front().direction)}}}}});
  return a;
}

ComputedAnswer compute_afford(const SceneStream& stream, const json& recipe) {
  const ObjectTrack& obj = object_or_throw(stream, recipe.at("object_id").get<std::string>());
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const std::string measure = recipe.at("measure").get<std::string>();
  const Vec3 center = center_at(obj, f);
  const AffordAnswer ans = afford_answer(stream.camera_pose(f), center, stream.convention);
  ComputedAnswer a;
  a.object_name = obj.name;
  if (measure == "distance") {
    a.payload = distance_payload(ans.distance, distance_bins_from(recipe));
  } else if (measure == "direction") {
    a.payload = direction_payload(ans.direction);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown afford measure '" + measure + "'");
  }
  a.tool_calls.push_back({"affordance_detector",
                          {{"kind", "Afford"}, {"frame", f}, {"center", vec_json(center)}},
                          {{"distance_m", ans.distance},
                           {"angle_deg", ans.angle.degrees},
                           {"direction", direction_name(ans.direction)}}});
  return a;
}

ComputedAnswer compute_place(const SceneStream& stream, const json& recipe) {
  const ObjectTrack& obj = object_or_throw(stream, recipe.at("object_id").get<std::string>());
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const std::size_t g = frame_or_throw(stream, recipe, "future_frame");
  const Vec3 from = center_at(obj, f);
  const Vec3 to = center_at(obj, g);
  const Direction8 d = place_answer(stream.camera_pose(f), from, to, stream.convention);
  ComputedAnswer a;
  a.object_name = obj.name;
  a.payload = direction_payload(d);
  a.tool_calls.push_back({"affordance_detector",
                          {{"kind", "Place"}, {"frame", f}, {"future_frame", g}},
                          {{"from", vec_json(from)}, {"to", vec_json(to)}, {"direction", direction_name(d)}}});
  return a;
}

ComputedAnswer compute_action(const SceneStream& stream, const json& recipe) {
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const std::size_t g = frame_or_throw(stream, recipe, "future_frame");
  const std::vector<KeystepAnnotation> ks = annotations_by_id(stream, {recipe.at("keystep_id").get<int>()});
  const SignedAngle theta = action_answer(stream.camera_pose(f), stream.camera_pose(g), stream.convention);
  ComputedAnswer a;
  a.object_name = ks.front().text;
  a.payload = angle_payload(theta, angle_bins_from(recipe));
  a.tool_calls.push_back({"affordance_detector",
                          {{"kind", "Action"}, {"frame", f}, {"future_frame", g}, {"keystep", ks.front().id}},
                          {{"angle_deg", theta.degrees}, {"bin", a.payload.value}}});
  return a;
}

ComputedAnswer compute_chain(const SceneStream& stream, const json& recipe) {
  const std::vector<KeystepAnnotation> future =
      annotations_by_id(stream, recipe.at("keystep_ids").get<std::vector<int>>());
  const std::size_t f = frame_or_throw(stream, recipe, "frame");
  const std::string goal = recipe.at("goal").get<std::string>();
  const std::vector<Keystep> steps = extract_keysteps(stream, future);
  const RigidTransform reference = stream.camera_pose(f);
  const FixedGenerator generator(recipe.at("proposals").get<std::vector<std::vector<int>>>());
  const std::vector<OrderConstraint> constraints = default_order_constraints(future);
  const std::vector<std::pair<int, int>> independent = independent_pairs(future);
  const std::vector<ActionChain> chains =
      enumerate_valid_chains(steps, constraints, generator, reference, independent, goal, stream.convention);
  SeededRng rng(recipe.at("candidate_seed").get<std::uint64_t>());
  const std::vector<std::string> pool = recipe.at("distractor_pool").get<std::vector<std::string>>();
  const CandidateSet set = build_candidate_set(steps, pool, rng);

  ChainGroundTruth truth;
  truth.goal_text = goal;
  truth.candidates = set.texts;
  truth.k = static_cast<int>(steps.size());
  for (const ActionChain& c : chains) truth.valid_chains.push_back(remap_chain(c, steps, set));

  ComputedAnswer a;
  a.chain = truth;
  json locs = json::array();
  for (const Keystep& s : steps) locs.push_back({{"id", s.id}, {"location", vec_json(s.location)}});
  a.tool_calls.push_back({"keystep_extraction", {{"keystep_ids", recipe.at("keystep_ids")}}, {{"steps", locs}}});
  json out = json::array();
  for (const ActionChain& c : truth.valid_chains) {
    std::string letters;
    for (Direction8 d : c.edges) letters.push_back(direction_letter(d));
    out.push_back({{"nodes", c.node_ids}, {"edges", letters}});
  }
  a.tool_calls.push_back({"chain_constructor", {{"frame", f}, {"proposals", recipe.at("proposals")}},
                          {{"valid_chains", out}, {"true_ids", set.true_ids}}});
  return a;
}

}  // namespace

json skip_to_json(const SkipRecord& s) {
  return {{"stream_id", s.stream_id}, {"task", s.task}, {"code", s.code}, {"detail", s.detail}};
}

ComputedAnswer compute_answer(const SceneStream& stream, const json& recipe) {
  try {
    const std::string task = recipe.at("task").get<std::string>();
    if (task == "intention.head_turn") return compute_head_turn(stream, recipe);
    if (task == "intention.gaze_target") return compute_gaze_target(stream, recipe);
    if (task == "exploration.path") return compute_path(stream, recipe);
    if (task == "exploitation.afford") return compute_afford(stream, recipe);
    if (task == "exploitation.place") return compute_place(stream, recipe);
    if (task == "exploitation.action") return compute_action(stream, recipe);
    if (task == "chain") return compute_chain(stream, recipe);
    throw Error(ErrorCode::InvalidArgument, "unknown task '" + task + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("malformed recipe: ") + e.what());
  }
}

ReplayOutcome replay_item(const QAItem& item, const SceneStream& stream) {
  if (item.clip.stream_id != stream.stream_id) return {false, "item belongs to stream " + item.clip.stream_id};
  ComputedAnswer a;
  try {
    a = compute_answer(stream, item.provenance.recipe);
  } catch (const Error& e) {
    return {false, e.what()};
  }
  if (item.chain) {
    if (!a.chain) return {false, "recipe does not produce a chain"};
    const ChainPayload& c = *item.chain;
    const bool same = c.goal == a.chain->goal_text && c.candidates == a.chain->candidates && c.k == a.chain->k &&
                      c.valid_chains == a.chain->valid_chains;
    return {same, same ? "" : "chain ground truth differs"};
  }
  if (!(a.payload == item.answer_payload)) {
    return {false, "payload " + a.payload.value + " != stored " + item.answer_payload.value};
  }
  if (!(item.answer_option().payload == a.payload)) return {false, "answer option does not carry the payload"};
  return {true, ""};
}

std::vector<std::vector<int>> HttpChainGenerator::propose(const ChainProposalRequest& request) const {
  json constraints = json::array();
  for (const OrderConstraint& c : request.constraints) constraints.push_back({c.before, c.after});
  json pairs = json::array();
  for (const auto& [i, j] : request.independent_pairs) pairs.push_back({i, j});
  const json body = {{"goal", request.goal_text},
                     {"steps", request.step_texts},
                     {"constraints", constraints},
                     {"independent_pairs", pairs}};
  const json reply = post_json(url_, body, 30);
  try {
    return reply.at("orders").get<std::vector<std::vector<int>>>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseFailure, "generator reply lacks an 'orders' list");
  }
}

namespace {

constexpr const char* kIdCodes[] = {"int-a", "int-r", "nav-a", "nav-r", "xpt-a", "xpt-r", "chain"};

struct StreamOutput {
  std::map<std::string, std::vector<QAItem>> by_code;
  std::vector<SkipRecord> skips;
};

class StreamGenerator {
 public:
  StreamGenerator(const RunConfig& config, const SceneStream& stream, const std::vector<std::string>& pool,
                  const ChainOrderGenerator& generator)
      : config_(config), stream_(stream), pool_(pool), generator_(generator) {
    std::map<std::string, int> names;
    for (const ObjectTrack& o : stream.objects) ++names[o.name];
    for (const ObjectTrack& o : stream.objects) {
      if (names[o.name] == 1) unique_.insert(o.object_id);
    }
  }

  StreamOutput run() {
    if (stream_.frames.empty()) {
      skip("stream", ErrorCode::InvalidArgument, "stream has no frames");
      return std::move(out_);
    }
    if (config_.categories.intention || config_.categories.exploration) planning_tasks();
    if (config_.categories.intention) gaze_tasks();
    if (config_.categories.exploitation) {
      interaction_tasks();
      action_tasks();
    }
    if (config_.categories.chain_of_actions) chain_task();
    return std::move(out_);
  }

 private:
  bool full(const std::string& key) const {
    auto it = used_.find(key);
    return it != used_.end() && it->second >= config_.max_items_per_task;
  }

  void skip(const std::string& task, ErrorCode code, const std::string& detail) {
    out_.skips.push_back({stream_.stream_id, task, std::string(to_string(code)), detail});
  }
  void skip(const std::string& task, const std::string& code, const std::string& detail) {
    out_.skips.push_back({stream_.stream_id, task, code, detail});
  }

  std::string next_id(const std::string& code) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03d", counters_[code]++);
    return stream_.stream_id + "-" + code + "-" + buf;
  }

  // Forges one MCQ item from a recipe; errors become skips.
  void emit(const std::string& limit_key, const std::string& task, const ClipSpec& clip, ProximityKind kind,
            const json& recipe, const PayloadDomain& domain,
            const std::function<std::string(const ComputedAnswer&)>& question) {
    if (full(limit_key)) return;
    ComputedAnswer a;
    try {
      a = compute_answer(stream_, recipe);
    } catch (const Error& e) {
      skip(task, e.code(), e.detail());
      return;
    }
    const std::string code = std::string(clip.category == Category::Intention     ? "int"
                                         : clip.category == Category::Exploration ? "nav"
                                                                                  : "xpt") +
                             (kind == ProximityKind::Approximate ? "-a" : "-r");
    const std::string id = next_id(code);
    const std::uint64_t seed = derive_seed(config_.seed, id);
    SeededRng rng(seed);
    QAItem item = forge_mcq(clip.category, kind, a.payload, domain, question(a), rng);
    item.id = id;
    item.clip = clip;
    item.provenance.seed = seed;
    item.provenance.tool_calls = std::move(a.tool_calls);
    item.provenance.recipe = recipe;
    validate_item(item);
    out_.by_code[code].push_back(std::move(item));
    ++used_[limit_key];
  }

  void planning_tasks() {
    const PayloadDomain angles = PayloadDomain::angles(config_.angle_binning());
    const PayloadDomain distances = PayloadDomain::distances(config_.distance_binning());
    const PayloadDomain directions = PayloadDomain::directions();
    for (const ObjectTrack& obj : stream_.objects) {
      const bool want_int = config_.categories.intention && !full("int-a");
      const bool want_nav = config_.categories.exploration && !(full("nav-a") && full("nav-r"));
      if (!want_int && !want_nav) break;
      if (!unique_.count(obj.object_id)) {
        skip("planning", "AmbiguousGoal", "object " + obj.object_id + " shares the name '" + obj.name + "'");
        continue;
      }
      ClipSpec clip;
      try {
        clip = sample_planning_clip(stream_, obj.object_id, Category::Exploration, config_.visibility, config_.clip);
      } catch (const Error& e) {
        skip("planning", e.code(), obj.object_id + ": " + e.detail());
        continue;
      }
      const std::size_t f = clip.last_frame;
      if (want_int) {
        ClipSpec ic = clip;
        ic.category = Category::Intention;
        const json recipe = {{"task", "intention.head_turn"},
                             {"object_id", obj.object_id},
                             {"frame", f},
                             {"bins", angle_bins_json(config_)}};
        emit("int-a", "intention.head_turn", ic, ProximityKind::Approximate, recipe, angles,
             [](const ComputedAnswer& a) {
               return "The camera wearer wants to look at the " + a.object_name +
                      ", which is out of view right now. How should they turn their head?";
             });
      }
      if (want_nav) {
        json recipe = {{"task", "exploration.path"},
                       {"object_id", obj.object_id},
                       {"frame", f},
                       {"resolution", config_.resolution},
                       {"turn_penalty", config_.turn_penalty}};
        const bool first = config_.exploration_distance == ExplorationDistance::FirstStep;
        json approx = recipe;
        approx["measure"] = first ? "first_step" : "path_length";
        approx["bins"] = distance_bins_json(config_);
        emit("nav-a", "exploration.path", clip, ProximityKind::Approximate, approx, distances,
             [first](const ComputedAnswer& a) {
               return first ? "The camera wearer wants to walk to the " + a.object_name +
                                  ". How long is the first step of a feasible route from where they stand?"
                            : "The camera wearer wants to walk to the " + a.object_name +
                                  ". About how long is a feasible walking route from where they stand?";
             });
        json rel = recipe;
        rel["measure"] = "direction";
        emit("nav-r", "exploration.path", clip, ProximityKind::Relative, rel, directions,
             [](const ComputedAnswer& a) {
               return "The camera wearer wants to walk to the " + a.object_name +
                      ". In which direction should they take the first step?";
             });
      }
    }
  }

  void gaze_tasks() {
    std::vector<GazeSample> gaze;
    std::vector<TimedPose> poses;
    std::vector<std::size_t> frame_of;
    for (std::size_t i = 0; i < stream_.frames.size(); ++i) {
      const Frame& fr = stream_.frames[i];
      poses.push_back({fr.timestamp, fr.device_pose});
      if (fr.gaze) {
        gaze.push_back(*fr.gaze);
        frame_of.push_back(i);
      }
    }
    std::vector<FixationEvent> fixations;
    try {
      fixations = detect_fixations(gaze, poses, config_.fixation);
    } catch (const Error& e) {
      skip("intention.gaze_target", e.code(), e.detail());
      return;
    }
    const PayloadDomain directions = PayloadDomain::directions();
    for (const FixationEvent& ev : fixations) {
      if (full("int-r")) break;
      const std::size_t fix = frame_of[ev.first_sample];
      ClipSpec clip;
      try {
        clip = sample_forecasting_clip(stream_, AnchorEvent{ev.start, AnchorKind::Fixation}, Category::Intention,
                                       config_.clip.lead_s);
      } catch (const Error& e) {
        skip("intention.gaze_target", e.code(), e.detail());
        continue;
      }
      const json recipe = {{"task", "intention.gaze_target"},
                           {"fixation_frame", fix},
                           {"frame", clip.last_frame},
                           {"half_angle_deg", config_.visibility.half_angle_deg},
                           {"max_range_m", config_.visibility.max_range_m}};
      ComputedAnswer probe;
      try {
        probe = compute_answer(stream_, recipe);
      } catch (const Error& e) {
        skip("intention.gaze_target", e.code(), e.detail());
        continue;
      }
      const std::string object_id = probe.tool_calls.front().output.at("object_id").get<std::string>();
      if (!unique_.count(object_id)) {
        skip("intention.gaze_target", "AmbiguousGoal", "gazed object " + object_id + " has a shared name");
        continue;
      }
      clip.goal_object_id = object_id;
      emit("int-r", "intention.gaze_target", clip, ProximityKind::Relative, recipe, directions,
           [](const ComputedAnswer& a) {
             return "The camera wearer is about to shift their gaze to the " + a.object_name +
                    ". In which direction is it from their current viewpoint?";
           });
    }
  }

  bool hand_inside(std::size_t frame, const Box3D& box) const {
    const auto& sk = stream_.frames[frame].skeleton;
    if (!sk) return false;
    for (const auto& [name, p] : sk->joints) {
      if (is_hand_joint(name) && box.contains(p)) return true;
    }
    return false;
  }

  void interaction_tasks() {
    const PayloadDomain distances = PayloadDomain::distances(config_.distance_binning());
    const PayloadDomain directions = PayloadDomain::directions();
    const std::vector<SkeletonSample> skeletons = stream_.skeletons();
    const double thr = config_.interaction.speed_threshold;
    for (const ObjectTrack& obj : stream_.objects) {
      if (full("afford-a") && full("afford-r") && full("place")) break;
      if (!unique_.count(obj.object_id)) continue;
      const std::vector<TrackSample> track = stream_.track_of(obj);
      double not_before = -std::numeric_limits<double>::infinity();
      while (true) {
        const std::optional<InteractionEvent> ev =
            detect_interaction(track, skeletons, config_.interaction, not_before);
        if (!ev) break;
        const std::size_t f0 = stream_.frame_at_or_before(ev->onset);
        std::optional<std::size_t> settled;
        bool moving = false;
        for (std::size_t g = f0 + 1; g < track.size(); ++g) {
          const std::optional<double> v = window_speed(track, g, config_.interaction.window_s);
          if (!v) continue;
          if (*v > thr) {
            moving = true;
          } else if (moving) {
            settled = g;
            break;
          }
        }
        std::optional<std::size_t> idle;
        for (std::size_t h = settled.value_or(track.size()); h < track.size(); ++h) {
          const std::optional<double> v = window_speed(track, h, config_.interaction.window_s);
          if (v && *v <= thr && !hand_inside(h, track[h].box)) {
            idle = h;
            break;
          }
        }
        handle_interaction(obj, *ev, settled, distances, directions);
        if (!idle) break;
        not_before = track[*idle].timestamp;
      }
    }
  }

  void handle_interaction(const ObjectTrack& obj, const InteractionEvent& ev, std::optional<std::size_t> settled,
                          const PayloadDomain& distances, const PayloadDomain& directions) {
    ClipSpec clip;
    try {
      clip = sample_forecasting_clip(stream_, AnchorEvent{ev.onset, AnchorKind::Interaction}, Category::Exploitation,
                                     config_.clip.lead_s, obj.object_id);
    } catch (const Error& e) {
      skip("exploitation", e.code(), obj.object_id + ": " + e.detail());
      return;
    }
    const std::size_t f = clip.last_frame;
    bool place = false;
    if (settled) {
      const Vec3 d = center_at(obj, *settled) - center_at(obj, f);
      place = d.head<2>().norm() >= config_.place_min_displacement;
    }
    if (place) {
      if (full("place")) return;
      const Vec3 target = center_at(obj, *settled);
      bool seen = false;
      for (std::size_t i = clip.first_frame; i <= clip.last_frame && !seen; ++i) {
        try {
          seen = is_visible(stream_.camera_pose(i), target, config_.visibility, stream_.convention);
        } catch (const Error&) {
        }
      }
      if (!seen) {
        skip("exploitation.place", "PlacementNotVisible", obj.object_id + " placement never in view");
        return;
      }
      const json recipe = {
          {"task", "exploitation.place"}, {"object_id", obj.object_id}, {"frame", f}, {"future_frame", *settled}};
      emit("place", "exploitation.place", clip, ProximityKind::Relative, recipe, directions,
           [](const ComputedAnswer& a) {
             return "The camera wearer is about to move the " + a.object_name +
                    ". In which direction will it be moved, relative to their current viewpoint?";
           });
      return;
    }
    const json base = {{"task", "exploitation.afford"}, {"object_id", obj.object_id}, {"frame", f}};
    json dist = base;
    dist["measure"] = "distance";
    dist["bins"] = distance_bins_json(config_);
    emit("afford-a", "exploitation.afford", clip, ProximityKind::Approximate, dist, distances,
         [](const ComputedAnswer& a) {
           return "The camera wearer is about to interact with the " + a.object_name +
                  ". How far is it from them right now?";
         });
    json dir = base;
    dir["measure"] = "direction";
    emit("afford-r", "exploitation.afford", clip, ProximityKind::Relative, dir, directions,
         [](const ComputedAnswer& a) {
           return "The camera wearer is about to interact with the " + a.object_name +
                  ". In which direction is it from their current viewpoint?";
         });
  }

  void action_tasks() {
    const PayloadDomain angles = PayloadDomain::angles(config_.angle_binning());
    std::vector<KeystepAnnotation> steps = stream_.keysteps;
    std::stable_sort(steps.begin(), steps.end(), [](const KeystepAnnotation& a, const KeystepAnnotation& b) {
      return a.start < b.start || (a.start == b.start && a.id < b.id);
    });
    for (const KeystepAnnotation& k : steps) {
      if (full("action")) break;
      ClipSpec clip;
      try {
        clip = sample_forecasting_clip(stream_, AnchorEvent{k.start, AnchorKind::Keystep}, Category::Exploitation,
                                       config_.clip.lead_s);
      } catch (const Error& e) {
        skip("exploitation.action", e.code(), "keystep " + std::to_string(k.id) + ": " + e.detail());
        continue;
      }
      const json recipe = {{"task", "exploitation.action"},
                           {"keystep_id", k.id},
                           {"frame", clip.last_frame},
                           {"future_frame", stream_.frame_at_or_before(k.end)},
                           {"bins", angle_bins_json(config_)}};
      emit("action", "exploitation.action", clip, ProximityKind::Approximate, recipe, angles,
           [](const ComputedAnswer& a) {
             return "The camera wearer is about to " + a.object_name +
                    ". By the time they finish, how will their facing direction have changed?";
           });
    }
  }

  void chain_task() {
    ChainClip cc;
    try {
      cc = sample_chain_clip(stream_, config_.clip);
    } catch (const Error& e) {
      skip("chain", e.code(), e.detail());
      return;
    }
    std::vector<int> ids;
    for (const KeystepAnnotation& k : cc.future) ids.push_back(k.id);
    std::vector<std::vector<int>> proposals;
    try {
      proposals = generator_.propose(proposal_request(cc.future, cc.goal_text));
    } catch (const Error& e) {
      skip("chain", e.code(), "generator: " + e.detail());
      return;
    }
    const std::string id = next_id("chain");
    const std::uint64_t seed = derive_seed(config_.seed, id);
    const json recipe = {{"task", "chain"},
                         {"keystep_ids", ids},
                         {"frame", cc.clip.last_frame},
                         {"goal", cc.goal_text},
                         {"generator", generator_.name()},
                         {"proposals", proposals},
                         {"distractor_pool", pool_},
                         {"candidate_seed", seed}};
    ComputedAnswer a;
    try {
      a = compute_answer(stream_, recipe);
    } catch (const Error& e) {
      skip("chain", e.code(), e.detail());
      return;
    }
    QAItem item = forge_chain_item(cc.clip, *a.chain);
    item.id = id;
    item.provenance.seed = seed;
    item.provenance.tool_calls = std::move(a.tool_calls);
    item.provenance.recipe = recipe;
    validate_item(item);
    out_.by_code["chain"].push_back(std::move(item));
  }

  const RunConfig& config_;
  const SceneStream& stream_;
  const std::vector<std::string>& pool_;
  const ChainOrderGenerator& generator_;
  std::set<std::string> unique_;
  std::map<std::string, int> used_;
  std::map<std::string, int> counters_;
  StreamOutput out_;
};

// Stream's own distractor texts, then keystep texts of other streams with the
// same scenario, deduplicated in first-seen order.
std::vector<std::string> distractor_pool(const std::vector<SceneStream>& streams, std::size_t self) {
  std::vector<std::string> pool;
  std::set<std::string> seen;
  auto add = [&](const std::string& t) {
    if (seen.insert(t).second) pool.push_back(t);
  };
  for (const std::string& t : streams[self].distractor_texts) add(t);
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (i == self || streams[i].scenario != streams[self].scenario) continue;
    for (const KeystepAnnotation& k : streams[i].keysteps) add(k.text);
  }
  return pool;
}

}  // namespace

GenerationResult run_generation(const RunConfig& config, const std::vector<SceneStream>& streams,
                                const ChainOrderGenerator* generator) {
  validate_config(config);
  std::set<std::string> ids;
  for (const SceneStream& s : streams) {
    if (!ids.insert(s.stream_id).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate stream id '" + s.stream_id + "'");
    }
  }
  SwapIndependentGenerator swap;
  std::unique_ptr<HttpChainGenerator> http;
  if (!generator && config.generator_endpoint) {
    http = std::make_unique<HttpChainGenerator>(*config.generator_endpoint);
    generator = http.get();
  }
  if (!generator) generator = &swap;

  std::vector<std::vector<std::string>> pools;
  for (std::size_t i = 0; i < streams.size(); ++i) pools.push_back(distractor_pool(streams, i));

  std::vector<StreamOutput> outputs(streams.size());
  std::vector<std::string> failures(streams.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < streams.size(); i = next++) {
      try {
        outputs[i] = StreamGenerator(config, streams[i], pools[i], *generator).run();
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(config.workers), std::max<std::size_t>(1, streams.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();

  GenerationResult result;
  json per_stream = json::array();
  std::map<std::string, int> groups;
  std::map<std::string, int> codes;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    StreamOutput& o = outputs[i];
    if (!failures[i].empty()) o.skips.push_back({streams[i].stream_id, "stream", "StreamFailure", failures[i]});
    std::size_t count = 0;
    for (const char* code : kIdCodes) {
      for (QAItem& item : o.by_code[code]) {
        ++groups[group_key(item)];
        result.items.push_back(std::move(item));
        ++count;
      }
    }
    for (const SkipRecord& s : o.skips) ++codes[s.code];
    per_stream.push_back({{"stream_id", streams[i].stream_id},
                          {"digest", stream_digest(streams[i])},
                          {"items", count},
                          {"skips", o.skips.size()}});
    result.skips.insert(result.skips.end(), o.skips.begin(), o.skips.end());
  }
  result.report = {{"schema", "proxgen-run-report/1"},
                   {"config", config_to_json(config)},
                   {"chain_generator", generator->name()},
                   {"streams", per_stream},
                   {"items_total", result.items.size()},
                   {"groups", groups},
                   {"skips_total", result.skips.size()},
                   {"skip_codes", codes}};
  return result;
}

void write_generation(const std::string& out_dir, const GenerationResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IOFailure, "cannot create " + out_dir + ": " + ec.message());
  const std::filesystem::path dir(out_dir);
  write_items((dir / "benchmark.jsonl").string(), result.items);
  auto write_text = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + p.string());
    out << text;
    if (!out) throw Error(ErrorCode::IOFailure, "write failed for " + p.string());
  };
  std::string skips;
  for (const SkipRecord& s : result.skips) skips += skip_to_json(s).dump() + "\n";
  write_text(dir / "skip_log.jsonl", skips);
  write_text(dir / "run_report.json", result.report.dump(2) + "\n");
}

}  // namespace proxgen
