// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/metadata.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "proxgen/chains.hpp"
#include "proxgen/error.hpp"

namespace proxgen {

using nlohmann::json;

namespace {

constexpr double kIngestOrthonormalTolerance = 1e-6;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json pose_json(const RigidTransform& t) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)}));
  return {{"rotation", rows}, {"translation", vec_json(t.translation)}};
}

json box_json(const Box3D& b) {
  return json::array({b.min_corner.x(), b.min_corner.y(), b.min_corner.z(), b.max_corner.x(), b.max_corner.y(),
                      b.max_corner.z()});
}

std::string hand_name(Hand h) { return h == Hand::Left ? "left" : "right"; }

// Parse context for diagnostics.
struct Where {
  std::size_t line = 0;
  std::string frame;
  std::string str() const { return "line " + std::to_string(line) + (frame.empty() ? "" : " (" + frame + ")"); }
};

[[noreturn]] void violation(const Where& w, const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, w.str() + ": " + what);
}

const json& field(const json& j, const char* name, const Where& w) {
  if (!j.is_object() || !j.contains(name)) violation(w, std::string("missing field '") + name + "'");
  return j[name];
}

double number(const json& j, const char* name, const Where& w) {
  const json& v = field(j, name, w);
  if (!v.is_number()) violation(w, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::string text(const json& j, const char* name, const Where& w) {
  const json& v = field(j, name, w);
  if (!v.is_string()) violation(w, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Vec3 vec(const json& v, const char* name, const Where& w) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
    violation(w, std::string("field '") + name + "' must be [x, y, z]");
  }
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

RigidTransform pose(const json& j, const char* name, const Where& w) {
  const json& p = field(j, name, w);
  const json& rows = field(p, "rotation", w);
  if (!rows.is_array() || rows.size() != 3) violation(w, std::string(name) + ".rotation must be 3x3");
  RigidTransform t;
  for (int r = 0; r < 3; ++r) {
    const Vec3 row = vec(rows[r], "rotation row", w);
    t.rotation.row(r) = row.transpose();
  }
  t.translation = vec(field(p, "translation", w), "translation", w);
  if (!t.is_orthonormal(kIngestOrthonormalTolerance)) violation(w, std::string(name) + " rotation is not orthonormal");
  if (!is_finite(t.translation)) violation(w, std::string(name) + " translation is not finite");
  return t;
}

Box3D box(const json& v, const std::string& id, const Where& w) {
  if (!v.is_array() || v.size() != 6) violation(w, "box must be [minx, miny, minz, maxx, maxy, maxz]");
  for (const json& x : v) {
    if (!x.is_number()) violation(w, "box coordinates must be numbers");
  }
  try {
    return Box3D::make(Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>()),
                       Vec3(v[3].get<double>(), v[4].get<double>(), v[5].get<double>()), id);
  } catch (const Error& e) {
    violation(w, "object " + id + ": " + e.detail());
  }
}

std::vector<Hand> hands(const json& j, const Where& w) {
  std::vector<Hand> out;
  if (!j.contains("hands")) return out;
  for (const json& h : j["hands"]) {
    const std::string s = h.is_string() ? h.get<std::string>() : "";
    if (s == "left") {
      out.push_back(Hand::Left);
    } else if (s == "right") {
      out.push_back(Hand::Right);
    } else {
      violation(w, "hands entries must be 'left' or 'right'");
    }
  }
  return out;
}

struct ProxyObject {
  std::size_t track;
  Where where;
  std::vector<std::tuple<double, double, std::vector<Hand>>> intervals;
};

}  // namespace

std::string serialize_stream(const SceneStream& stream) {
  std::string out;
  json header = {{"record", "header"},
                 {"schema", kMetadataSchema},
                 {"stream_id", stream.stream_id},
                 {"scenario", stream.scenario},
                 {"frame_rate", stream.frame_rate},
                 {"axis_convention",
                  {{"forward_column", stream.convention.forward_column}, {"forward_sign", stream.convention.forward_sign}}},
                 {"distractor_texts", stream.distractor_texts}};
  out += header.dump() + "\n";
  for (std::size_t i = 0; i < stream.frames.size(); ++i) {
    const Frame& f = stream.frames[i];
    json j = {{"record", "frame"},
              {"index", i},
              {"timestamp", f.timestamp},
              {"device_pose", pose_json(f.device_pose)},
              {"camera_offset", pose_json(f.camera_offset)}};
    if (f.gaze) {
      j["gaze"] = {{"dir", vec_json(f.gaze->ray_dir_device)},
                   {"depth", f.gaze->depth ? json(*f.gaze->depth) : json(nullptr)}};
    } else {
      j["gaze"] = nullptr;
    }
    if (f.skeleton) {
      json joints = json::object();
      for (const auto& [name, p] : f.skeleton->joints) joints[name] = vec_json(p);
      j["skeleton"] = joints;
    } else {
      j["skeleton"] = nullptr;
    }
    out += j.dump() + "\n";
  }
  for (const ObjectTrack& o : stream.objects) {
    json j = {{"record", "object"}, {"object_id", o.object_id}, {"name", o.name}};
    bool fixed = !o.boxes.empty();
    for (const Box3D& b : o.boxes) {
      fixed = fixed && b.min_corner == o.boxes.front().min_corner && b.max_corner == o.boxes.front().max_corner;
    }
    if (fixed) {
      j["box"] = box_json(o.boxes.front());
    } else {
      json boxes = json::array();
      for (const Box3D& b : o.boxes) boxes.push_back(box_json(b));
      j["boxes"] = boxes;
    }
    out += j.dump() + "\n";
  }
  for (const KeystepAnnotation& k : stream.keysteps) {
    json hs = json::array();
    for (Hand h : k.hands) hs.push_back(hand_name(h));
    json j = {{"record", "keystep"}, {"id", k.id},     {"text", k.text},
              {"start", k.start},    {"end", k.end},   {"goal", k.goal},
              {"hands", hs},         {"order_independent_with", k.order_independent_with}};
    out += j.dump() + "\n";
  }
  return out;
}

void write_stream(const std::string& path, const SceneStream& stream) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot open " + path + " for writing");
  out << serialize_stream(stream);
  if (!out) throw Error(ErrorCode::IOFailure, "write to " + path + " failed");
}

SceneStream parse_stream(std::string_view input) {
  SceneStream stream;
  bool have_header = false;
  std::vector<ProxyObject> proxies;
  std::vector<std::pair<std::size_t, Where>> fixed_boxes;  // objects given one static box
  std::vector<json> fixed_box_json;

  Where w;
  std::size_t pos = 0;
  while (pos < input.size()) {
    std::size_t nl = input.find('\n', pos);
    if (nl == std::string_view::npos) nl = input.size();
    const std::string_view line = input.substr(pos, nl - pos);
    pos = nl + 1;
    ++w.line;
    w.frame.clear();
    if (line.empty() || line.front() == '#') continue;

    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) violation(w, "not a JSON object");
    const std::string kind = text(j, "record", w);

    if (!have_header) {
      if (kind != "header") violation(w, "the first record must be the header");
      if (text(j, "schema", w) != kMetadataSchema) violation(w, "unsupported schema '" + j["schema"].dump() + "'");
      stream.stream_id = text(j, "stream_id", w);
      stream.scenario = j.value("scenario", std::string());
      stream.frame_rate = number(j, "frame_rate", w);
      if (!(stream.frame_rate > 0.0)) violation(w, "frame_rate must be > 0");
      if (j.contains("axis_convention")) {
        stream.convention.forward_column = j["axis_convention"].value("forward_column", 2);
        stream.convention.forward_sign = j["axis_convention"].value("forward_sign", 1.0);
      }
      stream.distractor_texts = j.value("distractor_texts", std::vector<std::string>{});
      have_header = true;
      continue;
    }

    if (kind == "frame") {
      const std::size_t index = stream.frames.size();
      w.frame = "frame " + std::to_string(index);
      const json& idx = field(j, "index", w);
      if (!idx.is_number_unsigned() || idx.get<std::size_t>() != index) {
        violation(w, "frame index must be " + std::to_string(index));
      }
      Frame f;
      f.timestamp = number(j, "timestamp", w);
      if (!stream.frames.empty() && !(f.timestamp > stream.frames.back().timestamp)) {
        throw Error(ErrorCode::NonMonotoneTimestamps,
                    w.str() + ": timestamp " + std::to_string(f.timestamp) + " does not exceed the previous frame's");
      }
      f.device_pose = pose(j, "device_pose", w);
      f.camera_offset = pose(j, "camera_offset", w);
      if (j.contains("gaze") && !j["gaze"].is_null()) {
        const json& g = j["gaze"];
        std::optional<double> depth;
        if (g.contains("depth") && !g["depth"].is_null()) depth = number(g, "depth", w);
        try {
          f.gaze = GazeSample::make(f.timestamp, vec(field(g, "dir", w), "gaze.dir", w), depth);
        } catch (const Error& e) {
          violation(w, "gaze: " + e.detail());
        }
      }
      if (j.contains("skeleton") && !j["skeleton"].is_null()) {
        if (!j["skeleton"].is_object()) violation(w, "skeleton must be an object of joints");
        SkeletonSample s;
        s.timestamp = f.timestamp;
        for (const auto& [name, p] : j["skeleton"].items()) s.joints[name] = vec(p, "skeleton joint", w);
        f.skeleton = std::move(s);
      }
      stream.frames.push_back(std::move(f));
    } else if (kind == "object") {
      ObjectTrack track;
      track.object_id = text(j, "object_id", w);
      track.name = j.value("name", track.object_id);
      if (stream.find_object(track.object_id)) violation(w, "duplicate object_id '" + track.object_id + "'");
      if (j.contains("boxes")) {
        const json& boxes = j["boxes"];
        if (!boxes.is_array()) violation(w, "boxes must be an array");
        for (std::size_t b = 0; b < boxes.size(); ++b) {
          Where bw = w;
          bw.frame = "frame " + std::to_string(b);
          track.boxes.push_back(box(boxes[b], track.object_id, bw));
        }
      } else if (j.contains("box")) {
        fixed_boxes.emplace_back(stream.objects.size(), w);
        fixed_box_json.push_back(j["box"]);
      } else if (j.contains("interactions")) {
        ProxyObject proxy{stream.objects.size(), w, {}};
        for (const json& iv : j["interactions"]) {
          proxy.intervals.emplace_back(number(iv, "start", w), number(iv, "end", w), hands(iv, w));
        }
        if (proxy.intervals.empty()) violation(w, "object without boxes needs at least one interaction");
        proxies.push_back(std::move(proxy));
      } else {
        violation(w, "object needs 'boxes', 'box' or 'interactions'");
      }
      stream.objects.push_back(std::move(track));
    } else if (kind == "keystep") {
      KeystepAnnotation k;
      const json& id = field(j, "id", w);
      if (!id.is_number_integer()) violation(w, "keystep id must be an integer");
      k.id = id.get<int>();
      k.text = text(j, "text", w);
      if (k.text.empty()) violation(w, "keystep text must not be empty");
      k.start = number(j, "start", w);
      k.end = number(j, "end", w);
      if (!(k.end >= k.start)) violation(w, "keystep end precedes its start");
      k.goal = j.value("goal", std::string());
      k.hands = hands(j, w);
      k.order_independent_with = j.value("order_independent_with", std::vector<int>{});
      for (const KeystepAnnotation& other : stream.keysteps) {
        if (other.id == k.id) violation(w, "duplicate keystep id " + std::to_string(k.id));
      }
      stream.keysteps.push_back(std::move(k));
    } else {
      violation(w, "unknown record type '" + kind + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::SchemaViolation, "missing header record");
  if (stream.frames.empty()) throw Error(ErrorCode::SchemaViolation, "stream has no frames");

  const std::size_t n = stream.frames.size();
  for (std::size_t i = 0; i < fixed_boxes.size(); ++i) {
    ObjectTrack& track = stream.objects[fixed_boxes[i].first];
    track.boxes.assign(n, box(fixed_box_json[i], track.object_id, fixed_boxes[i].second));
  }
  if (!proxies.empty()) {
    const std::vector<SkeletonSample> skeletons = stream.skeletons();
    for (const ProxyObject& proxy : proxies) {
      ObjectTrack& track = stream.objects[proxy.track];
      std::vector<std::pair<double, Vec3>> centers;
      for (const auto& [start, end, hs] : proxy.intervals) {
        try {
          centers.emplace_back(start, mean_hand_location(skeletons, start, end, hs));
        } catch (const Error& e) {
          violation(proxy.where, "object " + track.object_id + ": " + e.detail());
        }
      }
      std::sort(centers.begin(), centers.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      const Vec3 half = Vec3::Constant(kHandProxyBoxSize / 2);
      for (const Frame& f : stream.frames) {
        Vec3 c = centers.front().second;
        for (const auto& [t, p] : centers) {
          if (t <= f.timestamp) c = p;
        }
        track.boxes.push_back(Box3D::make(c - half, c + half, track.object_id));
      }
    }
  }
  for (const ObjectTrack& o : stream.objects) {
    if (o.boxes.size() != n) {
      throw Error(ErrorCode::SchemaViolation, "object " + o.object_id + " has " + std::to_string(o.boxes.size()) +
                                                  " boxes for " + std::to_string(n) + " frames");
    }
  }
  return stream;
}

SceneStream ingest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_stream(buffer.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string stream_digest(const SceneStream& stream) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(serialize_stream(stream))));
  return buf;
}

}  // namespace proxgen
