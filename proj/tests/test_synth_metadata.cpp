// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <functional>

#include <json.hpp>

#include "proxgen/error.hpp"
#include "proxgen/metadata.hpp"
#include "proxgen/scene_synth.hpp"

using namespace proxgen;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

SceneRecipe walk_recipe() {
  SceneRecipe r;
  r.stream_id = "walk";
  r.waypoints = {RecipeWaypoint{Vec2(1, 1), 0.0, std::nullopt}, RecipeWaypoint{Vec2(5, 1), 0.0, std::nullopt}};
  r.objects = {RecipeObject{"table", "table", Vec3(4, 4, 0.4), Vec3(1.0, 0.6, 0.8)}};
  return r;
}

SceneStream plain_stream(std::size_t frames) {
  SceneStream s;
  s.stream_id = "plain";
  s.scenario = "test";
  ObjectTrack box;
  box.object_id = "b";
  box.name = "box";
  for (std::size_t i = 0; i < frames; ++i) {
    Frame f;
    f.timestamp = static_cast<double>(i) / 30.0;
    f.device_pose.translation = Vec3(0.001 * static_cast<double>(i), 0, 1.6);
    f.gaze = GazeSample::make(f.timestamp, Vec3::UnitZ());
    s.frames.push_back(f);
    box.boxes.push_back(Box3D::make({1, 1, 0}, {2, 2, 1}, "b"));
  }
  s.objects.push_back(box);
  KeystepAnnotation k;
  k.id = 1;
  k.text = "open the box";
  k.start = 0.0;
  k.end = 0.2;
  k.hands = {Hand::Right};
  s.keysteps.push_back(k);
  return s;
}

}  // namespace

TEST_CASE("a straight walk") {
  const SceneRecipe r = walk_recipe();
  CHECK(trajectory_duration(r) == doctest::Approx(4.0));
  const SceneStream s = synthesize(r);
  CHECK(s.frame_count() == 121);
  CHECK(s.frames.front().timestamp == 0.0);
  CHECK(s.frames.back().timestamp == doctest::Approx(4.0));
  CHECK(s.frames[60].device_pose.translation.x() == doctest::Approx(3.0));
  CHECK(s.frames[60].device_pose.translation.z() == doctest::Approx(r.camera_height));
  for (std::size_t i = 0; i < s.frame_count(); ++i) CHECK(s.camera_pose(i).is_orthonormal());
  REQUIRE(s.find_object("table"));
  CHECK(s.find_object("table")->boxes.size() == 121);

  CHECK(synthesize(r).frames.size() == s.frames.size());
  CHECK(serialize_stream(synthesize(r)) == serialize_stream(s));
}

TEST_CASE("recipe json round trip") {
  const SceneRecipe r = make_random_recipe(7, "rand_7", "kitchen");
  const nlohmann::json j = recipe_to_json(r);
  CHECK(recipe_to_json(recipe_from_json(j)) == j);
  CHECK(serialize_stream(synthesize(recipe_from_json(j))) == serialize_stream(synthesize(r)));
}

TEST_CASE("metadata round trip") {
  const SceneStream s = synthesize(make_random_recipe(3, "rand_3", "kitchen"));
  const std::string text = serialize_stream(s);
  const SceneStream back = parse_stream(text);
  CHECK(back.frame_count() == s.frame_count());
  CHECK(back.objects.size() == s.objects.size());
  CHECK(back.keysteps.size() == s.keysteps.size());
  CHECK(serialize_stream(back) == text);
  CHECK(stream_digest(back) == stream_digest(s));
}

TEST_CASE("ten thousand frames") {
  const SceneStream s = plain_stream(10000);
  const std::string text = serialize_stream(s);
  const SceneStream back = parse_stream(text);
  REQUIRE(back.frame_count() == 10000);
  CHECK(back.frames[9999].device_pose.translation.x() == doctest::Approx(9.999));
  CHECK(serialize_stream(back) == text);
}

TEST_CASE("ingest rejects bad records") {
  SUBCASE("non-orthonormal pose") {
    SceneStream s = plain_stream(3);
    s.frames[1].device_pose.rotation(0, 0) = 2.0;
    CHECK(code_of([&] { parse_stream(serialize_stream(s)); }) == ErrorCode::SchemaViolation);
  }
  SUBCASE("timestamps must increase") {
    SceneStream s = plain_stream(3);
    s.frames[2].timestamp = s.frames[1].timestamp;
    CHECK(code_of([&] { parse_stream(serialize_stream(s)); }) == ErrorCode::NonMonotoneTimestamps);
  }
  SUBCASE("header first") {
    CHECK(code_of([] { parse_stream("{\"record\":\"frame\"}\n"); }) == ErrorCode::SchemaViolation);
    CHECK(code_of([] { parse_stream(""); }) == ErrorCode::SchemaViolation);
  }
  SUBCASE("unknown record") {
    std::string text = serialize_stream(plain_stream(2));
    text += "{\"record\":\"mystery\"}\n";
    CHECK(code_of([&] { parse_stream(text); }) == ErrorCode::SchemaViolation);
  }
  SUBCASE("missing file") {
    CHECK(code_of([] { ingest("/nonexistent/stream.jsonl"); }) == ErrorCode::IOFailure);
  }
}
