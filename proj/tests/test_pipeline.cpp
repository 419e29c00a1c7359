// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <functional>
#include <set>

#include <json.hpp>

#include "proxgen/config.hpp"
#include "proxgen/error.hpp"
#include "proxgen/eval.hpp"
#include "proxgen/generate.hpp"
#include "proxgen/scene_synth.hpp"

using namespace proxgen;
using nlohmann::json;

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

std::vector<SceneStream> streams(int n) {
  std::vector<SceneStream> out;
  for (int i = 0; i < n; ++i) {
    const std::string id = "kitchen_" + std::to_string(i);
    out.push_back(synthesize(make_random_recipe(derive_seed(11, id), id, "kitchen")));
  }
  return out;
}

}  // namespace

TEST_CASE("config loading") {
  const RunConfig d = load_config(std::nullopt);
  CHECK(d.resolution == doctest::Approx(0.1));
  CHECK(d.turn_penalty == doctest::Approx(0.1));
  CHECK(config_to_json(config_from_json(config_to_json(d))) == config_to_json(d));

  const RunConfig o = load_config(std::nullopt, {"seed=9", "occupancy.turn_penalty=1.5", "categories.intention=false",
                                                 "exploration_distance=first_step"});
  CHECK(o.seed == 9);
  CHECK(o.turn_penalty == doctest::Approx(1.5));
  CHECK_FALSE(o.categories.intention);
  CHECK(o.exploration_distance == ExplorationDistance::FirstStep);

  CHECK(code_of([] { load_config(std::nullopt, {"occupancy.resolutoin=0.2"}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { load_config(std::nullopt, {"bogus=1"}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { load_config(std::nullopt, {"noequals"}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { load_config(std::nullopt, {"occupancy.resolution=\"fine\""}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { load_config(std::nullopt, {"occupancy.resolution=-1"}); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { load_config(std::string("/nonexistent/config.json")); }) == ErrorCode::IOFailure);
}

TEST_CASE("generation") {
  const auto input = streams(3);
  RunConfig config;
  config.seed = 5;

  const GenerationResult a = run_generation(config, input);
  REQUIRE_FALSE(a.items.empty());
  std::set<Category> cats;
  std::set<std::string> ids;
  for (const QAItem& item : a.items) {
    cats.insert(item.category);
    ids.insert(item.id);
    CHECK_NOTHROW(validate_item(item));
  }
  CHECK(ids.size() == a.items.size());
  CHECK(cats.size() == 4);
  std::size_t places = 0;
  for (const QAItem& item : a.items) {
    if (item.provenance.recipe.value("task", "") == "exploitation.place") ++places;
  }
  CHECK(places > 0);

  SUBCASE("deterministic across worker counts") {
    RunConfig one = config;
    one.workers = 1;
    CHECK(serialize_items(run_generation(one, input).items) == serialize_items(a.items));
  }
  SUBCASE("seed changes the options") {
    RunConfig other = config;
    other.seed = 6;
    CHECK(serialize_items(run_generation(other, input).items) != serialize_items(a.items));
  }
  SUBCASE("every item replays") {
    for (const QAItem& item : a.items) {
      const SceneStream* s = nullptr;
      for (const SceneStream& c : input) {
        if (c.stream_id == item.clip.stream_id) s = &c;
      }
      REQUIRE(s);
      const ReplayOutcome r = replay_item(item, *s);
      CHECK_MESSAGE(r.match, item.id << ": " << r.detail);
    }
  }
  SUBCASE("tampered answers fail replay") {
    QAItem item = a.items.front();
    for (const QAOption& o : item.options) {
      if (o.label != item.answer_label) {
        item.answer_label = o.label;
        item.answer_payload = o.payload;
        break;
      }
    }
    const SceneStream* s = nullptr;
    for (const SceneStream& c : input) {
      if (c.stream_id == item.clip.stream_id) s = &c;
    }
    REQUIRE(s);
    CHECK_FALSE(replay_item(item, *s).match);
  }
  SUBCASE("toggles") {
    RunConfig off = config;
    off.categories = CategoryToggles{false, false, false, false};
    CHECK(run_generation(off, input).items.empty());

    RunConfig chains_only = config;
    chains_only.categories = CategoryToggles{false, false, false, true};
    const auto r = run_generation(chains_only, input);
    REQUIRE_FALSE(r.items.empty());
    for (const QAItem& item : r.items) CHECK(item.is_chain());
  }
  SUBCASE("duplicate stream ids") {
    std::vector<SceneStream> dup = {input[0], input[0]};
    CHECK(code_of([&] { run_generation(config, dup); }) == ErrorCode::InvalidArgument);
  }
}
