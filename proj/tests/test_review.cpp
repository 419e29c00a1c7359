// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <functional>
#include <thread>

#include <unistd.h>

#include <json.hpp>

#include "proxgen/error.hpp"
#include "proxgen/review.hpp"
#include "proxgen/review_server.hpp"

#include <httplib.h>

using namespace proxgen;
using nlohmann::json;
namespace fs = std::filesystem;

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

std::vector<QAItem> make_items(int n) {
  std::vector<QAItem> out;
  for (int i = 0; i < n; ++i) {
    SeededRng rng(static_cast<std::uint64_t>(i));
    QAItem item = forge_mcq(Category::Intention, ProximityKind::Relative, direction_payload(Direction8::Left),
                            PayloadDomain::directions(), "Where is the kettle?", rng);
    item.id = "item-" + std::to_string(i);
    item.clip.stream_id = "s";
    item.clip.first_frame = 0;
    item.clip.last_frame = 15;
    out.push_back(std::move(item));
  }
  return out;
}

json other_payload(const QAItem& item) {
  const json j = item_to_json(item);
  for (const json& o : j.at("options")) {
    if (o.at("label").get<std::string>() != std::string(1, item.answer_label)) return o.at("payload");
  }
  return json();
}

struct TempLog {
  fs::path path;
  TempLog() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("proxgen_review_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".jsonl");
    fs::remove(path);
  }
  ~TempLog() { fs::remove(path); }
};

ReviewStore::Clock fixed_clock() {
  return [] { return std::string("2026-01-01T00:00:00Z"); };
}

}  // namespace

TEST_CASE("review store transitions") {
  TempLog log;
  const auto items = make_items(5);
  ReviewStore store(items, log.path.string(), fixed_clock());

  CHECK(store.state("item-0").status == ReviewStatus::Pending);
  const ReviewState a = store.submit("item-0", {"accept", "ok", std::nullopt}, "v0", "rev1");
  CHECK(a.status == ReviewStatus::Accepted);
  CHECK(a.version == 1);
  CHECK(a.reviewer_id == "rev1");
  CHECK(a.timestamp == "2026-01-01T00:00:00Z");

  CHECK(code_of([&] { store.submit("item-0", {"reject", "", std::nullopt}, "v0", "rev1"); }) ==
        ErrorCode::ConcurrentEditConflict);
  CHECK(code_of([&] { store.submit("item-0", {"reject", "", std::nullopt}, "v1", "rev1"); }) ==
        ErrorCode::IllegalTransition);
  CHECK(store.submit("item-0", {"reopen", "", std::nullopt}, "v1", "rev1").status == ReviewStatus::Pending);
  CHECK(code_of([&] { store.submit("item-0", {"reopen", "", std::nullopt}, "v2", "rev1"); }) ==
        ErrorCode::IllegalTransition);
  CHECK(store.submit("item-0", {"accept", "", std::nullopt}, "v2", "rev2").status == ReviewStatus::Accepted);

  store.submit("item-1", {"reject", "wrong", std::nullopt}, "v0", "rev1");
  const json edit = other_payload(items[2]);
  const ReviewState e = store.submit("item-2", {"edit", "fix", edit}, "v0", "rev1");
  CHECK(e.status == ReviewStatus::Edited);
  CHECK(e.edited_payload == edit);

  CHECK(code_of([&] { store.submit("item-3", {"edit", "", json{{"type", "Direction8"}, {"value", "Up"}}}, "v0", "r"); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { store.submit("item-3", {"edit", "", std::nullopt}, "v0", "r"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { store.submit("item-3", {"approve", "", std::nullopt}, "v0", "r"); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { store.submit("nope", {"accept", "", std::nullopt}, "v0", "r"); }) == ErrorCode::UnknownItem);
  CHECK(store.history("item-0").size() == 3);

  const auto exported = store.export_items();
  REQUIRE(exported.size() == 2);
  CHECK(exported[0].id == "item-0");
  CHECK(item_to_json(exported[0]) == item_to_json(items[0]));
  CHECK(exported[1].id == "item-2");
  CHECK(item_to_json(exported[1]).at("answer_payload") == edit);
  CHECK(exported[1].answer_label != items[2].answer_label);

  SUBCASE("restart replays the log") {
    ReviewStore again(items, log.path.string(), fixed_clock());
    CHECK(again.state("item-0").status == ReviewStatus::Accepted);
    CHECK(again.state("item-0").version == 3);
    CHECK(again.state("item-1").status == ReviewStatus::Rejected);
    CHECK(again.state("item-2").status == ReviewStatus::Edited);
    CHECK(again.state("item-3").status == ReviewStatus::Pending);
    CHECK(serialize_items(again.export_items()) == serialize_items(exported));
  }
  SUBCASE("log against other items is refused") {
    CHECK(code_of([&] { ReviewStore other(make_items(1), log.path.string(), fixed_clock()); }) ==
          ErrorCode::UnknownItem);
  }
}

TEST_CASE("review http api") {
  TempLog log;
  const auto items = make_items(500);
  ReviewStore store(items, log.path.string(), fixed_clock());
  ReviewServer server(store);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread thread([&] { server.listen(); });

  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);
  httplib::Result ready;
  for (int i = 0; i < 100 && !ready; ++i) {
    ready = cli.Get("/items?limit=1");
    if (!ready) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  REQUIRE(ready);

  SUBCASE("paging") {
    auto r = cli.Get("/items?offset=0&limit=50");
    REQUIRE(r);
    CHECK(r->status == 200);
    json page = json::parse(r->body);
    CHECK(page["total"] == 500);
    CHECK(page["items"].size() == 50);
    CHECK(page["items"][0]["id"] == "item-0");
    CHECK(page["items"][0]["status"] == "Pending");

    page = json::parse(cli.Get("/items?offset=450&limit=50")->body);
    CHECK(page["items"].size() == 50);
    CHECK(page["items"][49]["id"] == "item-499");
    CHECK(json::parse(cli.Get("/items?offset=500&limit=50")->body)["items"].empty());
    CHECK(cli.Get("/items?limit=abc")->status == 400);
    CHECK(cli.Get("/items?status=Bogus")->status == 400);
  }
  SUBCASE("view, verdicts and export") {
    auto view = cli.Get("/items/item-7");
    REQUIRE(view);
    CHECK(view->status == 200);
    CHECK(view->get_header_value("X-Version-Token") == "v0");
    const json v = json::parse(view->body);
    CHECK(v["item"]["id"] == "item-7");
    CHECK(v["frame_refs"].size() == 8);
    CHECK(cli.Get("/items/missing")->status == 404);

    const httplib::Headers h0 = {{"X-Version-Token", "v0"}, {"X-Reviewer-Id", "alice"}};
    auto ok = cli.Post("/items/item-7/verdict", h0, R"({"verdict":"accept"})", "application/json");
    REQUIRE(ok);
    CHECK(ok->status == 200);
    CHECK(ok->get_header_value("X-Version-Token") == "v1");

    auto stale = cli.Post("/items/item-7/verdict", h0, R"({"verdict":"reopen"})", "application/json");
    CHECK(stale->status == 409);
    CHECK(json::parse(stale->body)["error"] == "ConcurrentEditConflict");

    const httplib::Headers h1 = {{"X-Version-Token", "v1"}, {"X-Reviewer-Id", "alice"}};
    auto illegal = cli.Post("/items/item-7/verdict", h1, R"({"verdict":"reject"})", "application/json");
    CHECK(illegal->status == 422);
    CHECK(json::parse(illegal->body)["error"] == "IllegalTransition");

    CHECK(cli.Post("/items/missing/verdict", h0, R"({"verdict":"accept"})", "application/json")->status == 404);
    CHECK(cli.Post("/items/item-8/verdict", h0, "not json", "application/json")->status == 400);
    const httplib::Headers no_reviewer = {{"X-Version-Token", "v0"}};
    CHECK(cli.Post("/items/item-8/verdict", no_reviewer, R"({"verdict":"accept"})", "application/json")->status ==
          400);

    const json edit = {{"verdict", "edit"}, {"note", "moved"}, {"payload", other_payload(items[9])}};
    CHECK(cli.Post("/items/item-9/verdict", h0, edit.dump(), "application/json")->status == 200);
    CHECK(cli.Post("/items/item-10/verdict", h0, R"({"verdict":"reject"})", "application/json")->status == 200);

    const json accepted = json::parse(cli.Get("/items?status=Accepted")->body);
    CHECK(accepted["total"] == 1);
    auto exported = cli.Get("/export");
    REQUIRE(exported);
    const auto back = parse_items(exported->body);
    REQUIRE(back.size() == 2);
    CHECK(back[0].id == "item-7");
    CHECK(back[1].id == "item-9");
    CHECK(item_to_json(back[1]).at("answer_payload") == other_payload(items[9]));
  }

  server.stop();
  thread.join();
}
