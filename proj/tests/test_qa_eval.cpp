// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

#include "proxgen/error.hpp"
#include "proxgen/eval.hpp"
#include "proxgen/qa_forge.hpp"

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

ClipSpec clip_of(std::size_t frames) {
  ClipSpec c;
  c.stream_id = "s1";
  c.start = 1.0;
  c.end = 1.0 + static_cast<double>(frames) / 30.0;
  c.anchor = AnchorEvent{c.end, AnchorKind::Fixation};
  c.goal_object_id = "mug";
  c.first_frame = 30;
  c.last_frame = 30 + frames - 1;
  return c;
}

QAItem mcq(const std::string& id, std::uint64_t seed) {
  SeededRng rng(seed);
  QAItem item = forge_mcq(Category::Exploration, ProximityKind::Approximate, distance_payload(1.3),
                          PayloadDomain::distances(), "How far is the mug?", rng);
  item.id = id;
  item.clip = clip_of(24);
  item.clip.category = Category::Exploration;
  item.provenance.seed = seed;
  item.provenance.tool_calls.push_back(ToolCall{"distance", {{"a", 1}}, {{"d", 1.3}}});
  return item;
}

QAItem chain_item() {
  std::vector<std::string> candidates;
  for (int i = 0; i < 10; ++i) candidates.push_back("keystep " + std::to_string(i));
  ChainGroundTruth truth{"make tea", candidates, 3,
                         {ActionChain{{2, 5, 9}, {Direction8::Left, Direction8::Front}},
                          ActionChain{{5, 2, 9}, {Direction8::Right, Direction8::FrontLeft}}}};
  ClipSpec clip = clip_of(40);
  clip.category = Category::ChainOfActions;
  QAItem item = forge_chain_item(clip, truth);
  item.id = "chain-1";
  return item;
}

}  // namespace

TEST_CASE("distance and angle bins") {
  CHECK(distance_payload(0.3).value == "under 0.5 m");
  CHECK(distance_payload(0.5).value == "0.5–1 m");
  CHECK(distance_payload(1.0).value == "1–2 m");
  CHECK(distance_payload(7.2).value == "over 4 m");
  CHECK(code_of([] { distance_payload(-0.1); }) == ErrorCode::InvalidArgument);

  CHECK(angle_payload({5.0}).value == "roughly none");
  CHECK(angle_payload({-60.0}).value == "moderate right turn");
  CHECK(angle_payload({180.0}).value == "sharp left turn");
  CHECK(angle_payload({20.0}).value == "slight left turn");
  CHECK(angle_payload({-10.0}).value == "slight right turn");
  CHECK(code_of([] { AngleBinning(30.0, 10.0, 90.0); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("options") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SeededRng rng(seed);
    const AnswerPayload answer = direction_payload(Direction8::BackLeft);
    const auto opts = build_options(answer, PayloadDomain::directions(), rng);
    REQUIRE(opts.size() == kOptionCount);
    int hits = 0;
    std::set<std::string> texts;
    for (std::size_t i = 0; i < opts.size(); ++i) {
      CHECK(opts[i].label == static_cast<char>('A' + i));
      hits += opts[i].payload == answer ? 1 : 0;
      texts.insert(opts[i].text);
    }
    CHECK(hits == 1);
    CHECK(texts.size() == kOptionCount);
  }
  SeededRng rng(1);
  CHECK(code_of([&] { build_options(distance_payload(1.0), PayloadDomain::directions(), rng); }) ==
        ErrorCode::InvalidArgument);
  PayloadDomain tiny = PayloadDomain::directions();
  tiny.values.resize(4);
  tiny.texts.resize(4);
  CHECK(code_of([&] { build_options(direction_payload(Direction8::Front), tiny, rng); }) ==
        ErrorCode::DistractorSpaceTooSmall);
}

TEST_CASE("answer position is roughly uniform") {
  std::array<int, 5> counts{};
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    const QAItem item = mcq("x", seed);
    ++counts[item.answer_label - 'A'];
  }
  for (int c : counts) CHECK(std::abs(c - 1000) < 120);
}

TEST_CASE("serialization round trip") {
  const std::vector<QAItem> items = {mcq("m-1", 3), chain_item()};
  const std::string text = serialize_items(items);
  const std::vector<QAItem> back = parse_items(text);
  REQUIRE(back.size() == 2);
  CHECK(item_to_json(back[0]) == item_to_json(items[0]));
  CHECK(item_to_json(back[1]) == item_to_json(items[1]));
  CHECK(back[1].chain == items[1].chain);
  CHECK(serialize_items(back) == text);

  CHECK(serialize_items({}) == benchmark_header(0) + "\n");
  CHECK(parse_items(serialize_items({})).empty());

  std::vector<QAItem> many;
  for (int i = 0; i < 1000; ++i) many.push_back(mcq("m-" + std::to_string(i), static_cast<std::uint64_t>(i)));
  const std::string big = serialize_items(many);
  CHECK(std::count(big.begin(), big.end(), '\n') == 1001);
  CHECK(parse_items(big).size() == 1000);
}

TEST_CASE("validation") {
  QAItem item = mcq("bad", 1);
  item.options[1].text = item.options[0].text;
  CHECK(code_of([&] { validate_item(item); }) == ErrorCode::SchemaViolation);

  QAItem wrong = mcq("bad2", 1);
  wrong.answer_label = wrong.answer_label == 'A' ? 'B' : 'A';
  CHECK(code_of([&] { validate_item(wrong); }) == ErrorCode::SchemaViolation);

  ChainGroundTruth t{"g", std::vector<std::string>(10, "same"), 3, {ActionChain{{1, 2, 3}, {Direction8::Left, Direction8::Left}}}};
  CHECK(code_of([&] { forge_chain_item(clip_of(10), t); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("prompt frames") {
  CHECK(uniform_frame_indices(24) == std::vector<std::size_t>{0, 3, 6, 9, 12, 15, 18, 21});
  CHECK(uniform_frame_indices(8) == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(frame_ref("s1", 33) == "s1/frame_000033");

  const PromptBundle p = render_prompt(mcq("m-1", 3), true);
  REQUIRE(p.frame_refs.size() == kPromptFrames);
  CHECK(p.frame_refs.front() == "s1/frame_000030");
  CHECK(p.frame_refs.back() == "s1/frame_000051");
  CHECK(p.expected_format == ExpectedFormat::McqBracket);
  CHECK(p.system_text == mcq_system_text(true));
  CHECK(mcq_system_text(true).size() > mcq_system_text(false).size());

  const PromptBundle c = render_prompt(chain_item(), false);
  CHECK(c.expected_format == ExpectedFormat::ChainNested);
  CHECK(c.k == 3);
  CHECK(c.user_text.find("10: keystep 9\n") != std::string::npos);
  CHECK(code_of([] { chain_format_line(6); }) == ErrorCode::UnsupportedK);
}

TEST_CASE("mcq parsing") {
  CHECK(parse_mcq("<C>") == 'C');
  CHECK(parse_mcq("I think <A> but actually <D>.") == 'D');
  CHECK(parse_mcq("answer: <E>\n") == 'E');
  CHECK(code_of([] { parse_mcq("C"); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_mcq("<F>"); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_mcq("<c>"); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_mcq(""); }) == ErrorCode::ParseFailure);
}

TEST_CASE("chain parsing") {
  const ParsedChain a = parse_chain("[[3, 1, 7], [A, C]]", 3);
  CHECK(a.node_ids == std::vector<int>{3, 1, 7});
  CHECK(a.edges == std::vector<Direction8>{Direction8::Right, Direction8::Front});

  const ParsedChain b = parse_chain("first [[1, 2, 3], [B, B]] then [[4,5,6,10],[H,G,E]]", 4);
  CHECK(b.node_ids == std::vector<int>{4, 5, 6, 10});
  CHECK(b.edges.back() == Direction8::FrontRight);

  CHECK(code_of([] { parse_chain("[[1, 2], [A]]", 3); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { parse_chain("[[1, 2, 3], [A]]", 3); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { parse_chain("[[1, 1, 3], [A, B]]", 3); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_chain("[[0, 1, 3], [A, B]]", 3); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_chain("[[1, 2, 3], [A, Z]]", 3); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_chain("no answer", 3); }) == ErrorCode::ParseFailure);
  CHECK(code_of([] { parse_chain("[[1, 2], [A]]", 2); }) == ErrorCode::UnsupportedK);
}

TEST_CASE("malformed responses never escape as exceptions") {
  SeededRng rng(99);
  const std::string alphabet = "[]<>,ABCDEFGH0123456789 \n";
  for (int i = 0; i < 5000; ++i) {
    std::string s;
    const std::size_t len = rng.uniform_index(40);
    for (std::size_t j = 0; j < len; ++j) s.push_back(alphabet[rng.uniform_index(alphabet.size())]);
    const ParsedResponse m = parse_response(s, ExpectedFormat::McqBracket);
    CHECK(m.mcq_label.has_value() != m.failure.has_value());
    const ParsedResponse c = parse_response(s, ExpectedFormat::ChainNested, 3);
    CHECK(c.chain.has_value() != c.failure.has_value());
    if (c.failure) CHECK((*c.failure == ErrorCode::ParseFailure || *c.failure == ErrorCode::LengthMismatch));
  }
}

TEST_CASE("scoring") {
  const QAItem item = mcq("m-1", 3);
  const std::string right = std::string("<") + item.answer_label + ">";
  const std::string wrong = std::string("<") + (item.answer_label == 'A' ? 'B' : 'A') + ">";
  const EvalRecord r1 = score_item(item, right);
  CHECK(r1.correct);
  CHECK(r1.group == "Exploration/Approximate");
  CHECK_FALSE(score_item(item, wrong).correct);
  const EvalRecord r3 = score_item(item, "no idea");
  CHECK_FALSE(r3.correct);
  CHECK(r3.parse_failed);
  CHECK(score_mcq({r1, r3}) == doctest::Approx(0.5));
  CHECK(code_of([] { score_mcq({}); }) == ErrorCode::EmptySet);

  const QAItem chain = chain_item();
  const EvalRecord exact = score_item(chain, "[[2, 5, 9], [B, C]]");
  CHECK(exact.act_correct);
  CHECK(*exact.rel_s == doctest::Approx(1.0));
  const EvalRecord second = score_item(chain, "[[5, 2, 9], [E, F]]");
  CHECK(second.act_correct);
  CHECK(*second.rel_s == doctest::Approx(0.5));
  CHECK(*second.rel_l == doctest::Approx(1.0));
  const EvalRecord miss = score_item(chain, "[[9, 5, 2], [B, C]]");
  CHECK_FALSE(miss.act_correct);
  CHECK_FALSE(miss.rel_s.has_value());
  CHECK(score_item(chain, "[[2, 5], [B]]").parse_failed);
}

TEST_CASE("aggregate") {
  std::vector<EvalRecord> recs;
  for (int i = 0; i < 4; ++i) {
    EvalRecord r;
    r.group = "Intention/Approximate";
    r.correct = i < 3;
    recs.push_back(r);
  }
  EvalRecord c1;
  c1.group = "ChainOfActions";
  c1.is_chain = true;
  c1.act_correct = true;
  c1.rel_s = 0.5;
  c1.rel_l = 1.0;
  EvalRecord c2 = c1;
  c2.act_correct = false;
  c2.rel_s.reset();
  c2.rel_l.reset();
  c2.parse_failed = true;
  recs.push_back(c1);
  recs.push_back(c2);

  const Report rep = aggregate(recs);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].group == "Intention/Approximate");
  CHECK(rep.rows[0].accuracy == doctest::Approx(75.0));
  CHECK(rep.rows[1].accuracy == doctest::Approx(50.0));
  CHECK(*rep.rows[1].rel_s == doctest::Approx(50.0));
  CHECK(*rep.rows[1].rel_l == doctest::Approx(100.0));
  CHECK(rep.rows[1].parse_failures == 1);

  EvalRecord only_miss = c2;
  const Report none = aggregate({only_miss});
  CHECK_FALSE(none.rows[0].rel_s.has_value());
  CHECK(format_percent(none.rows[0].rel_s) == "–");
  CHECK(format_percent(66.666) == "66.67");
  CHECK(code_of([] { aggregate({}); }) == ErrorCode::EmptySet);

  const std::vector<EvalRecord> back = parse_results(serialize_results(recs));
  REQUIRE(back.size() == recs.size());
  CHECK(record_to_json(back[4]) == record_to_json(recs[4]));
}

TEST_CASE("replay and random clients") {
  const std::vector<QAItem> items = {mcq("m-1", 3), mcq("m-2", 4), chain_item()};
  const std::string a1 = std::string("<") + items[0].answer_label + ">";
  const ReplayClient replay({{"m-1", a1}, {"chain-1", "[[2, 5, 9], [B, C]]"}});
  const auto recs = evaluate(items, replay, {true, 2});
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].correct);
  CHECK(recs[1].parse_failed);
  CHECK(recs[2].act_correct);

  const RandomClient rnd(7);
  const auto r1 = evaluate(items, rnd, {true, 1});
  const auto r2 = evaluate(items, rnd, {true, 3});
  for (std::size_t i = 0; i < items.size(); ++i) CHECK(r1[i].response == r2[i].response);
}
