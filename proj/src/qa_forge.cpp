// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/qa_forge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "proxgen/error.hpp"

namespace proxgen {

using nlohmann::json;

std::string_view proximity_kind_name(ProximityKind k) {
  return k == ProximityKind::Approximate ? "Approximate" : "Relative";
}

std::optional<ProximityKind> parse_proximity_kind(std::string_view s) {
  if (s == "Approximate") return ProximityKind::Approximate;
  if (s == "Relative") return ProximityKind::Relative;
  return std::nullopt;
}

DistanceBinning::DistanceBinning(std::vector<double> edges, std::vector<std::string> labels) {
  if (edges.empty() || edges.front() != 0.0 || labels.size() != edges.size()) {
    throw Error(ErrorCode::InvalidConfig, "distance bins need edges starting at 0 and one label per edge");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double hi = i + 1 < edges.size() ? edges[i + 1] : std::numeric_limits<double>::infinity();
    if (!(hi > edges[i])) throw Error(ErrorCode::InvalidConfig, "distance bin edges must increase");
    if (!seen.insert(labels[i]).second) throw Error(ErrorCode::InvalidConfig, "duplicate bin label " + labels[i]);
    bins_.push_back(DistanceBin{labels[i], edges[i], hi});
  }
}

const DistanceBinning& DistanceBinning::standard() {
  static const DistanceBinning binning({0.0, 0.5, 1.0, 2.0, 4.0},
                                       {"under 0.5 m", "0.5–1 m", "1–2 m", "2–4 m", "over 4 m"});
  return binning;
}

const DistanceBin& DistanceBinning::bin(double meters) const {
  if (!(meters >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be >= 0");
  for (std::size_t i = bins_.size(); i-- > 0;) {
    if (meters >= bins_[i].lo) return bins_[i];
  }
  return bins_.front();
}

json DistanceBinning::to_json() const {
  json out = json::array();
  for (const DistanceBin& b : bins_) {
    out.push_back({{"label", b.label}, {"lo", b.lo}, {"hi", std::isinf(b.hi) ? json(nullptr) : json(b.hi)}});
  }
  return out;
}

AngleBinning::AngleBinning(double none_below, double slight_below, double moderate_below) {
  if (!(0.0 < none_below && none_below < slight_below && slight_below < moderate_below && moderate_below < 180.0)) {
    throw Error(ErrorCode::InvalidConfig, "angle thresholds must satisfy 0 < none < slight < moderate < 180");
  }
  bins_.push_back(AngleBin{"roughly none", TurnSide::None, 0.0, none_below});
  for (TurnSide side : {TurnSide::Left, TurnSide::Right}) {
    const std::string s = side == TurnSide::Left ? "left" : "right";
    bins_.push_back(AngleBin{"slight " + s + " turn", side, none_below, slight_below});
    bins_.push_back(AngleBin{"moderate " + s + " turn", side, slight_below, moderate_below});
    bins_.push_back(AngleBin{"sharp " + s + " turn", side, moderate_below, 180.0});
  }
}

const AngleBinning& AngleBinning::standard() {
  static const AngleBinning binning;
  return binning;
}

const AngleBin& AngleBinning::bin(SignedAngle theta) const {
  const double mag = std::abs(theta.degrees);
  if (mag < bins_[0].hi) return bins_[0];
  const TurnSide side = theta.degrees > 0.0 || mag >= 180.0 ? TurnSide::Left : TurnSide::Right;
  for (const AngleBin& b : bins_) {
    if (b.side != side) continue;
    if (mag >= b.lo && (mag < b.hi || b.hi >= 180.0)) return b;
  }
  throw Error(ErrorCode::InvalidArgument, "angle outside (-180, 180]");
}

json AngleBinning::to_json() const {
  json out = json::array();
  for (const AngleBin& b : bins_) out.push_back({{"label", b.label}, {"lo", b.lo}, {"hi", b.hi}});
  return out;
}

std::string_view payload_type_name(PayloadType t) {
  switch (t) {
    case PayloadType::Direction8: return "Direction8";
    case PayloadType::DistanceBin: return "DistanceBin";
    case PayloadType::AngleBin: return "AngleBin";
    case PayloadType::ObjectId: return "ObjectId";
  }
  return "Direction8";
}

std::optional<PayloadType> parse_payload_type(std::string_view s) {
  for (auto t : {PayloadType::Direction8, PayloadType::DistanceBin, PayloadType::AngleBin, PayloadType::ObjectId}) {
    if (payload_type_name(t) == s) return t;
  }
  return std::nullopt;
}

AnswerPayload direction_payload(Direction8 d) {
  return AnswerPayload{PayloadType::Direction8, std::string(direction_name(d))};
}

AnswerPayload distance_payload(double meters, const DistanceBinning& binning) {
  return AnswerPayload{PayloadType::DistanceBin, binning.bin(meters).label};
}

AnswerPayload angle_payload(SignedAngle theta, const AngleBinning& binning) {
  return AnswerPayload{PayloadType::AngleBin, binning.bin(theta).label};
}

const QAOption& QAItem::answer_option() const {
  for (const QAOption& o : options) {
    if (o.label == answer_label) return o;
  }
  throw Error(ErrorCode::SchemaViolation, "item " + id + " has no option labeled " + std::string(1, answer_label));
}

PayloadDomain PayloadDomain::directions() {
  PayloadDomain d;
  d.type = PayloadType::Direction8;
  for (Direction8 dir : kAllDirections) {
    d.values.emplace_back(direction_name(dir));
    d.texts.emplace_back(direction_phrase(dir));
  }
  return d;
}

PayloadDomain PayloadDomain::distances(const DistanceBinning& binning) {
  PayloadDomain d;
  d.type = PayloadType::DistanceBin;
  for (const DistanceBin& b : binning.bins()) {
    d.values.push_back(b.label);
    d.texts.push_back(b.label);
  }
  return d;
}

PayloadDomain PayloadDomain::angles(const AngleBinning& binning) {
  PayloadDomain d;
  d.type = PayloadType::AngleBin;
  for (const AngleBin& b : binning.bins()) {
    d.values.push_back(b.label);
    d.texts.push_back(b.label);
  }
  return d;
}

std::string PayloadDomain::text_of(const std::string& value) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value) return texts[i];
  }
  throw Error(ErrorCode::InvalidArgument, "value '" + value + "' is not in the " +
                                              std::string(payload_type_name(type)) + " domain");
}

std::vector<QAOption> build_options(const AnswerPayload& answer, const PayloadDomain& domain, SeededRng& rng) {
  if (answer.type != domain.type) throw Error(ErrorCode::InvalidArgument, "payload type does not match domain");
  std::vector<std::size_t> others;
  std::optional<std::size_t> answer_index;
  for (std::size_t i = 0; i < domain.values.size(); ++i) {
    if (domain.values[i] == answer.value) {
      answer_index = i;
    } else {
      others.push_back(i);
    }
  }
  if (!answer_index) throw Error(ErrorCode::InvalidArgument, "answer '" + answer.value + "' is not in its domain");
  if (others.size() < kOptionCount - 1) {
    throw Error(ErrorCode::DistractorSpaceTooSmall,
                std::string(payload_type_name(domain.type)) + " domain has " +
                    std::to_string(domain.values.size()) + " values");
  }

  std::vector<std::size_t> chosen{*answer_index};
  for (std::size_t pick : rng.sample_indices(others.size(), kOptionCount - 1)) chosen.push_back(others[pick]);
  rng.shuffle(chosen);

  std::vector<QAOption> options;
  for (std::size_t slot = 0; slot < chosen.size(); ++slot) {
    const std::size_t v = chosen[slot];
    options.push_back(QAOption{static_cast<char>('A' + slot), domain.texts[v],
                               AnswerPayload{domain.type, domain.values[v]}});
  }
  return options;
}

QAItem forge_mcq(Category category, ProximityKind kind, const AnswerPayload& answer, const PayloadDomain& domain,
                 std::string question, SeededRng& rng) {
  QAItem item;
  item.category = category;
  item.proximity_kind = kind;
  item.question = std::move(question);
  item.options = build_options(answer, domain, rng);
  item.answer_payload = answer;
  for (const QAOption& o : item.options) {
    if (o.payload == answer) item.answer_label = o.label;
  }
  return item;
}

QAItem forge_chain_item(const ClipSpec& clip, const ChainGroundTruth& truth) {
  QAItem item;
  item.category = Category::ChainOfActions;
  item.proximity_kind = ProximityKind::Relative;
  item.clip = clip;
  item.chain = ChainPayload{truth.goal_text, truth.candidates, truth.k, truth.valid_chains};
  validate_item(item);
  return item;
}

void validate_item(const QAItem& item) {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::SchemaViolation, "item '" + item.id + "': " + what);
  };
  if (item.chain) {
    const ChainPayload& c = *item.chain;
    if (c.candidates.size() != kCandidateSetSize) fail("candidate set must have 10 entries");
    if (std::set<std::string>(c.candidates.begin(), c.candidates.end()).size() != c.candidates.size()) {
      fail("candidate texts must be distinct");
    }
    if (c.k < 3 || c.k > 5) fail("k must be in [3, 5]");
    if (c.valid_chains.empty() || c.valid_chains.size() > kMaxValidChains) fail("1-3 valid chains required");
    for (const ActionChain& chain : c.valid_chains) {
      if (static_cast<int>(chain.node_ids.size()) != c.k) fail("chain length differs from k");
      if (chain.edges.size() + 1 != chain.node_ids.size()) fail("chain needs k-1 edges");
      if (std::set<int>(chain.node_ids.begin(), chain.node_ids.end()).size() != chain.node_ids.size()) {
        fail("chain nodes repeat");
      }
      for (int id : chain.node_ids) {
        if (id < 1 || id > static_cast<int>(kCandidateSetSize)) fail("chain node out of range");
      }
    }
    return;
  }
  if (item.options.size() != kOptionCount) fail("exactly 5 options required");
  std::set<std::string> texts;
  int correct = 0;
  for (std::size_t i = 0; i < item.options.size(); ++i) {
    const QAOption& o = item.options[i];
    if (o.label != static_cast<char>('A' + i)) fail("option labels must run A-E");
    std::string norm;
    for (char ch : o.text) norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (!texts.insert(norm).second) fail("duplicate option text '" + o.text + "'");
    if (o.payload.type != item.answer_payload.type) fail("option payload type differs from answer");
    if (o.payload == item.answer_payload) {
      ++correct;
      if (o.label != item.answer_label) fail("answer label does not point at the answer payload");
    }
  }
  if (correct != 1) fail("exactly one option must carry the answer");
}

json clip_to_json(const ClipSpec& clip) {
  json j = {{"stream_id", clip.stream_id},
            {"start", clip.start},
            {"end", clip.end},
            {"category", category_name(clip.category)},
            {"anchor", {{"timestamp", clip.anchor.timestamp}, {"kind", anchor_kind_name(clip.anchor.kind)}}},
            {"first_frame", clip.first_frame},
            {"last_frame", clip.last_frame}};
  j["goal_object_id"] = clip.goal_object_id ? json(*clip.goal_object_id) : json(nullptr);
  return j;
}

namespace {

template <typename T>
T parse_enum(const json& j, const char* field, std::optional<T> (*parse)(std::string_view)) {
  const std::string s = j.at(field).get<std::string>();
  auto v = parse(s);
  if (!v) throw Error(ErrorCode::SchemaViolation, std::string("unknown ") + field + " '" + s + "'");
  return *v;
}

char parse_label(const json& j) {
  const std::string s = j.get<std::string>();
  if (s.size() != 1 || s[0] < 'A' || s[0] > 'E') throw Error(ErrorCode::SchemaViolation, "bad label '" + s + "'");
  return s[0];
}

json payload_to_json(const AnswerPayload& p) { return {{"type", payload_type_name(p.type)}, {"value", p.value}}; }

AnswerPayload payload_from_json(const json& j) {
  return AnswerPayload{parse_enum<PayloadType>(j, "type", parse_payload_type), j.at("value").get<std::string>()};
}

json provenance_to_json(const Provenance& p) {
  json calls = json::array();
  for (const ToolCall& c : p.tool_calls) calls.push_back({{"tool", c.tool}, {"input", c.input}, {"output", c.output}});
  return {{"template", p.template_id}, {"seed", p.seed}, {"tool_calls", calls}, {"recipe", p.recipe}};
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.template_id = j.at("template").get<std::string>();
  p.seed = j.at("seed").get<std::uint64_t>();
  for (const json& c : j.at("tool_calls")) {
    p.tool_calls.push_back(ToolCall{c.at("tool").get<std::string>(), c.at("input"), c.at("output")});
  }
  p.recipe = j.value("recipe", json());
  return p;
}

}  // namespace

ClipSpec clip_from_json(const json& j) {
  ClipSpec c;
  c.stream_id = j.at("stream_id").get<std::string>();
  c.start = j.at("start").get<double>();
  c.end = j.at("end").get<double>();
  c.category = parse_enum<Category>(j, "category", parse_category);
  c.anchor.timestamp = j.at("anchor").at("timestamp").get<double>();
  c.anchor.kind = parse_enum<AnchorKind>(j.at("anchor"), "kind", parse_anchor_kind);
  c.first_frame = j.at("first_frame").get<std::size_t>();
  c.last_frame = j.at("last_frame").get<std::size_t>();
  if (j.contains("goal_object_id") && !j["goal_object_id"].is_null()) {
    c.goal_object_id = j["goal_object_id"].get<std::string>();
  }
  return c;
}

json item_to_json(const QAItem& item) {
  json j;
  j["id"] = item.id;
  j["category"] = category_name(item.category);
  if (item.chain) {
    const ChainPayload& c = *item.chain;
    j["goal"] = c.goal;
    j["candidates"] = c.candidates;
    j["k"] = c.k;
    json chains = json::array();
    for (const ActionChain& chain : c.valid_chains) {
      json edges = json::array();
      for (Direction8 d : chain.edges) edges.push_back(std::string(1, direction_letter(d)));
      chains.push_back({{"nodes", chain.node_ids}, {"edges", edges}});
    }
    j["valid_chains"] = chains;
  } else {
    j["proximity_kind"] = proximity_kind_name(item.proximity_kind);
    j["question"] = item.question;
    json options = json::array();
    for (const QAOption& o : item.options) {
      options.push_back({{"label", std::string(1, o.label)}, {"text", o.text}, {"payload", payload_to_json(o.payload)}});
    }
    j["options"] = options;
    j["answer_label"] = std::string(1, item.answer_label);
    j["answer_payload"] = payload_to_json(item.answer_payload);
  }
  j["clip"] = clip_to_json(item.clip);
  j["provenance"] = provenance_to_json(item.provenance);
  return j;
}

QAItem item_from_json(const json& j) {
  QAItem item;
  try {
    item.id = j.at("id").get<std::string>();
    item.category = parse_enum<Category>(j, "category", parse_category);
    if (j.contains("valid_chains")) {
      ChainPayload c;
      c.goal = j.at("goal").get<std::string>();
      c.candidates = j.at("candidates").get<std::vector<std::string>>();
      c.k = j.at("k").get<int>();
      for (const json& chain : j.at("valid_chains")) {
        ActionChain a;
        a.node_ids = chain.at("nodes").get<std::vector<int>>();
        for (const json& e : chain.at("edges")) {
          const std::string s = e.get<std::string>();
          auto d = s.size() == 1 ? direction_from_letter(s[0]) : std::nullopt;
          if (!d) throw Error(ErrorCode::SchemaViolation, "bad edge letter '" + s + "'");
          a.edges.push_back(*d);
        }
        c.valid_chains.push_back(std::move(a));
      }
      item.proximity_kind = ProximityKind::Relative;
      item.chain = std::move(c);
    } else {
      item.proximity_kind = parse_enum<ProximityKind>(j, "proximity_kind", parse_proximity_kind);
      item.question = j.at("question").get<std::string>();
      for (const json& o : j.at("options")) {
        item.options.push_back(QAOption{parse_label(o.at("label")), o.at("text").get<std::string>(),
                                        payload_from_json(o.at("payload"))});
      }
      item.answer_label = parse_label(j.at("answer_label"));
      item.answer_payload = payload_from_json(j.at("answer_payload"));
    }
    item.clip = clip_from_json(j.at("clip"));
    item.provenance = provenance_from_json(j.at("provenance"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("malformed record: ") + e.what());
  }
  validate_item(item);
  return item;
}

std::string benchmark_header(std::size_t count) {
  return "# proxgen benchmark v1; records=" + std::to_string(count);
}

std::string serialize_items(const std::vector<QAItem>& items) {
  std::string out = benchmark_header(items.size());
  out.push_back('\n');
  for (const QAItem& item : items) {
    out += item_to_json(item).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<QAItem> parse_items(std::string_view text) {
  std::vector<QAItem> items;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(line_no) + " is not JSON");
    items.push_back(item_from_json(j));
  }
  return items;
}

void write_items(const std::string& path, const std::vector<QAItem>& items) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot open " + path + " for writing");
  out << serialize_items(items);
  if (!out) throw Error(ErrorCode::IOFailure, "write to " + path + " failed");
}

std::vector<QAItem> read_items(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_items(buffer.str());
}

}  // namespace proxgen
