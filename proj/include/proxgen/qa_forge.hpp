// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Benchmark items: bins for approximate answers, five-option MCQ assembly,
// chain packaging, and the line-delimited record format.
//
// Record grammar (one JSON object per line, '#' lines are comments):
//   id, category, proximity_kind, question, options[{label,text}],
//   answer_label, answer_payload{type,value}, clip{...}, provenance{...}
// Chain items carry id, category, goal, candidates[10], k,
//   valid_chains[{nodes[], edges[letters]}], clip, provenance.

#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxgen/chains.hpp"
#include "proxgen/clip_sampler.hpp"
#include "proxgen/geometry.hpp"
#include "proxgen/rng.hpp"

namespace proxgen {

enum class ProximityKind { Approximate, Relative };
std::string_view proximity_kind_name(ProximityKind k);
std::optional<ProximityKind> parse_proximity_kind(std::string_view s);

// Half-open [lo, hi).
struct DistanceBin {
  std::string label;
  double lo = 0.0;
  double hi = 0.0;
};

class DistanceBinning {
 public:
  // Edges must be strictly increasing from 0; the last bin is open-ended.
  DistanceBinning(std::vector<double> edges, std::vector<std::string> labels);
  static const DistanceBinning& standard();

  const DistanceBin& bin(double meters) const;
  const std::vector<DistanceBin>& bins() const { return bins_; }
  nlohmann::json to_json() const;

 private:
  std::vector<DistanceBin> bins_;
};

enum class TurnSide { None, Left, Right };

// Magnitude interval [lo, hi) on |theta|; the top bin also holds 180.
struct AngleBin {
  std::string label;
  TurnSide side = TurnSide::None;
  double lo = 0.0;
  double hi = 0.0;
};

class AngleBinning {
 public:
  // Magnitude thresholds none/slight, slight/moderate, moderate/sharp.
  AngleBinning(double none_below = 10.0, double slight_below = 30.0, double moderate_below = 90.0);
  static const AngleBinning& standard();

  // theta in (-180, 180]; positive is a left turn. 180 counts as left.
  const AngleBin& bin(SignedAngle theta) const;
  const std::vector<AngleBin>& bins() const { return bins_; }
  nlohmann::json to_json() const;

 private:
  std::vector<AngleBin> bins_;
};

enum class PayloadType { Direction8, DistanceBin, AngleBin, ObjectId };
std::string_view payload_type_name(PayloadType t);
std::optional<PayloadType> parse_payload_type(std::string_view s);

// `value` is the canonical token: direction name, bin label or object id.
struct AnswerPayload {
  PayloadType type = PayloadType::Direction8;
  std::string value;

  friend bool operator==(const AnswerPayload&, const AnswerPayload&) = default;
};

AnswerPayload direction_payload(Direction8 d);
AnswerPayload distance_payload(double meters, const DistanceBinning& binning = DistanceBinning::standard());
AnswerPayload angle_payload(SignedAngle theta, const AngleBinning& binning = AngleBinning::standard());

struct QAOption {
  char label = 'A';
  std::string text;
  AnswerPayload payload;

  friend bool operator==(const QAOption&, const QAOption&) = default;
};

struct ToolCall {
  std::string tool;
  nlohmann::json input;
  nlohmann::json output;

  friend bool operator==(const ToolCall&, const ToolCall&) = default;
};

struct Provenance {
  std::string template_id = "builtin-v1";
  std::uint64_t seed = 0;
  std::vector<ToolCall> tool_calls;
  nlohmann::json recipe;  // inputs needed to recompute the answer

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ChainPayload {
  std::string goal;
  std::vector<std::string> candidates;
  int k = 0;
  std::vector<ActionChain> valid_chains;

  friend bool operator==(const ChainPayload&, const ChainPayload&) = default;
};

struct QAItem {
  std::string id;
  Category category = Category::Intention;
  ProximityKind proximity_kind = ProximityKind::Relative;
  ClipSpec clip;
  std::string question;
  std::vector<QAOption> options;
  char answer_label = 'A';
  AnswerPayload answer_payload;
  Provenance provenance;
  std::optional<ChainPayload> chain;

  bool is_chain() const { return chain.has_value(); }
  const QAOption& answer_option() const;
};

inline constexpr std::size_t kOptionCount = 5;

// Domain of values a payload can take and their option texts.
struct PayloadDomain {
  PayloadType type = PayloadType::Direction8;
  std::vector<std::string> values;
  std::vector<std::string> texts;

  static PayloadDomain directions();
  static PayloadDomain distances(const DistanceBinning& binning = DistanceBinning::standard());
  static PayloadDomain angles(const AngleBinning& binning = AngleBinning::standard());
  std::string text_of(const std::string& value) const;
};

// Four distractors drawn uniformly from the rest of the domain, then the five
// options shuffled into labels A-E. Throws DistractorSpaceTooSmall.
std::vector<QAOption> build_options(const AnswerPayload& answer, const PayloadDomain& domain, SeededRng& rng);

QAItem forge_mcq(Category category, ProximityKind kind, const AnswerPayload& answer, const PayloadDomain& domain,
                 std::string question, SeededRng& rng);

QAItem forge_chain_item(const ClipSpec& clip, const ChainGroundTruth& truth);

// Checks the item invariants; throws SchemaViolation naming the problem.
void validate_item(const QAItem& item);

nlohmann::json clip_to_json(const ClipSpec& clip);
ClipSpec clip_from_json(const nlohmann::json& j);
nlohmann::json item_to_json(const QAItem& item);
QAItem item_from_json(const nlohmann::json& j);

std::string benchmark_header(std::size_t count);
// One header comment line, then one record per line.
std::string serialize_items(const std::vector<QAItem>& items);
std::vector<QAItem> parse_items(std::string_view text);
void write_items(const std::string& path, const std::vector<QAItem>& items);
std::vector<QAItem> read_items(const std::string& path);

}  // namespace proxgen
