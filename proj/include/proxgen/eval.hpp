// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Evaluation: prompt rendering, response parsing, scoring and the report
// table. Model backends sit behind ModelClient.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxgen/error.hpp"
#include "proxgen/qa_forge.hpp"

namespace proxgen {

enum class ExpectedFormat { McqBracket, ChainNested };

struct PromptBundle {
  std::string item_id;
  std::string system_text;
  std::string user_text;
  std::vector<std::string> frame_refs;  // always 8
  ExpectedFormat expected_format = ExpectedFormat::McqBracket;
  int k = 0;  // chain length for ChainNested
};

inline constexpr std::size_t kPromptFrames = 8;

// floor(i * N / 8) for i = 0..7.
std::vector<std::size_t> uniform_frame_indices(std::size_t frame_count);
std::string frame_ref(const std::string& stream_id, std::size_t frame_index);

// Throws UnsupportedK for chain items with k outside [3, 5].
PromptBundle render_prompt(const QAItem& item, bool with_cot);

std::string mcq_system_text(bool with_cot);
std::string chain_system_text(int k);
// "[[k1, k2, k3], [d12, d23]]" for k = 3.
std::string chain_format_line(int k);

struct ParsedChain {
  std::vector<int> node_ids;
  std::vector<Direction8> edges;
};

// Last "<X>" with X in A-E. Throws ParseFailure.
char parse_mcq(std::string_view raw);

// Last well-formed [[ints], [letters]] pair; letters may be quoted with
// straight or curly quotes. Throws LengthMismatch when the counts differ from
// k and k-1, ParseFailure otherwise (no pair, repeated or out-of-range ids).
ParsedChain parse_chain(std::string_view raw, int k);

struct ParsedResponse {
  std::string raw_text;
  std::optional<char> mcq_label;
  std::optional<ParsedChain> chain;
  std::optional<ErrorCode> failure;
};

ParsedResponse parse_response(std::string_view raw, ExpectedFormat format, int k = 0);

struct EvalRecord {
  std::string item_id;
  std::string group;
  bool is_chain = false;
  bool correct = false;
  bool act_correct = false;
  std::optional<double> rel_s;
  std::optional<double> rel_l;
  bool parse_failed = false;
  std::string response;
};

// Group key: "Category/ProximityKind" for MCQ items, "ChainOfActions" for chains.
std::string group_key(const QAItem& item);

EvalRecord score_mcq_item(const QAItem& item, const ParsedResponse& parsed);
// Throws EmptySet.
double score_mcq(const std::vector<EvalRecord>& records);

// Matches against every chain in Y with the same node order and keeps the
// one with the highest strict score.
EvalRecord score_chain(const std::optional<ParsedChain>& prediction, const std::vector<ActionChain>& valid_chains);
EvalRecord score_item(const QAItem& item, const std::string& raw_response);

struct ReportRow {
  std::string group;
  std::size_t count = 0;
  bool is_chain = false;
  double accuracy = 0.0;  // percent; Act-Acc for chain rows
  std::optional<double> rel_s;
  std::optional<double> rel_l;
  std::size_t parse_failures = 0;
};

struct Report {
  std::vector<ReportRow> rows;
};

// Percentages rounded to 2 decimals. Throws EmptySet.
Report aggregate(const std::vector<EvalRecord>& records);
std::string format_percent(std::optional<double> value);
std::string render_report(const Report& report);

nlohmann::json record_to_json(const EvalRecord& record);
EvalRecord record_from_json(const nlohmann::json& j);

// "# proxgen results v1; records=N" then one record per line.
std::string serialize_results(const std::vector<EvalRecord>& records);
std::vector<EvalRecord> parse_results(std::string_view text);
void write_results(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> read_results(const std::string& path);

class ModelClient {
 public:
  virtual ~ModelClient() = default;
  // Must be safe to call from several threads at once.
  virtual std::string complete(const PromptBundle& prompt) const = 0;
  virtual std::string name() const = 0;
};

// Canned responses from a JSONL file of {"id": ..., "response": ...}; items
// without a line get an empty response.
class ReplayClient : public ModelClient {
 public:
  explicit ReplayClient(std::map<std::string, std::string> responses) : responses_(std::move(responses)) {}
  static ReplayClient from_file(const std::string& path);
  std::string complete(const PromptBundle& prompt) const override;
  std::string name() const override { return "replay"; }

 private:
  std::map<std::string, std::string> responses_;
};

// Uniform random well-formed answers, seeded per item id.
class RandomClient : public ModelClient {
 public:
  explicit RandomClient(std::uint64_t seed) : seed_(seed) {}
  std::string complete(const PromptBundle& prompt) const override;
  std::string name() const override { return "random"; }

 private:
  std::uint64_t seed_;
};

// POSTs {"item_id","system","user","frames","temperature":0} to `url` and
// reads {"response": ...}.
class HttpClient : public ModelClient {
 public:
  explicit HttpClient(std::string url, int timeout_s = 120) : url_(std::move(url)), timeout_s_(timeout_s) {}
  std::string complete(const PromptBundle& prompt) const override;
  std::string name() const override { return "http"; }

 private:
  std::string url_;
  int timeout_s_;
};

struct EvalOptions {
  bool with_cot = true;
  std::size_t workers = 4;
};

// Records come back in item order regardless of worker scheduling.
std::vector<EvalRecord> evaluate(const std::vector<QAItem>& items, const ModelClient& client,
                                 const EvalOptions& options = {});

}  // namespace proxgen
