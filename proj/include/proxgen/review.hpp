// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Human verification of generated items. Verdicts are appended to a JSONL log
// (one line per accepted write, never rewritten); on start-up the log is
// replayed so the latest verdict per item wins and the full history stays
// available.
//
// Transitions: Pending -> Accepted | Rejected | Edited via accept / reject /
// edit, and back to Pending via reopen. Anything else is IllegalTransition.
// Every write must quote the item's current version token ("v<count>");
// a stale token is ConcurrentEditConflict.

#pragma once

#include <functional>
#include <json.hpp>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "proxgen/qa_forge.hpp"

namespace proxgen {

enum class ReviewStatus { Pending, Accepted, Rejected, Edited };
std::string_view review_status_name(ReviewStatus s);
std::optional<ReviewStatus> parse_review_status(std::string_view s);

struct ReviewState {
  std::string item_id;
  ReviewStatus status = ReviewStatus::Pending;
  std::string verdict_note;
  std::optional<nlohmann::json> edited_payload;
  std::string reviewer_id;
  std::string timestamp;
  int version = 0;
};

nlohmann::json review_state_to_json(const ReviewState& s);
std::string version_token(int version);

struct Verdict {
  std::string action;  // accept | reject | edit | reopen
  std::string note;
  std::optional<nlohmann::json> payload;
};

struct ItemPage {
  std::size_t total = 0;
  std::vector<std::pair<const QAItem*, ReviewState>> entries;
};

class ReviewStore {
 public:
  using Clock = std::function<std::string()>;

  // Throws UnknownItem / SchemaViolation when the log references items or
  // transitions that do not fit `items`.
  ReviewStore(std::vector<QAItem> items, std::string log_path, Clock clock = {});

  ItemPage list(std::optional<ReviewStatus> status, std::size_t offset, std::size_t limit) const;
  // Item record, review state, version token, history and the 8 prompt frame refs.
  nlohmann::json view(const std::string& item_id) const;
  ReviewState state(const std::string& item_id) const;
  std::vector<nlohmann::json> history(const std::string& item_id) const;

  // Throws UnknownItem, ConcurrentEditConflict, IllegalTransition or
  // InvalidArgument (malformed verdict or edit payload).
  ReviewState submit(const std::string& item_id, const Verdict& verdict, const std::string& token,
                     const std::string& reviewer_id);

  // Accepted items as generated plus Edited items with the edit applied, in
  // benchmark order.
  std::vector<QAItem> export_items() const;

 private:
  struct Entry {
    QAItem item;
    ReviewState state;
    std::vector<nlohmann::json> history;
  };

  Entry& find(const std::string& item_id);
  const Entry& find(const std::string& item_id) const;
  void apply(Entry& entry, const nlohmann::json& record);
  nlohmann::json make_record(const Entry& entry, const Verdict& verdict, const std::string& reviewer) const;

  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string log_path_;
  Clock clock_;
  mutable std::mutex mutex_;
};

// Applies an edit payload to an item: {"type","value"} selecting one of the
// MCQ options, or {"valid_chains": [...]} for chain items. Throws
// InvalidArgument.
QAItem apply_edit(const QAItem& item, const nlohmann::json& payload);

}  // namespace proxgen
