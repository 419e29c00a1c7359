// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/review.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "proxgen/error.hpp"
#include "proxgen/eval.hpp"

namespace proxgen {

using nlohmann::json;

std::string_view review_status_name(ReviewStatus s) {
  switch (s) {
    case ReviewStatus::Pending: return "Pending";
    case ReviewStatus::Accepted: return "Accepted";
    case ReviewStatus::Rejected: return "Rejected";
    case ReviewStatus::Edited: return "Edited";
  }
  return "Pending";
}

std::optional<ReviewStatus> parse_review_status(std::string_view s) {
  for (ReviewStatus v : {ReviewStatus::Pending, ReviewStatus::Accepted, ReviewStatus::Rejected, ReviewStatus::Edited}) {
    if (review_status_name(v) == s) return v;
  }
  return std::nullopt;
}

std::string version_token(int version) { return "v" + std::to_string(version); }

json review_state_to_json(const ReviewState& s) {
  return {{"item_id", s.item_id},
          {"status", review_status_name(s.status)},
          {"verdict_note", s.verdict_note},
          {"edited_payload", s.edited_payload ? *s.edited_payload : json(nullptr)},
          {"reviewer_id", s.reviewer_id},
          {"timestamp", s.timestamp},
          {"version", version_token(s.version)}};
}

QAItem apply_edit(const QAItem& item, const json& payload) {
  if (!payload.is_object()) throw Error(ErrorCode::InvalidArgument, "edit payload must be an object");
  json j = item_to_json(item);
  if (item.chain) {
    if (!payload.contains("valid_chains")) {
      throw Error(ErrorCode::InvalidArgument, "chain edits need a 'valid_chains' list");
    }
    j["valid_chains"] = payload.at("valid_chains");
  } else {
    const json* match = nullptr;
    for (const json& o : j.at("options")) {
      if (o.at("payload") == payload) match = &o;
    }
    if (!match) throw Error(ErrorCode::InvalidArgument, "edit payload matches none of the options");
    j["answer_label"] = match->at("label");
    j["answer_payload"] = payload;
  }
  try {
    return item_from_json(j);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidArgument, "edited item is invalid: " + e.detail());
  }
}

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<ReviewStatus> target_of(const std::string& action) {
  if (action == "accept") return ReviewStatus::Accepted;
  if (action == "reject") return ReviewStatus::Rejected;
  if (action == "edit") return ReviewStatus::Edited;
  if (action == "reopen") return ReviewStatus::Pending;
  return std::nullopt;
}

bool legal(ReviewStatus from, ReviewStatus to) {
  if (from == ReviewStatus::Pending) return to != ReviewStatus::Pending;
  return to == ReviewStatus::Pending;
}

}  // namespace

ReviewStore::ReviewStore(std::vector<QAItem> items, std::string log_path, Clock clock)
    : log_path_(std::move(log_path)), clock_(clock ? std::move(clock) : Clock(utc_now)) {
  for (QAItem& item : items) {
    if (index_.count(item.id)) throw Error(ErrorCode::SchemaViolation, "duplicate item id " + item.id);
    index_[item.id] = entries_.size();
    ReviewState s;
    s.item_id = item.id;
    entries_.push_back(Entry{std::move(item), s, {}});
  }
  std::ifstream in(log_path_);
  if (!in) return;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const json record = json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      throw Error(ErrorCode::SchemaViolation, "review log line " + std::to_string(n) + " is not a JSON object");
    }
    try {
      apply(find(record.at("item_id").get<std::string>()), record);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaViolation, "review log line " + std::to_string(n) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "review log line " + std::to_string(n) + ": " + e.detail());
    }
  }
}

ReviewStore::Entry& ReviewStore::find(const std::string& item_id) {
  auto it = index_.find(item_id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownItem, "no item '" + item_id + "'");
  return entries_[it->second];
}

const ReviewStore::Entry& ReviewStore::find(const std::string& item_id) const {
  auto it = index_.find(item_id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownItem, "no item '" + item_id + "'");
  return entries_[it->second];
}

void ReviewStore::apply(Entry& entry, const json& record) {
  const auto status = parse_review_status(record.at("status").get<std::string>());
  if (!status) throw Error(ErrorCode::SchemaViolation, "unknown status");
  if (!legal(entry.state.status, *status)) {
    throw Error(ErrorCode::IllegalTransition, std::string(review_status_name(entry.state.status)) + " -> " +
                                                  std::string(review_status_name(*status)));
  }
  const int version = record.at("version").get<int>();
  if (version != entry.state.version + 1) throw Error(ErrorCode::SchemaViolation, "version sequence broken");
  ReviewState& s = entry.state;
  s.status = *status;
  s.verdict_note = record.value("note", "");
  s.edited_payload = record.contains("payload") && !record["payload"].is_null()
                         ? std::optional<json>(record["payload"])
                         : std::nullopt;
  s.reviewer_id = record.at("reviewer_id").get<std::string>();
  s.timestamp = record.at("timestamp").get<std::string>();
  s.version = version;
  entry.history.push_back(record);
}

json ReviewStore::make_record(const Entry& entry, const Verdict& verdict, const std::string& reviewer) const {
  const auto target = target_of(verdict.action);
  return {{"item_id", entry.item.id},
          {"verdict", verdict.action},
          {"status", review_status_name(*target)},
          {"note", verdict.note},
          {"payload", verdict.action == "edit" ? *verdict.payload : json(nullptr)},
          {"reviewer_id", reviewer},
          {"timestamp", clock_()},
          {"version", entry.state.version + 1}};
}

ItemPage ReviewStore::list(std::optional<ReviewStatus> status, std::size_t offset, std::size_t limit) const {
  std::lock_guard<std::mutex> lock(mutex_);
  ItemPage page;
  for (const Entry& e : entries_) {
    if (status && e.state.status != *status) continue;
    if (page.total >= offset && page.entries.size() < limit) page.entries.emplace_back(&e.item, e.state);
    ++page.total;
  }
  return page;
}

json ReviewStore::view(const std::string& item_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const Entry& e = find(item_id);
  std::vector<std::string> frames;
  for (std::size_t i : uniform_frame_indices(e.item.clip.frame_count())) {
    frames.push_back(frame_ref(e.item.clip.stream_id, e.item.clip.first_frame + i));
  }
  return {{"item", item_to_json(e.item)},
          {"state", review_state_to_json(e.state)},
          {"version", version_token(e.state.version)},
          {"frame_refs", frames},
          {"history", e.history}};
}

ReviewState ReviewStore::state(const std::string& item_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return find(item_id).state;
}

std::vector<json> ReviewStore::history(const std::string& item_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return find(item_id).history;
}

ReviewState ReviewStore::submit(const std::string& item_id, const Verdict& verdict, const std::string& token,
                                const std::string& reviewer_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  Entry& e = find(item_id);
  if (token != version_token(e.state.version)) {
    throw Error(ErrorCode::ConcurrentEditConflict,
                "version token " + token + " is stale; current is " + version_token(e.state.version));
  }
  const auto target = target_of(verdict.action);
  if (!target) throw Error(ErrorCode::InvalidArgument, "unknown verdict '" + verdict.action + "'");
  if (!legal(e.state.status, *target)) {
    throw Error(ErrorCode::IllegalTransition, std::string(review_status_name(e.state.status)) + " -> " +
                                                  std::string(review_status_name(*target)));
  }
  if (verdict.action == "edit") {
    if (!verdict.payload) throw Error(ErrorCode::InvalidArgument, "edit requires a payload");
    (void)apply_edit(e.item, *verdict.payload);
  }
  if (reviewer_id.empty()) throw Error(ErrorCode::InvalidArgument, "reviewer id is required");
  const json record = make_record(e, verdict, reviewer_id);
  {
    std::ofstream out(log_path_, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::IOFailure, "cannot append to " + log_path_);
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::IOFailure, "append to " + log_path_ + " failed");
  }
  apply(e, record);
  return e.state;
}

std::vector<QAItem> ReviewStore::export_items() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<QAItem> out;
  for (const Entry& e : entries_) {
    if (e.state.status == ReviewStatus::Accepted) out.push_back(e.item);
    if (e.state.status == ReviewStatus::Edited) out.push_back(apply_edit(e.item, *e.state.edited_payload));
  }
  return out;
}

}  // namespace proxgen
