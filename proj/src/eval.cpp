// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "proxgen/http_util.hpp"
#include "proxgen/rng.hpp"

namespace proxgen {

using nlohmann::json;

char parse_mcq(std::string_view raw) {
  for (std::size_t i = raw.size(); i >= 3; --i) {
    const std::size_t p = i - 3;
    if (raw[p] == '<' && raw[p + 2] == '>' && raw[p + 1] >= 'A' && raw[p + 1] <= 'E') return raw[p + 1];
  }
  throw Error(ErrorCode::ParseFailure, "no <A>-<E> answer marker in response");
}

namespace {

// Hand-written scanner for [[ints], [letters]].
class ChainScanner {
 public:
  explicit ChainScanner(std::string_view text, std::size_t pos) : s_(text), pos_(pos) {}

  bool parse(ParsedChain& out) {
    if (!take('[')) return false;
    skip_ws();
    if (!take('[')) return false;
    if (!int_list(out.node_ids)) return false;
    skip_ws();
    if (!take(',')) return false;
    skip_ws();
    if (!take('[')) return false;
    if (!letter_list(out.edges)) return false;
    skip_ws();
    return take(']');
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }

  bool take(char c) {
    if (at_end() || s_[pos_] != c) return false;
    ++pos_;
    return true;
  }

  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }

  // Consumes one optional quote character: " ' or a UTF-8 curly quote.
  void skip_quote() {
    if (at_end()) return;
    if (s_[pos_] == '"' || s_[pos_] == '\'') {
      ++pos_;
      return;
    }
    if (s_.size() - pos_ >= 3 && static_cast<unsigned char>(s_[pos_]) == 0xE2 &&
        static_cast<unsigned char>(s_[pos_ + 1]) == 0x80) {
      const unsigned char c = static_cast<unsigned char>(s_[pos_ + 2]);
      if (c == 0x98 || c == 0x99 || c == 0x9C || c == 0x9D) pos_ += 3;
    }
  }

  // Elements are parsed by `element`; the opening '[' is already consumed.
  template <typename F>
  bool list(F element) {
    skip_ws();
    if (take(']')) return true;
    while (true) {
      skip_ws();
      if (!element()) return false;
      skip_ws();
      if (take(']')) return true;
      if (!take(',')) return false;
    }
  }

  bool int_list(std::vector<int>& out) {
    return list([&] {
      std::size_t digits = 0;
      long value = 0;
      while (!at_end() && s_[pos_] >= '0' && s_[pos_] <= '9') {
        if (++digits > 6) return false;
        value = value * 10 + (s_[pos_] - '0');
        ++pos_;
      }
      if (digits == 0) return false;
      out.push_back(static_cast<int>(value));
      return true;
    });
  }

  bool letter_list(std::vector<Direction8>& out) {
    return list([&] {
      skip_quote();
      if (at_end()) return false;
      auto d = direction_from_letter(s_[pos_]);
      if (!d) return false;
      ++pos_;
      skip_quote();
      out.push_back(*d);
      return true;
    });
  }

  std::string_view s_;
  std::size_t pos_;
};

}  // namespace

ParsedChain parse_chain(std::string_view raw, int k) {
  if (k < 3 || k > 5) throw Error(ErrorCode::UnsupportedK, "k must be in [3, 5], got " + std::to_string(k));
  std::optional<ParsedChain> found;
  for (std::size_t start = raw.size(); start-- > 0;) {
    if (raw[start] != '[') continue;
    ParsedChain candidate;
    if (ChainScanner(raw, start).parse(candidate)) {
      found = std::move(candidate);
      break;
    }
  }
  if (!found) throw Error(ErrorCode::ParseFailure, "no [[ids], [directions]] answer in response");
  if (found->node_ids.size() != static_cast<std::size_t>(k) ||
      found->edges.size() != static_cast<std::size_t>(k - 1)) {
    throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(k) + " ids and " + std::to_string(k - 1) +
                                               " directions, got " + std::to_string(found->node_ids.size()) +
                                               " and " + std::to_string(found->edges.size()));
  }
  std::set<int> seen;
  for (int id : found->node_ids) {
    if (id < 1 || id > static_cast<int>(kCandidateSetSize)) {
      throw Error(ErrorCode::ParseFailure, "keystep id " + std::to_string(id) + " is outside 1-10");
    }
    if (!seen.insert(id).second) throw Error(ErrorCode::ParseFailure, "keystep id " + std::to_string(id) + " repeats");
  }
  return *found;
}

ParsedResponse parse_response(std::string_view raw, ExpectedFormat format, int k) {
  ParsedResponse out;
  out.raw_text = std::string(raw);
  try {
    if (format == ExpectedFormat::McqBracket) {
      out.mcq_label = parse_mcq(raw);
    } else {
      out.chain = parse_chain(raw, k);
    }
  } catch (const Error& e) {
    out.failure = e.code();
  }
  return out;
}

std::string group_key(const QAItem& item) {
  if (item.chain) return std::string(category_name(Category::ChainOfActions));
  return std::string(category_name(item.category)) + "/" + std::string(proximity_kind_name(item.proximity_kind));
}

EvalRecord score_mcq_item(const QAItem& item, const ParsedResponse& parsed) {
  EvalRecord r;
  r.item_id = item.id;
  r.group = group_key(item);
  r.response = parsed.raw_text;
  r.parse_failed = !parsed.mcq_label.has_value();
  r.correct = parsed.mcq_label && *parsed.mcq_label == item.answer_label;
  return r;
}

double score_mcq(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptySet, "no records to score");
  std::size_t correct = 0;
  for (const EvalRecord& r : records) correct += r.correct ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

EvalRecord score_chain(const std::optional<ParsedChain>& prediction, const std::vector<ActionChain>& valid_chains) {
  EvalRecord r;
  r.is_chain = true;
  r.group = std::string(category_name(Category::ChainOfActions));
  if (!prediction) {
    r.parse_failed = true;
    return r;
  }
  for (const ActionChain& truth : valid_chains) {
    if (truth.node_ids != prediction->node_ids) continue;
    if (truth.edges.size() != prediction->edges.size() || truth.edges.empty()) continue;
    std::size_t strict = 0;
    std::size_t loose = 0;
    for (std::size_t i = 0; i < truth.edges.size(); ++i) {
      strict += prediction->edges[i] == truth.edges[i] ? 1 : 0;
      loose += ring_distance(prediction->edges[i], truth.edges[i]) <= 1 ? 1 : 0;
    }
    const double n = static_cast<double>(truth.edges.size());
    const double rel_s = static_cast<double>(strict) / n;
    if (!r.act_correct || rel_s > *r.rel_s) {
      r.act_correct = true;
      r.rel_s = rel_s;
      r.rel_l = static_cast<double>(loose) / n;
    }
  }
  r.correct = r.act_correct;
  return r;
}

EvalRecord score_item(const QAItem& item, const std::string& raw_response) {
  if (item.chain) {
    const ParsedResponse parsed = parse_response(raw_response, ExpectedFormat::ChainNested, item.chain->k);
    EvalRecord r = score_chain(parsed.chain, item.chain->valid_chains);
    r.item_id = item.id;
    r.response = raw_response;
    return r;
  }
  return score_mcq_item(item, parse_response(raw_response, ExpectedFormat::McqBracket));
}

namespace {

double round2(double percent) { return std::round(percent * 100.0) / 100.0; }

int group_rank(const std::string& group) {
  static const std::vector<std::string> order = {
      "Intention/Approximate",    "Intention/Relative",    "Exploration/Approximate", "Exploration/Relative",
      "Exploitation/Approximate", "Exploitation/Relative", "ChainOfActions"};
  auto it = std::find(order.begin(), order.end(), group);
  return it == order.end() ? static_cast<int>(order.size()) : static_cast<int>(it - order.begin());
}

}  // namespace

Report aggregate(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptySet, "no records to aggregate");
  std::map<std::string, std::vector<const EvalRecord*>> groups;
  for (const EvalRecord& r : records) groups[r.group].push_back(&r);

  Report report;
  for (const auto& [group, members] : groups) {
    ReportRow row;
    row.group = group;
    row.count = members.size();
    row.is_chain = members.front()->is_chain;
    std::size_t hits = 0;
    double sum_s = 0.0;
    double sum_l = 0.0;
    for (const EvalRecord* r : members) {
      row.parse_failures += r->parse_failed ? 1 : 0;
      const bool hit = row.is_chain ? r->act_correct : r->correct;
      if (!hit) continue;
      ++hits;
      if (row.is_chain) {
        sum_s += r->rel_s.value_or(0.0);
        sum_l += r->rel_l.value_or(0.0);
      }
    }
    row.accuracy = round2(100.0 * static_cast<double>(hits) / static_cast<double>(row.count));
    if (row.is_chain && hits > 0) {
      row.rel_s = round2(100.0 * sum_s / static_cast<double>(hits));
      row.rel_l = round2(100.0 * sum_l / static_cast<double>(hits));
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    const int ra = group_rank(a.group);
    const int rb = group_rank(b.group);
    return ra != rb ? ra < rb : a.group < b.group;
  });
  return report;
}

std::string format_percent(std::optional<double> value) {
  if (!value) return "–";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *value);
  return buf;
}

std::string render_report(const Report& report) {
  auto pad = [](std::string s, std::size_t width) {
    // Column widths count code points so the en dash lines up.
    std::size_t chars = 0;
    for (unsigned char c : s) chars += (c & 0xC0) != 0x80 ? 1 : 0;
    if (chars < width) s.append(width - chars, ' ');
    return s;
  };
  std::string out = pad("group", 26) + pad("n", 6) + pad("acc", 9) + pad("act_acc", 9) + pad("rel_acc_s", 11) +
                    pad("rel_acc_l", 11) + "parse_fail\n";
  for (const ReportRow& row : report.rows) {
    const std::optional<double> acc = row.is_chain ? std::nullopt : std::optional<double>(row.accuracy);
    const std::optional<double> act = row.is_chain ? std::optional<double>(row.accuracy) : std::nullopt;
    out += pad(row.group, 26) + pad(std::to_string(row.count), 6) + pad(format_percent(acc), 9) +
           pad(format_percent(act), 9) + pad(row.is_chain ? format_percent(row.rel_s) : "–", 11) +
           pad(row.is_chain ? format_percent(row.rel_l) : "–", 11) + std::to_string(row.parse_failures) + "\n";
  }
  return out;
}

json record_to_json(const EvalRecord& r) {
  json j = {{"id", r.item_id},          {"group", r.group},
            {"is_chain", r.is_chain},   {"correct", r.correct},
            {"act_correct", r.act_correct}, {"parse_failed", r.parse_failed},
            {"response", r.response}};
  j["rel_s"] = r.rel_s ? json(*r.rel_s) : json(nullptr);
  j["rel_l"] = r.rel_l ? json(*r.rel_l) : json(nullptr);
  return j;
}

EvalRecord record_from_json(const json& j) {
  EvalRecord r;
  r.item_id = j.at("id").get<std::string>();
  r.group = j.at("group").get<std::string>();
  r.is_chain = j.at("is_chain").get<bool>();
  r.correct = j.at("correct").get<bool>();
  r.act_correct = j.at("act_correct").get<bool>();
  r.parse_failed = j.at("parse_failed").get<bool>();
  r.response = j.value("response", "");
  if (!j.at("rel_s").is_null()) r.rel_s = j["rel_s"].get<double>();
  if (!j.at("rel_l").is_null()) r.rel_l = j["rel_l"].get<double>();
  return r;
}

std::string serialize_results(const std::vector<EvalRecord>& records) {
  std::string out = "# proxgen results v1; records=" + std::to_string(records.size()) + "\n";
  for (const EvalRecord& r : records) {
    out += record_to_json(r).dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<EvalRecord> parse_results(std::string_view text) {
  std::vector<EvalRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::SchemaViolation, "results line " + std::to_string(line_no) + " is not JSON");
    try {
      out.push_back(record_from_json(j));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::SchemaViolation, "results line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_results(const std::string& path, const std::vector<EvalRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + path);
  out << serialize_results(records);
  if (!out) throw Error(ErrorCode::IOFailure, "write failed for " + path);
}

std::vector<EvalRecord> read_results(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_results(text);
}

ReplayClient ReplayClient::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  std::map<std::string, std::string> responses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("id") || !j.contains("response")) {
      throw Error(ErrorCode::SchemaViolation, path + ":" + std::to_string(line_no) + ": expected {\"id\", \"response\"}");
    }
    responses[j["id"].get<std::string>()] = j["response"].get<std::string>();
  }
  return ReplayClient(std::move(responses));
}

std::string ReplayClient::complete(const PromptBundle& prompt) const {
  auto it = responses_.find(prompt.item_id);
  return it == responses_.end() ? std::string() : it->second;
}

std::string RandomClient::complete(const PromptBundle& prompt) const {
  SeededRng rng(derive_seed(seed_, prompt.item_id));
  if (prompt.expected_format == ExpectedFormat::McqBracket) {
    const char label = static_cast<char>('A' + rng.uniform_index(kOptionCount));
    return std::string("The correct answer is <") + label + ">.";
  }
  std::string out = "[[";
  const auto ids = rng.sample_indices(kCandidateSetSize, static_cast<std::size_t>(prompt.k));
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + std::to_string(ids[i] + 1);
  out += "], [";
  for (int i = 0; i + 1 < prompt.k; ++i) {
    out += std::string(i ? ", " : "") + "\"" + static_cast<char>('A' + rng.uniform_index(8)) + "\"";
  }
  return out + "]]";
}

std::string HttpClient::complete(const PromptBundle& prompt) const {
  const json body = {{"item_id", prompt.item_id},
                     {"system", prompt.system_text},
                     {"user", prompt.user_text},
                     {"frames", prompt.frame_refs},
                     {"temperature", 0}};
  const json reply = post_json(url_, body, timeout_s_);
  if (!reply.contains("response") || !reply["response"].is_string()) {
    throw Error(ErrorCode::IOFailure, "model endpoint reply lacks a string 'response'");
  }
  return reply["response"].get<std::string>();
}

std::vector<EvalRecord> evaluate(const std::vector<QAItem>& items, const ModelClient& client,
                                 const EvalOptions& options) {
  std::vector<EvalRecord> records(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        const PromptBundle prompt = render_prompt(items[i], options.with_cot);
        records[i] = score_item(items[i], client.complete(prompt));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(items.size());
        return;
      }
    }
  };

  const std::size_t n = std::max<std::size_t>(1, std::min(options.workers, items.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

}  // namespace proxgen
