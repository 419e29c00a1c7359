// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// Per-stream orchestration of clip sampling, tools and item forging. Every
// answer is produced by compute_answer from a small JSON recipe (task name
// plus the frame, object and parameters it needs); the recipe is stored in
// the item provenance so replay_item can recompute the answer from the
// stream alone.
//
// Tasks and their items:
//   intention.head_turn      planning clip, turn toward the goal        Intention/Approximate
//   intention.gaze_target    fixation clip, direction of the gazed box   Intention/Relative
//   exploration.path         planning clip, A* route to the goal         Exploration/*
//   exploitation.afford      interaction clip, distance or direction     Exploitation/*
//   exploitation.place       interaction clip, displacement direction    Exploitation/Relative
//   exploitation.action      keystep clip, heading change                Exploitation/Approximate
//   chain                    densest keystep window                      ChainOfActions

#pragma once

#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "proxgen/chains.hpp"
#include "proxgen/config.hpp"
#include "proxgen/qa_forge.hpp"
#include "proxgen/scene.hpp"

namespace proxgen {

struct SkipRecord {
  std::string stream_id;
  std::string task;
  std::string code;
  std::string detail;
};

nlohmann::json skip_to_json(const SkipRecord& skip);

struct GenerationResult {
  std::vector<QAItem> items;
  std::vector<SkipRecord> skips;
  nlohmann::json report;
};

struct ComputedAnswer {
  AnswerPayload payload;
  std::optional<ChainGroundTruth> chain;
  std::string object_name;
  std::vector<ToolCall> tool_calls;
};

// Recomputes an answer from a recipe. Throws the underlying tool errors.
ComputedAnswer compute_answer(const SceneStream& stream, const nlohmann::json& recipe);

struct ReplayOutcome {
  bool match = false;
  std::string detail;
};

ReplayOutcome replay_item(const QAItem& item, const SceneStream& stream);

// Posts {"goal","steps","constraints","independent_pairs"} and expects
// {"orders": [[i, ...], ...]}.
class HttpChainGenerator : public ChainOrderGenerator {
 public:
  explicit HttpChainGenerator(std::string url) : url_(std::move(url)) {}
  std::vector<std::vector<int>> propose(const ChainProposalRequest& request) const override;
  std::string name() const override { return "http"; }

 private:
  std::string url_;
};

// Uses `generator` for chain orders when given, otherwise the HTTP endpoint
// from the config, otherwise SwapIndependentGenerator. Per-clip failures are
// logged as skips; outputs are ordered by stream, then task, then time.
GenerationResult run_generation(const RunConfig& config, const std::vector<SceneStream>& streams,
                                const ChainOrderGenerator* generator = nullptr);

// benchmark.jsonl, skip_log.jsonl and run_report.json.
void write_generation(const std::string& out_dir, const GenerationResult& result);

}  // namespace proxgen
