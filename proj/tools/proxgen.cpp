// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// proxgen command line: synth, generate, replay, evaluate, report, review-serve.
//
// Failures print one JSON object {"error": "<Code>", "detail": "..."} on
// stderr. Exit status is 0 on success, 1 on a runtime error, 2 on a usage
// error (the detail names the flag).

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "proxgen/config.hpp"
#include "proxgen/error.hpp"
#include "proxgen/eval.hpp"
#include "proxgen/generate.hpp"
#include "proxgen/metadata.hpp"
#include "proxgen/review.hpp"
#include "proxgen/review_server.hpp"
#include "proxgen/scene_synth.hpp"

namespace {

using nlohmann::json;
using namespace proxgen;

void print_error(std::string_view code, const std::string& detail, const std::string& command,
                 const std::optional<std::string>& flag = std::nullopt) {
  json j = {{"error", code}, {"detail", detail}};
  if (!command.empty()) j["command"] = command;
  if (flag) j["flag"] = *flag;
  std::cerr << j.dump() << std::endl;
}

std::optional<std::string> flag_in(const std::string& message) {
  static const std::regex re("(--?[A-Za-z][A-Za-z0-9-]*)");
  std::smatch m;
  if (std::regex_search(message, m, re)) return m[1].str();
  return std::nullopt;
}

std::vector<SceneStream> ingest_all(const std::vector<std::string>& paths) {
  std::vector<SceneStream> streams;
  for (const std::string& p : paths) streams.push_back(ingest(p));
  return streams;
}

struct SynthArgs {
  std::vector<std::string> recipes;
  int random = 0;
  std::uint64_t seed = 0;
  std::string scenario = "household";
  std::string out_dir;
  std::optional<std::string> recipe_dir;
};

int run_synth(const SynthArgs& a) {
  if (a.recipes.empty() && a.random <= 0) {
    throw Error(ErrorCode::UsageError, "--recipe or --random is required");
  }
  std::vector<SceneRecipe> recipes;
  for (const std::string& p : a.recipes) recipes.push_back(load_recipe(p));
  for (int i = 0; i < a.random; ++i) {
    const std::string id = a.scenario + "_" + std::to_string(a.seed) + "_" + std::to_string(i);
    recipes.push_back(make_random_recipe(derive_seed(a.seed, id), id, a.scenario));
  }
  std::error_code ec;
  std::filesystem::create_directories(a.out_dir, ec);
  if (ec) throw Error(ErrorCode::IOFailure, "cannot create " + a.out_dir + ": " + ec.message());
  if (a.recipe_dir) {
    std::filesystem::create_directories(*a.recipe_dir, ec);
    if (ec) throw Error(ErrorCode::IOFailure, "cannot create " + *a.recipe_dir + ": " + ec.message());
  }
  for (const SceneRecipe& r : recipes) {
    if (a.recipe_dir) {
      const auto path = std::filesystem::path(*a.recipe_dir) / (r.stream_id + ".recipe.json");
      std::ofstream out(path, std::ios::binary);
      out << recipe_to_json(r).dump(2) << "\n";
      if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + path.string());
    }
    const SceneStream stream = synthesize(r);
    const std::string path = (std::filesystem::path(a.out_dir) / (stream.stream_id + ".jsonl")).string();
    write_stream(path, stream);
    std::cout << json{{"stream_id", stream.stream_id},
                      {"path", path},
                      {"frames", stream.frame_count()},
                      {"digest", stream_digest(stream)}}
                     .dump()
              << "\n";
  }
  return 0;
}

struct GenerateArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::optional<std::string> config;
  std::vector<std::string> overrides;
};

int run_generate(const GenerateArgs& a) {
  const RunConfig config = load_config(a.config, a.overrides);
  const std::vector<SceneStream> streams = ingest_all(a.inputs);
  const GenerationResult result = run_generation(config, streams);
  write_generation(a.out_dir, result);
  std::cout << json{{"items", result.items.size()}, {"skips", result.skips.size()}, {"out_dir", a.out_dir}}.dump()
            << "\n";
  return 0;
}

struct ReplayArgs {
  std::string items;
  std::vector<std::string> inputs;
};

int run_replay(const ReplayArgs& a) {
  const std::vector<QAItem> items = read_items(a.items);
  std::map<std::string, SceneStream> streams;
  for (SceneStream& s : ingest_all(a.inputs)) {
    const std::string id = s.stream_id;
    streams.emplace(id, std::move(s));
  }
  std::size_t matched = 0;
  json failures = json::array();
  for (const QAItem& item : items) {
    auto it = streams.find(item.clip.stream_id);
    const ReplayOutcome r = it == streams.end() ? ReplayOutcome{false, "stream not supplied"}
                                                : replay_item(item, it->second);
    if (r.match) {
      ++matched;
    } else {
      failures.push_back({{"id", item.id}, {"detail", r.detail}});
    }
  }
  std::cout << json{{"items", items.size()}, {"matched", matched}, {"failures", failures}}.dump() << "\n";
  if (matched != items.size()) {
    print_error("ReplayMismatch", std::to_string(items.size() - matched) + " item(s) did not replay", "replay");
    return 1;
  }
  return 0;
}

struct EvaluateArgs {
  std::string items;
  std::string client;
  std::optional<std::string> responses;
  std::optional<std::string> endpoint;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> report;
  bool no_cot = false;
  std::size_t workers = 4;
};

int run_evaluate(const EvaluateArgs& a) {
  std::unique_ptr<ModelClient> client;
  if (a.client == "replay") {
    if (!a.responses) throw Error(ErrorCode::UsageError, "--responses is required with --client replay");
    client = std::make_unique<ReplayClient>(ReplayClient::from_file(*a.responses));
  } else if (a.client == "random") {
    client = std::make_unique<RandomClient>(a.seed);
  } else if (a.client == "http") {
    if (!a.endpoint) throw Error(ErrorCode::UsageError, "--endpoint is required with --client http");
    client = std::make_unique<HttpClient>(*a.endpoint);
  } else {
    throw Error(ErrorCode::UsageError, "--client must be replay, random or http");
  }
  const std::vector<QAItem> items = read_items(a.items);
  EvalOptions options;
  options.with_cot = !a.no_cot;
  options.workers = a.workers;
  const std::vector<EvalRecord> records = evaluate(items, *client, options);
  if (a.out) write_results(*a.out, records);
  const std::string table = render_report(aggregate(records));
  if (a.report) {
    std::ofstream out(*a.report, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + *a.report);
    out << table;
  }
  std::cout << table;
  return 0;
}

int run_report(const std::string& results, const std::optional<std::string>& out_path) {
  const std::string table = render_report(aggregate(read_results(results)));
  if (out_path) {
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IOFailure, "cannot write " + *out_path);
    out << table;
  }
  std::cout << table;
  return 0;
}

int run_review(const std::string& items_path, const std::string& log, const std::string& host, int port) {
  ReviewStore store(read_items(items_path), log);
  ReviewServer server(store);
  const int bound = server.bind(host, port);
  std::cerr << "review service listening on http://" << host << ":" << bound << std::endl;
  server.listen();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proxgen: egocentric proximity QA generation and evaluation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Synthesize recordings from scene recipes");
  cmd_synth->add_option("--recipe", synth.recipes, "Recipe JSON file(s)")->check(CLI::ExistingFile);
  cmd_synth->add_option("--random", synth.random, "Number of random recipes to add");
  cmd_synth->add_option("--seed", synth.seed, "Seed for random recipes");
  cmd_synth->add_option("--scenario", synth.scenario, "Scenario label for random recipes");
  cmd_synth->add_option("--out-dir", synth.out_dir, "Directory for metadata files")->required();
  cmd_synth->add_option("--save-recipes", synth.recipe_dir, "Also write each recipe as JSON here");

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "Generate benchmark items from metadata files");
  cmd_gen->add_option("--input", gen.inputs, "Metadata JSONL file(s)")->required()->check(CLI::ExistingFile);
  cmd_gen->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  cmd_gen->add_option("--config", gen.config, "Run config JSON")->check(CLI::ExistingFile);
  cmd_gen->add_option("--set", gen.overrides, "Config override key=value (repeatable)");

  ReplayArgs rep;
  auto* cmd_rep = app.add_subcommand("replay", "Recompute every item's answer from its provenance");
  cmd_rep->add_option("--items", rep.items, "Benchmark JSONL")->required()->check(CLI::ExistingFile);
  cmd_rep->add_option("--input", rep.inputs, "Metadata JSONL file(s)")->required()->check(CLI::ExistingFile);

  EvaluateArgs ev;
  auto* cmd_eval = app.add_subcommand("evaluate", "Prompt a model client and score its answers");
  cmd_eval->add_option("--items", ev.items, "Benchmark JSONL")->required()->check(CLI::ExistingFile);
  cmd_eval->add_option("--client", ev.client, "replay | random | http")->required();
  cmd_eval->add_option("--responses", ev.responses, "Replay responses JSONL")->check(CLI::ExistingFile);
  cmd_eval->add_option("--endpoint", ev.endpoint, "HTTP model endpoint");
  cmd_eval->add_option("--seed", ev.seed, "Seed for the random client");
  cmd_eval->add_option("--out", ev.out, "Results JSONL");
  cmd_eval->add_option("--report", ev.report, "Aggregate table output");
  cmd_eval->add_flag("--no-cot", ev.no_cot, "Use the prompt without chain-of-thought");
  cmd_eval->add_option("--workers", ev.workers, "Concurrent client calls")->check(CLI::Range(1, 64));

  std::string results;
  std::optional<std::string> report_out;
  auto* cmd_report = app.add_subcommand("report", "Aggregate a results file");
  cmd_report->add_option("--results", results, "Results JSONL")->required()->check(CLI::ExistingFile);
  cmd_report->add_option("--out", report_out, "Write the table here as well");

  std::string items_path;
  std::string log_path;
  std::string host = "127.0.0.1";
  int port = 8080;
  auto* cmd_review = app.add_subcommand("review-serve", "Serve the review API");
  cmd_review->add_option("--items", items_path, "Benchmark JSONL")->required()->check(CLI::ExistingFile);
  cmd_review->add_option("--log", log_path, "Verdict log (appended)")->required();
  cmd_review->add_option("--host", host, "Bind address");
  cmd_review->add_option("--port", port, "Port (0 picks one)")->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(to_string(ErrorCode::UsageError), e.what(), "", flag_in(e.what()));
    return 2;
  }

  std::string command;
  try {
    if (cmd_synth->parsed()) {
      command = "synth";
      return run_synth(synth);
    }
    if (cmd_gen->parsed()) {
      command = "generate";
      return run_generate(gen);
    }
    if (cmd_rep->parsed()) {
      command = "replay";
      return run_replay(rep);
    }
    if (cmd_eval->parsed()) {
      command = "evaluate";
      return run_evaluate(ev);
    }
    if (cmd_report->parsed()) {
      command = "report";
      return run_report(results, report_out);
    }
    if (cmd_review->parsed()) {
      command = "review-serve";
      return run_review(items_path, log_path, host, port);
    }
  } catch (const Error& e) {
    const bool usage = e.code() == ErrorCode::UsageError;
    print_error(to_string(e.code()), e.detail(), command, usage ? flag_in(e.detail()) : std::nullopt);
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what(), command);
    return 1;
  }
  return 2;
}
