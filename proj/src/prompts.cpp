// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>

#include "proxgen/eval.hpp"

namespace proxgen {

namespace {

constexpr const char* kMcqSystem =
    "You are an expert in spatial reasoning, path planning, and human intention and behavior prediction.\n"
    "You will be given a sequence of continuous first-person video frames, a question, and multiple-choice options.\n"
    "The video is captured from the camera wearer’s own egocentric viewpoint, meaning that \"the person\" or "
    "\"the human\" mentioned in the question refers to the camera wearer.\n"
    "All spatial directions (front, back, left, right, and their diagonals) are defined in this egocentric  "
    "viewpoint.\n"
    "Your task is to analyze the visual content from this first-person perspective, reason about the scene in "
    "relation to the question, and select the correct answer from the provided options.";

constexpr const char* kMcqSystemCotTail =
    "\nOutput format: Your final line must be: The correct answer is <>.\n"
    "Example:\n"
    "(Reasoning...)\n"
    "The correct answer is <B>";

constexpr const char* kMcqInstructionCot =
    "Think step by step.\n"
    "Choose the most appropriate option. The option letter in your answer should be enclosed in angle brackets "
    "(<>).\n"
    "Finally, end your answer with: The correct answer is <>.";

constexpr const char* kMcqInstruction =
    "Choose the most appropriate option. The selected option letter in your answer must be enclosed in angle "
    "brackets (<>).";

constexpr const char* kChainHead =
    "You are an expert in continuous action planning and egocentric spatial reasoning.\n"
    "You will receive:\n";

constexpr const char* kDirectionLegend =
    "(4) a discrete set of 8 egocentric directions relative to the last frame:\n"
    "  A = right, B = left, C = front, D = back, E = front-right, F = front-left, G = back-left, H = back-right.\n"
    "\n";

constexpr const char* kChainSystem3 =
    "(1) a short first-person video segment consisting of 8 evenly sampled frames, where the last frame is the "
    "current observation;\n"
    "(2) a high-level task goal that you aim to accomplish;\n"
    "(3) a set of 10 candidate keysteps, each with an integer id;\n"
    "@LEGEND@"
    "You should regard yourself as the camera wearer, i.e., the person whose first-person viewpoint is shown in the "
    "video.\n"
    "All reasoning about space, motion, and direction must be made relative to your own egocentric viewpoint as "
    "seen in the video’s last frame.\n"
    "\n"
    "Your task:\n"
    "1) Choose exactly three keysteps from the candidates and order them to accomplish the goal. Return their ids "
    "as [k1, k2, k3].\n"
    "2) For each transition between consecutive keysteps (from the previous interaction to the next interaction), "
    "describe the egocentric movement direction relative to your viewpoint in the last frame. Return these as two "
    "direction letters from {A, B, C, D, E, F, G, H} for step1→step2 and step2→step3.\n"
    "\n"
    "All directions are defined in your egocentric frame at the last frame: moving away from you is C (front), "
    "moving toward you is D (back), left/right are defined with respect to your viewpoint, and diagonals are "
    "E/F/G/H.\n"
    "\n"
    "After completing your reasoning, directly output only the final answer in the following format (two lists, "
    "no extra text):\n"
    "[[k1, k2, k3], [d12, d23]]\n"
    "\n"
    "Example outputs:\n"
    "[[8, 7, 3], [\"F\", \"A\"]]\n"
    "[[10, 7, 9], [\"E\", \"B\"]]";

constexpr const char* kChainSystem45 =
    "(1) a short first-person video segment consisting of 8 evenly sampled frames, where the last frame represents "
    "the current observation;\n"
    "(2) a high-level task goal you aim to accomplish;\n"
    "(3) a set of 10 candidate keysteps, each with an integer id;\n"
    "@LEGEND@"
    "You should regard yourself as the camera wearer — the person whose first-person viewpoint is shown in the "
    "video.\n"
    "All reasoning about space, motion, and direction must be made relative to your own @FRAME@ as seen in the "
    "last frame.\n"
    "\n"
    "Your task:\n"
    "1) Select exactly @COUNT@ keysteps from the candidates and order them to accomplish the goal. Return their ids "
    "as @IDS@.\n"
    "2) For each transition between consecutive keysteps, describe the egocentric movement direction relative to "
    "the last frame. Return these as @DIRS@, where each direction is a single letter from {A–H}.\n"
    "\n"
    "All directions are defined relative to your egocentric viewpoint in the last frame: moving away from you "
    "corresponds to C (front), moving toward you corresponds to D (back), left/right are determined by your "
    "viewpoint, and diagonal movements map to E/F/G/H.\n"
    "\n"
    "After reasoning, output only the final result in the following format (two lists, no explanation or "
    "additional text):\n"
    "@FORMAT@\n"
    "\n"
    "Example outputs:\n"
    "@EXAMPLES@";

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string id_list(int k) {
  std::string out = "[";
  for (int i = 1; i <= k; ++i) out += (i > 1 ? ", k" : "k") + std::to_string(i);
  return out + "]";
}

std::string edge_list(int k) {
  std::string out = "[";
  for (int i = 1; i < k; ++i) out += (i > 1 ? ", d" : "d") + std::to_string(i) + std::to_string(i + 1);
  return out + "]";
}

std::string frame_lines() {
  std::string out;
  for (std::size_t i = 1; i <= kPromptFrames; ++i) out += "[Frame " + std::to_string(i) + "]\n";
  return out;
}

}  // namespace

std::vector<std::size_t> uniform_frame_indices(std::size_t frame_count) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kPromptFrames; ++i) out.push_back(i * frame_count / kPromptFrames);
  return out;
}

std::string frame_ref(const std::string& stream_id, std::size_t frame_index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06zu", frame_index);
  return stream_id + "/" + buf;
}

std::string mcq_system_text(bool with_cot) {
  std::string out = kMcqSystem;
  if (with_cot) out += kMcqSystemCotTail;
  return out;
}

std::string chain_format_line(int k) {
  if (k < 3 || k > 5) throw Error(ErrorCode::UnsupportedK, "chain prompts exist for k = 3, 4, 5; got " + std::to_string(k));
  return "[" + id_list(k) + ", " + edge_list(k) + "]";
}

std::string chain_system_text(int k) {
  const std::string format = chain_format_line(k);
  std::string body;
  if (k == 3) {
    body = kChainSystem3;
  } else {
    body = kChainSystem45;
    replace_all(body, "@FRAME@", k == 4 ? "body-centered frame" : "egocentric viewpoint");
    replace_all(body, "@COUNT@", k == 4 ? "four" : "five");
    replace_all(body, "@IDS@", id_list(k));
    replace_all(body, "@DIRS@", edge_list(k));
    replace_all(body, "@FORMAT@", format);
    replace_all(body, "@EXAMPLES@", k == 4 ? "[[8, 7, 3, 9], [\"F\", \"A\", \"H\"]]\n"
                                             "[[10, 7, 9, 8], [\"E\", \"B\", \"A\"]]"
                                           : "[[8, 7, 3, 4, 5], [\"F\", \"A\", \"E\", \"B\"]]\n"
                                             "[[10, 7, 9, 6, 8], [\"E\", \"B\", \"D\", \"C\"]]");
  }
  replace_all(body, "@LEGEND@", kDirectionLegend);
  return std::string(kChainHead) + body;
}

PromptBundle render_prompt(const QAItem& item, bool with_cot) {
  PromptBundle p;
  p.item_id = item.id;
  for (std::size_t i : uniform_frame_indices(item.clip.frame_count())) {
    p.frame_refs.push_back(frame_ref(item.clip.stream_id, item.clip.first_frame + i));
  }

  if (item.chain) {
    const ChainPayload& c = *item.chain;
    p.expected_format = ExpectedFormat::ChainNested;
    p.k = c.k;
    p.system_text = chain_system_text(c.k);
    std::string user = frame_lines();
    user += "\nGoal: " + c.goal + "\n\n";
    user += "Candidate keysteps (id: description, total = 10):\n";
    for (std::size_t i = 0; i < c.candidates.size(); ++i) user += std::to_string(i + 1) + ": " + c.candidates[i] + "\n";
    user += "\nEgocentric direction candidates (relative to the last frame):\n";
    user += "A: right, B: left, C: front, D: back, E: front-right, F: front-left, G: back-left, H: back-right.\n\n";
    if (c.k == 3) {
      user += "Please analyze the video segment and the task goal, then provide your final answer directly in the "
              "format: " + chain_format_line(3) + ".";
    } else {
      user += std::string("Please analyze the scene and provide your final answer directly in ") +
              (c.k == 4 ? "the" : "this") + " format:\n" + chain_format_line(c.k) + ".";
    }
    p.user_text = std::move(user);
    return p;
  }

  p.expected_format = ExpectedFormat::McqBracket;
  p.system_text = mcq_system_text(with_cot);
  std::string user = frame_lines();
  user += "\nQuestion: " + item.question + "\n\n";
  for (const QAOption& o : item.options) user += std::string(1, o.label) + ". " + o.text + "\n";
  user += "\n";
  user += with_cot ? kMcqInstructionCot : kMcqInstruction;
  p.user_text = std::move(user);
  return p;
}

}  // namespace proxgen
