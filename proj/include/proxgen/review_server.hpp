// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

// HTTP front end for ReviewStore.
//
//   GET  /items?status=Pending&offset=0&limit=50
//   GET  /items/{id}
//   POST /items/{id}/verdict   headers X-Version-Token, X-Reviewer-Id
//        body {"verdict": "accept"|"reject"|"edit"|"reopen", "note": "...", "payload": {...}}
//   GET  /export               benchmark JSONL of Accepted and Edited items
//
// Errors come back as {"error": "<Code>", "detail": "..."} with 400 (bad
// request), 404 (UnknownItem), 409 (ConcurrentEditConflict) or 422
// (IllegalTransition, invalid edit payload).

#pragma once

#include <memory>
#include <string>

#include "proxgen/review.hpp"

namespace proxgen {

class ReviewServer {
 public:
  explicit ReviewServer(ReviewStore& store);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds to `port` (0 picks a free one) and returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace proxgen
