// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxgen {

enum class ErrorCode {
  // geometry
  OrthonormalityViolation,
  DegenerateForward,
  DegenerateTarget,
  InvalidArgument,
  // occupancy / navigation
  EmptyScene,
  DegenerateHull,
  NoPath,
  StartOutOfBounds,
  GoalOutOfBounds,
  // perception
  InsufficientSamples,
  NoFutureEvent,
  // clip sampling
  InsufficientHistory,
  NoValidWindow,
  TooFewKeysteps,
  // chains
  MissingLocation,
  ZeroDisplacement,
  ConstraintConflict,
  PoolExhausted,
  // qa forge / records
  DistractorSpaceTooSmall,
  IOFailure,
  // evaluation
  UnsupportedK,
  ParseFailure,
  LengthMismatch,
  EmptySet,
  // synthesis / oracles
  InvalidRecipe,
  OracleTooLarge,
  // ingestion / pipeline / review
  SchemaViolation,
  NonMonotoneTimestamps,
  InvalidConfig,
  UnknownItem,
  IllegalTransition,
  ConcurrentEditConflict,
  UsageError,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported through this type so
// callers (the CLI, the review service, the skip log) can map it to a stable
// machine-readable name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace proxgen
