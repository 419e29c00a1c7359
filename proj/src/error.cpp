// Copyright 2026 The proxgen Authors
// SPDX-License-Identifier: Apache-2.0

#include "proxgen/error.hpp"

namespace proxgen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OrthonormalityViolation: return "OrthonormalityViolation";
    case ErrorCode::DegenerateForward: return "DegenerateForward";
    case ErrorCode::DegenerateTarget: return "DegenerateTarget";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyScene: return "EmptyScene";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::StartOutOfBounds: return "StartOutOfBounds";
    case ErrorCode::GoalOutOfBounds: return "GoalOutOfBounds";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NoFutureEvent: return "NoFutureEvent";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::NoValidWindow: return "NoValidWindow";
    case ErrorCode::TooFewKeysteps: return "TooFewKeysteps";
    case ErrorCode::MissingLocation: return "MissingLocation";
    case ErrorCode::ZeroDisplacement: return "ZeroDisplacement";
    case ErrorCode::ConstraintConflict: return "ConstraintConflict";
    case ErrorCode::PoolExhausted: return "PoolExhausted";
    case ErrorCode::DistractorSpaceTooSmall: return "DistractorSpaceTooSmall";
    case ErrorCode::IOFailure: return "IOFailure";
    case ErrorCode::UnsupportedK: return "UnsupportedK";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidRecipe: return "InvalidRecipe";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::ConcurrentEditConflict: return "ConcurrentEditConflict";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace proxgen
