// Copyright 2026 The dgp-vgae Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dgp {

enum class ErrorCode {
  // ingest
  MalformedLine,
  EmptyInput,
  InvalidParams,
  UnknownLabel,
  // graph / split
  HomogeneousGraph,
  TooFewEdges,
  PolicyMismatch,
  ExhaustedSpace,
  // numerics
  ShapeMismatch,
  InvalidKeepProb,
  NonFiniteGradient,
  NonFiniteValue,
  IndexOutOfRange,
  // baselines / metrics
  EmptyCorpus,
  EmptySide,
  // serialization
  BadFormat,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::HomogeneousGraph: return "HomogeneousGraph";
    case ErrorCode::TooFewEdges: return "TooFewEdges";
    case ErrorCode::PolicyMismatch: return "PolicyMismatch";
    case ErrorCode::ExhaustedSpace: return "ExhaustedSpace";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidKeepProb: return "InvalidKeepProb";
    case ErrorCode::NonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::BadFormat: return "BadFormat";
  }
  return "Unknown";
}

/// Numerical failures map to a distinct CLI exit status from data errors.
inline constexpr bool is_numerical(ErrorCode code) {
  return code == ErrorCode::NonFiniteGradient || code == ErrorCode::NonFiniteValue;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure carrying the 1-based line number of the offending record.
class MalformedLineError : public Error {
 public:
  MalformedLineError(std::size_t line, const std::string& what)
      : Error(ErrorCode::MalformedLine, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dgp
