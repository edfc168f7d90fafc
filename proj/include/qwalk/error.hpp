// Copyright 2026 The qwalk Authors
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

#include <stdexcept>
#include <string>

namespace qw {

enum class ErrorCode {
  kFamilyMismatch,
  kInvalidArgument,
  kDuplicateGenerator,
  kIdentityGenerator,
  kNotGenerating,
  kRelatorViolation,
  kDimensionMismatch,
  kNotUnitary,
  kCoordination,
  kNotInClass,
  kParse,
  kConstraint,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFamilyMismatch: return "family mismatch";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDuplicateGenerator: return "duplicate generator";
    case ErrorCode::kIdentityGenerator: return "identity generator";
    case ErrorCode::kNotGenerating: return "not a generating set";
    case ErrorCode::kRelatorViolation: return "relator violation";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kNotUnitary: return "not unitary";
    case ErrorCode::kCoordination: return "coordination number";
    case ErrorCode::kNotInClass: return "not in class";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kConstraint: return "parameter constraint";
  }
  return "unknown";
}

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qw
