// Copyright 2026 The blockhaf Authors
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

namespace blockhaf {

enum class ErrorCode {
  kNotHermitian,
  kNotSymmetric,
  kNotPositiveDefinite,
  kNonFinite,
  kNotSubunitary,
  kSingularCovariance,
  kSingularResolvent,
  kIndexOutOfRange,
  kLengthMismatch,
  kDomainError,
  kTooLarge,
  kOddDimension,
  kPartitionMismatch,
  kLayoutMismatch,
  kRankViolation,
  kNotNormalized,
  kInvalidConfig,
};

const char* error_name(ErrorCode code);

// True for codes that describe bad input rather than a numerical breakdown.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace blockhaf
