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

#include "blockhaf/error.hpp"

#include "blockhaf/types.hpp"

namespace blockhaf {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kNotSubunitary: return "NotSubunitary";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kSingularResolvent: return "SingularResolvent";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kOddDimension: return "OddDimension";
    case ErrorCode::kPartitionMismatch: return "PartitionMismatch";
    case ErrorCode::kLayoutMismatch: return "LayoutMismatch";
    case ErrorCode::kRankViolation: return "RankViolation";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite:
    case ErrorCode::kSingularCovariance:
    case ErrorCode::kSingularResolvent:
      return false;
    default:
      return true;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

Partition ModeLayout::external_blocks() const {
  Partition blocks(externals);
  for (std::size_t k = 0; k < externals; ++k) {
    for (std::size_t l = 0; l < internals; ++l) blocks[k].push_back(index(k, l));
  }
  return blocks;
}

}  // namespace blockhaf
