// Copyright 2026 The vsl Authors. All rights reserved.
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

#include "vsl/error.hpp"

#include "vsl/prng.hpp"

namespace vsl {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kCorruption: return "corruption";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kDuplicateId: return "duplicate id";
    case ErrorCode::kInsufficientTokens: return "insufficient tokens";
    case ErrorCode::kNotFound: return "not found";
    case ErrorCode::kInvalidSchedule: return "invalid schedule";
  }
  return "unknown error";
}

std::size_t SplitMix64::pick(std::span<const double> cumulative) {
  const double u = next_unit();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return i;
  }
  for (std::size_t i = cumulative.size(); i > 0; --i) {
    const double prev = i > 1 ? cumulative[i - 2] : 0.0;
    if (cumulative[i - 1] > prev) return i - 1;
  }
  return 0;
}

}  // namespace vsl
