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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "vsl/manifest.hpp"
#include "vsl/stats.hpp"

namespace vsl {

struct StatsReport {
  std::string kind;
  LengthStats lengths;
  std::uint64_t dropped_tokens = 0;
  Histogram context;                              // unit bins
  std::map<int, std::uint64_t> length_classes;    // floor(log2 l) -> tokens
};

// Lengths come from bucket records, schedule refs, or non-reserved chunk
// segments. Throws when the manifest holds no sequences.
StatsReport manifest_stats(const AnyManifest& manifest);

void write_stats_json(const StatsReport& report, std::ostream& out);
// "context_len,count" rows, one per unit bin.
void write_context_csv(const Histogram& hist, std::ostream& out);

}  // namespace vsl
