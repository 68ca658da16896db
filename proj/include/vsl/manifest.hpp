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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vsl/costmodel.hpp"
#include "vsl/decompose.hpp"
#include "vsl/scheduler.hpp"

namespace vsl {

// Bucket manifest: header {"kind":"buckets","min_exp","max_exp",
// "dropped_tokens"} then one {"exp","doc","off","len"} per record.
void write_bucket_manifest(const BucketStore& store, std::ostream& out);
void write_bucket_manifest(const BucketStore& store, const std::filesystem::path& path);
BucketStore read_bucket_manifest(const std::filesystem::path& path);

struct ChunkManifestInfo {
  std::string method;  // "concat_chunk", "best_fit", "concat_transform"
  std::uint64_t target_len = 0;
  std::optional<Token> eot_token;
  std::optional<Token> pad_token;
  std::uint64_t seed = 0;
};

// Chunk manifest: header {"kind":"chunks",...} then one line per chunk:
// {"len", "pad", "segments": [[doc, doc_off, start, len], ...]}. Reserved
// segments write doc as -1.
void write_chunk_manifest(std::span<const ChunkedSequence> chunks,
                          const ChunkManifestInfo& info, std::ostream& out);
void write_chunk_manifest(std::span<const ChunkedSequence> chunks,
                          const ChunkManifestInfo& info, const std::filesystem::path& path);

struct ChunkManifest {
  ChunkManifestInfo info;
  std::vector<ChunkedSequence> chunks;
};
ChunkManifest read_chunk_manifest(const std::filesystem::path& path);

struct ScheduleManifestInfo {
  std::string mixture;
  std::string curriculum;
  std::map<int, double> odds;
  int cycles = 1;
};

// Schedule manifest: line 0 is the header {"kind":"schedule","seed","b",
// "mixture","curriculum","odds","cycles","dropped_tail_tokens"}; line k >= 1
// is {"step": k, "cycle", "exp", "refs": [[doc, off], ...]}.
void write_schedule_manifest(const ScheduleReport& report, const ScheduleManifestInfo& info,
                             std::ostream& out);
void write_schedule_manifest(const ScheduleReport& report, const ScheduleManifestInfo& info,
                             const std::filesystem::path& path);

struct ScheduleManifest {
  ScheduleManifestInfo info;
  ScheduleReport report;
};
ScheduleManifest read_schedule_manifest(const std::filesystem::path& path);

using AnyManifest = std::variant<BucketStore, ChunkManifest, ScheduleManifest>;

// Dispatches on the header's "kind".
AnyManifest read_manifest(const std::filesystem::path& path);

MixtureSpec read_mixture_json(const std::filesystem::path& path);
CurriculumSpec read_curriculum_json(const std::filesystem::path& path);
std::string mixture_to_json(const MixtureSpec& spec);
std::string curriculum_to_json(const CurriculumSpec& spec);

}  // namespace vsl
