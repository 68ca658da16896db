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

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace vsl {

using DocId = std::uint64_t;
using Token = std::uint32_t;

struct TokenizedDocument {
  DocId doc_id = 0;
  std::vector<Token> tokens;

  std::uint64_t source_len() const { return tokens.size(); }

  bool operator==(const TokenizedDocument&) const = default;
};

std::uint64_t total_tokens(std::span<const TokenizedDocument> docs);

TokenizedDocument byte_tokenize(std::string_view text, DocId doc_id = 0);

// Streams {"id": <int>, "tokens": [<uint32>...]} lines. Blank lines are
// skipped. Errors carry the 1-based line number.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  std::optional<TokenizedDocument> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t line_no_ = 0;
  std::unordered_set<DocId> seen_;
};

std::vector<TokenizedDocument> read_jsonl(const std::filesystem::path& path);

// Shard layout, all integers little-endian:
//   magic "VSLSHRD1" (8) | version u16 | doc_count u64
//   per document: doc_id u64 | length u64 | tokens u32 * length
// The token width is fixed at 4 bytes by version 1 and is not stored.
inline constexpr std::array<char, 8> kShardMagic = {'V', 'S', 'L', 'S', 'H', 'R', 'D', '1'};
inline constexpr std::uint16_t kShardVersion = 1;
inline constexpr std::uint32_t kShardTokenWidth = 4;
inline constexpr std::size_t kShardHeaderBytes = 8 + 2 + 8;

struct ShardHeader {
  std::array<char, 8> magic = kShardMagic;
  std::uint16_t version = kShardVersion;
  std::uint32_t token_width = kShardTokenWidth;
  std::uint64_t doc_count = 0;

  bool operator==(const ShardHeader&) const = default;
};

ShardHeader write_shard(std::span<const TokenizedDocument> docs,
                        const std::filesystem::path& path);

class ShardReader {
 public:
  explicit ShardReader(const std::filesystem::path& path);

  const ShardHeader& header() const { return header_; }

  // Returns nullopt after doc_count documents; throws on truncation or
  // trailing bytes.
  std::optional<TokenizedDocument> next();

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  ShardHeader header_;
  std::uint64_t read_ = 0;
};

std::vector<TokenizedDocument> read_shard(const std::filesystem::path& path);

bool is_shard(const std::filesystem::path& path);

// Loads a shard or a JSONL file, chosen by the leading magic bytes.
std::vector<TokenizedDocument> load_corpus(const std::filesystem::path& path);

// Lookup by doc_id over a borrowed corpus.
class DocumentIndex {
 public:
  explicit DocumentIndex(std::span<const TokenizedDocument> docs);

  const TokenizedDocument* find(DocId id) const;
  const TokenizedDocument& at(DocId id) const;

 private:
  std::span<const TokenizedDocument> docs_;
  std::vector<std::pair<DocId, std::size_t>> sorted_;
};

}  // namespace vsl
