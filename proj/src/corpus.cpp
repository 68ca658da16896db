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

#include "vsl/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <limits>

#include "json.hpp"

#include "vsl/error.hpp"

namespace vsl {

namespace {

using json = nlohmann::json;

template <typename T>
void put_le(std::string& buf, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return static_cast<T>(v);
}

std::string where(const std::filesystem::path& path, std::uint64_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::uint64_t total_tokens(std::span<const TokenizedDocument> docs) {
  std::uint64_t total = 0;
  for (const auto& d : docs) total += d.source_len();
  return total;
}

TokenizedDocument byte_tokenize(std::string_view text, DocId doc_id) {
  TokenizedDocument doc{doc_id, {}};
  doc.tokens.reserve(text.size());
  for (char c : text) doc.tokens.push_back(static_cast<unsigned char>(c));
  return doc;
}

// --- JSONL -----------------------------------------------------------------

JsonlReader::JsonlReader(const std::filesystem::path& path) : path_(path), in_(path) {
  if (!in_) fail(ErrorCode::kIo, "cannot open " + path.string());
}

std::optional<TokenizedDocument> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::kParse, where(path_, line_no_) + "malformed JSON: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("tokens"))
      fail(ErrorCode::kParse, where(path_, line_no_) + "expected object with \"id\" and \"tokens\"");
    const auto& id = j["id"];
    if (!id.is_number_integer() || (id.is_number_integer() && !id.is_number_unsigned() &&
                                    id.get<std::int64_t>() < 0))
      fail(ErrorCode::kParse, where(path_, line_no_) + "\"id\" must be a non-negative integer");
    const auto& toks = j["tokens"];
    if (!toks.is_array())
      fail(ErrorCode::kParse, where(path_, line_no_) + "\"tokens\" must be an array");

    TokenizedDocument doc;
    doc.doc_id = id.get<std::uint64_t>();
    doc.tokens.reserve(toks.size());
    for (const auto& t : toks) {
      if (!t.is_number_integer())
        fail(ErrorCode::kParse, where(path_, line_no_) + "token is not an integer");
      if (!t.is_number_unsigned() && t.get<std::int64_t>() < 0)
        fail(ErrorCode::kParse, where(path_, line_no_) + "negative token id");
      const auto v = t.get<std::uint64_t>();
      if (v > std::numeric_limits<Token>::max())
        fail(ErrorCode::kParse, where(path_, line_no_) + "token id " + std::to_string(v) +
                                    " does not fit in 32 bits");
      doc.tokens.push_back(static_cast<Token>(v));
    }
    if (!seen_.insert(doc.doc_id).second)
      fail(ErrorCode::kDuplicateId,
           where(path_, line_no_) + "duplicate document id " + std::to_string(doc.doc_id));
    return doc;
  }
  if (in_.bad()) fail(ErrorCode::kIo, "read failure on " + path_.string());
  return std::nullopt;
}

std::vector<TokenizedDocument> read_jsonl(const std::filesystem::path& path) {
  JsonlReader reader(path);
  std::vector<TokenizedDocument> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

// --- Shards ----------------------------------------------------------------

ShardHeader write_shard(std::span<const TokenizedDocument> docs,
                        const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");

  ShardHeader header;
  header.doc_count = docs.size();

  std::string buf;
  buf.append(header.magic.data(), header.magic.size());
  put_le<std::uint16_t>(buf, header.version);
  put_le<std::uint64_t>(buf, header.doc_count);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));

  for (const auto& doc : docs) {
    buf.clear();
    put_le<std::uint64_t>(buf, doc.doc_id);
    put_le<std::uint64_t>(buf, doc.source_len());
    for (Token t : doc.tokens) put_le<std::uint32_t>(buf, t);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failure on " + path.string());
  return header;
}

ShardReader::ShardReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) fail(ErrorCode::kIo, "cannot open " + path.string());
  unsigned char raw[kShardHeaderBytes];
  in_.read(reinterpret_cast<char*>(raw), sizeof(raw));
  const auto got = static_cast<std::size_t>(in_.gcount());
  if (got < header_.magic.size() ||
      std::memcmp(raw, kShardMagic.data(), kShardMagic.size()) != 0)
    fail(ErrorCode::kFormat, path.string() + ": bad shard magic");
  if (got < sizeof(raw)) fail(ErrorCode::kCorruption, path.string() + ": truncated shard header");
  header_.version = get_le<std::uint16_t>(raw + 8);
  header_.doc_count = get_le<std::uint64_t>(raw + 10);
  if (header_.version != kShardVersion)
    fail(ErrorCode::kFormat,
         path.string() + ": unsupported shard version " + std::to_string(header_.version));
}

std::optional<TokenizedDocument> ShardReader::next() {
  if (read_ == header_.doc_count) {
    if (in_.peek() != std::char_traits<char>::eof())
      fail(ErrorCode::kCorruption, path_.string() + ": trailing bytes after " +
                                       std::to_string(header_.doc_count) + " documents");
    return std::nullopt;
  }
  const auto truncated = [&] {
    fail(ErrorCode::kCorruption, path_.string() + ": truncated payload in document " +
                                     std::to_string(read_) + " of " +
                                     std::to_string(header_.doc_count));
  };

  unsigned char head[16];
  in_.read(reinterpret_cast<char*>(head), sizeof(head));
  if (in_.gcount() != sizeof(head)) truncated();

  TokenizedDocument doc;
  doc.doc_id = get_le<std::uint64_t>(head);
  const auto len = get_le<std::uint64_t>(head + 8);

  // Grow in bounded steps so a corrupt length cannot force a huge allocation.
  constexpr std::uint64_t kStep = 1 << 20;
  std::vector<unsigned char> raw;
  std::uint64_t remaining = len;
  while (remaining > 0) {
    const auto n = std::min(remaining, kStep);
    const auto old = raw.size();
    raw.resize(old + n * kShardTokenWidth);
    in_.read(reinterpret_cast<char*>(raw.data() + old),
             static_cast<std::streamsize>(n * kShardTokenWidth));
    if (static_cast<std::uint64_t>(in_.gcount()) != n * kShardTokenWidth) truncated();
    remaining -= n;
  }
  doc.tokens.resize(len);
  for (std::uint64_t i = 0; i < len; ++i) doc.tokens[i] = get_le<std::uint32_t>(&raw[i * 4]);
  ++read_;
  return doc;
}

std::vector<TokenizedDocument> read_shard(const std::filesystem::path& path) {
  ShardReader reader(path);
  std::vector<TokenizedDocument> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

bool is_shard(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, sizeof(magic));
  return in.gcount() == sizeof(magic) &&
         std::memcmp(magic, kShardMagic.data(), sizeof(magic)) == 0;
}

std::vector<TokenizedDocument> load_corpus(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) fail(ErrorCode::kIo, "no such file: " + path.string());
  if (is_shard(path)) return read_shard(path);
  return read_jsonl(path);
}

DocumentIndex::DocumentIndex(std::span<const TokenizedDocument> docs) : docs_(docs) {
  sorted_.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) sorted_.emplace_back(docs[i].doc_id, i);
  std::sort(sorted_.begin(), sorted_.end());
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (sorted_[i].first == sorted_[i - 1].first)
      fail(ErrorCode::kDuplicateId, "duplicate document id " + std::to_string(sorted_[i].first));
  }
}

const TokenizedDocument* DocumentIndex::find(DocId id) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::make_pair(id, std::size_t{0}));
  if (it == sorted_.end() || it->first != id) return nullptr;
  return &docs_[it->second];
}

const TokenizedDocument& DocumentIndex::at(DocId id) const {
  const auto* doc = find(id);
  if (doc == nullptr) fail(ErrorCode::kNotFound, "document " + std::to_string(id) + " not found");
  return *doc;
}

}  // namespace vsl
