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

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vsl/corpus.hpp"

namespace vsl {

// Marks EOT and pad segments so statistics can exclude them.
inline constexpr DocId kReservedDocId = ~DocId{0};

// Largest exponent accepted anywhere a bucket exponent is taken.
inline constexpr int kMaxExponent = 40;

// A span [offset, offset + length) inside one source document.
struct SequenceRecord {
  DocId doc_id = 0;
  std::uint64_t offset = 0;
  std::uint64_t length = 0;

  bool operator==(const SequenceRecord&) const = default;
  auto operator<=>(const SequenceRecord&) const = default;
};

struct DocumentDecomposition {
  std::vector<SequenceRecord> records;
  std::uint64_t dropped_tokens = 0;
};

// Records are start-aligned: full 2^max_exp spans first, then the binary
// digits of the remainder in descending order. Digits below 2^min_exp are
// dropped (they are always the trailing tokens).
DocumentDecomposition decompose_document(const TokenizedDocument& doc, int min_exp,
                                         int max_exp);
DocumentDecomposition decompose_length(DocId doc_id, std::uint64_t length, int min_exp,
                                       int max_exp);

class BucketStore {
 public:
  BucketStore(int min_exp, int max_exp);

  int min_exp() const { return min_exp_; }
  int max_exp() const { return max_exp_; }
  std::uint64_t dropped_tokens() const { return dropped_tokens_; }

  // Empty span for exponents that hold nothing (or are out of range).
  std::span<const SequenceRecord> bucket(int exp) const;
  std::vector<int> exponents() const;  // non-empty buckets, ascending

  std::uint64_t bucket_tokens(int exp) const;
  std::uint64_t total_tokens() const;
  std::size_t total_records() const;

  // Appends a record whose length must be 2^exp with exp in range.
  void add(const SequenceRecord& record);
  void add_dropped(std::uint64_t tokens) { dropped_tokens_ += tokens; }

 private:
  int min_exp_;
  int max_exp_;
  std::map<int, std::vector<SequenceRecord>> buckets_;
  std::uint64_t dropped_tokens_ = 0;
};

// Incremental form of decompose_corpus for corpora that do not fit in memory.
class BucketBuilder {
 public:
  BucketBuilder(int min_exp, int max_exp);

  // Returns the records produced for this document.
  const DocumentDecomposition& add(const TokenizedDocument& doc);

  BucketStore finish() &&;

 private:
  BucketStore store_;
  DocumentDecomposition last_;
};

BucketStore decompose_corpus(std::span<const TokenizedDocument> docs, int min_exp,
                             int max_exp);

// Copies the tokens a record points at.
std::vector<Token> materialize(const SequenceRecord& record, const DocumentIndex& index);

// --- Concatenated / packed sequences -------------------------------------

struct Segment {
  DocId doc_id = 0;
  std::uint64_t doc_offset = 0;
  std::uint64_t start_in_chunk = 0;
  std::uint64_t length = 0;

  bool is_reserved() const { return doc_id == kReservedDocId; }
  bool operator==(const Segment&) const = default;
};

struct ChunkedSequence {
  std::uint64_t target_len = 0;
  std::vector<Segment> segments;
  std::uint64_t pad_count = 0;

  bool operator==(const ChunkedSequence&) const = default;
};

// Segments must tile [0, target_len - pad_count) in order.
bool segments_tile(const ChunkedSequence& chunk);

// Reserved segments materialize as `eot_token`, padding as `pad_token`.
std::vector<Token> materialize(const ChunkedSequence& chunk, const DocumentIndex& index,
                               Token eot_token, Token pad_token);

// Baseline: shuffle documents, join them with one EOT after each non-empty
// document and cut fixed-length chunks; the final partial chunk is dropped.
std::vector<ChunkedSequence> concat_and_chunk(std::span<const TokenizedDocument> docs,
                                              std::uint64_t target_len,
                                              std::uint64_t shuffle_seed);

std::vector<SequenceRecord> prechunk(std::span<const TokenizedDocument> docs,
                                     std::uint64_t context_size);

struct PackConfig {
  std::uint64_t context_size = 0;
  Token pad_token = 0;
};

// Best-fit decreasing. Sort ties keep input order; placement ties go to the
// lowest bin index.
std::vector<ChunkedSequence> best_fit_pack(std::span<const SequenceRecord> chunks,
                                           const PackConfig& config);

// Splits every 2^a record into 2^(a-b) adjacent 2^b records, then shuffles
// the result globally.
std::vector<SequenceRecord> chunk_transform(std::span<const SequenceRecord> bucket,
                                            int target_exp, std::uint64_t shuffle_seed);

struct ConcatTransformResult {
  std::vector<ChunkedSequence> sequences;
  std::uint64_t dropped_records = 0;
  std::uint64_t dropped_tokens = 0;
};

// Shuffles 2^a records and joins runs of 2^(b-a) into 2^b sequences. Records
// left over after the last full run are dropped.
ConcatTransformResult concat_transform(std::span<const SequenceRecord> bucket,
                                       int target_exp, std::uint64_t shuffle_seed);

}  // namespace vsl
