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

#include "vsl/decompose.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "vsl/error.hpp"
#include "vsl/prng.hpp"

namespace vsl {

namespace {

void check_exponents(int min_exp, int max_exp) {
  if (min_exp < 0 || max_exp < min_exp || max_exp > kMaxExponent)
    fail(ErrorCode::kInvalidArgument,
         "exponent range must satisfy 0 <= min_exp <= max_exp <= " +
             std::to_string(kMaxExponent) + " (got " + std::to_string(min_exp) + ".." +
             std::to_string(max_exp) + ")");
}

// Exponent of a power-of-two length, or -1.
int exact_exponent(std::uint64_t length) {
  if (length == 0 || !std::has_single_bit(length)) return -1;
  return std::countr_zero(length);
}

int common_exponent(std::span<const SequenceRecord> bucket) {
  if (bucket.empty()) return -1;
  const int exp = exact_exponent(bucket.front().length);
  if (exp < 0)
    fail(ErrorCode::kInvalidArgument,
         "record length " + std::to_string(bucket.front().length) + " is not a power of two");
  for (const auto& r : bucket) {
    if (r.length != bucket.front().length)
      fail(ErrorCode::kInvalidArgument, "bucket mixes record lengths " +
                                            std::to_string(bucket.front().length) + " and " +
                                            std::to_string(r.length));
  }
  return exp;
}

}  // namespace

DocumentDecomposition decompose_length(DocId doc_id, std::uint64_t length, int min_exp,
                                       int max_exp) {
  check_exponents(min_exp, max_exp);
  DocumentDecomposition out;
  const std::uint64_t top = std::uint64_t{1} << max_exp;
  std::uint64_t offset = 0;
  for (std::uint64_t k = length / top; k > 0; --k) {
    out.records.push_back({doc_id, offset, top});
    offset += top;
  }
  const std::uint64_t rest = length % top;
  for (int i = max_exp - 1; i >= 0; --i) {
    const std::uint64_t piece = std::uint64_t{1} << i;
    if ((rest & piece) == 0) continue;
    if (i >= min_exp) {
      out.records.push_back({doc_id, offset, piece});
      offset += piece;
    } else {
      out.dropped_tokens += piece;
    }
  }
  return out;
}

DocumentDecomposition decompose_document(const TokenizedDocument& doc, int min_exp,
                                         int max_exp) {
  return decompose_length(doc.doc_id, doc.source_len(), min_exp, max_exp);
}

// --- BucketStore -------------------------------------------------------------

BucketStore::BucketStore(int min_exp, int max_exp) : min_exp_(min_exp), max_exp_(max_exp) {
  check_exponents(min_exp, max_exp);
}

std::span<const SequenceRecord> BucketStore::bucket(int exp) const {
  auto it = buckets_.find(exp);
  if (it == buckets_.end()) return {};
  return it->second;
}

std::vector<int> BucketStore::exponents() const {
  std::vector<int> out;
  for (const auto& [exp, records] : buckets_) {
    if (!records.empty()) out.push_back(exp);
  }
  return out;
}

std::uint64_t BucketStore::bucket_tokens(int exp) const {
  return static_cast<std::uint64_t>(bucket(exp).size()) << exp;
}

std::uint64_t BucketStore::total_tokens() const {
  std::uint64_t total = 0;
  for (const auto& [exp, records] : buckets_) total += static_cast<std::uint64_t>(records.size()) << exp;
  return total;
}

std::size_t BucketStore::total_records() const {
  std::size_t total = 0;
  for (const auto& [exp, records] : buckets_) total += records.size();
  return total;
}

void BucketStore::add(const SequenceRecord& record) {
  const int exp = exact_exponent(record.length);
  if (exp < min_exp_ || exp > max_exp_)
    fail(ErrorCode::kInvalidArgument, "record length " + std::to_string(record.length) +
                                          " is not a power of two in [2^" +
                                          std::to_string(min_exp_) + ", 2^" +
                                          std::to_string(max_exp_) + "]");
  buckets_[exp].push_back(record);
}

BucketBuilder::BucketBuilder(int min_exp, int max_exp) : store_(min_exp, max_exp) {}

const DocumentDecomposition& BucketBuilder::add(const TokenizedDocument& doc) {
  last_ = decompose_document(doc, store_.min_exp(), store_.max_exp());
  for (const auto& r : last_.records) store_.add(r);
  store_.add_dropped(last_.dropped_tokens);
  return last_;
}

BucketStore BucketBuilder::finish() && { return std::move(store_); }

BucketStore decompose_corpus(std::span<const TokenizedDocument> docs, int min_exp,
                             int max_exp) {
  BucketBuilder builder(min_exp, max_exp);
  for (const auto& doc : docs) builder.add(doc);
  return std::move(builder).finish();
}

std::vector<Token> materialize(const SequenceRecord& record, const DocumentIndex& index) {
  const auto& doc = index.at(record.doc_id);
  if (record.offset > doc.source_len() || record.length > doc.source_len() - record.offset)
    fail(ErrorCode::kInvalidArgument,
         "record [" + std::to_string(record.offset) + ", +" + std::to_string(record.length) +
             ") exceeds document " + std::to_string(record.doc_id) + " of length " +
             std::to_string(doc.source_len()));
  const auto first = doc.tokens.begin() + static_cast<std::ptrdiff_t>(record.offset);
  return {first, first + static_cast<std::ptrdiff_t>(record.length)};
}

// --- Chunked sequences -------------------------------------------------------

bool segments_tile(const ChunkedSequence& chunk) {
  std::uint64_t pos = 0;
  for (const auto& s : chunk.segments) {
    if (s.start_in_chunk != pos || s.length == 0) return false;
    pos += s.length;
  }
  return pos + chunk.pad_count == chunk.target_len;
}

std::vector<Token> materialize(const ChunkedSequence& chunk, const DocumentIndex& index,
                               Token eot_token, Token pad_token) {
  std::vector<Token> out;
  out.reserve(chunk.target_len);
  for (const auto& s : chunk.segments) {
    if (s.is_reserved()) {
      out.insert(out.end(), s.length, eot_token);
    } else {
      auto part = materialize(SequenceRecord{s.doc_id, s.doc_offset, s.length}, index);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  out.insert(out.end(), chunk.pad_count, pad_token);
  return out;
}

std::vector<ChunkedSequence> concat_and_chunk(std::span<const TokenizedDocument> docs,
                                              std::uint64_t target_len,
                                              std::uint64_t shuffle_seed) {
  if (target_len == 0) fail(ErrorCode::kInvalidArgument, "target_len must be >= 1");

  std::vector<ChunkedSequence> chunks;
  ChunkedSequence current{target_len, {}, 0};
  std::uint64_t fill = 0;

  // Appends [doc_offset, doc_offset + len) of `id`, cutting at chunk edges.
  auto emit = [&](DocId id, std::uint64_t doc_offset, std::uint64_t len) {
    while (len > 0) {
      const std::uint64_t take = std::min(len, target_len - fill);
      current.segments.push_back({id, doc_offset, fill, take});
      fill += take;
      len -= take;
      if (id != kReservedDocId) doc_offset += take;
      if (fill == target_len) {
        chunks.push_back(std::move(current));
        current = ChunkedSequence{target_len, {}, 0};
        fill = 0;
      }
    }
  };

  for (std::size_t idx : permutation(docs.size(), shuffle_seed)) {
    const auto& doc = docs[idx];
    if (doc.source_len() == 0) continue;
    emit(doc.doc_id, 0, doc.source_len());
    emit(kReservedDocId, 0, 1);
  }
  return chunks;
}

std::vector<SequenceRecord> prechunk(std::span<const TokenizedDocument> docs,
                                     std::uint64_t context_size) {
  if (context_size == 0) fail(ErrorCode::kInvalidArgument, "context size must be >= 1");
  std::vector<SequenceRecord> out;
  for (const auto& doc : docs) {
    for (std::uint64_t off = 0; off < doc.source_len(); off += context_size)
      out.push_back({doc.doc_id, off, std::min(context_size, doc.source_len() - off)});
  }
  return out;
}

std::vector<ChunkedSequence> best_fit_pack(std::span<const SequenceRecord> chunks,
                                           const PackConfig& config) {
  const std::uint64_t n = config.context_size;
  if (n == 0) fail(ErrorCode::kInvalidArgument, "context size must be >= 1");
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (chunks[i].length > n)
      fail(ErrorCode::kInvalidArgument, "chunk " + std::to_string(i) + " has length " +
                                            std::to_string(chunks[i].length) +
                                            " > context size " + std::to_string(n));
  }

  std::vector<std::size_t> order(chunks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chunks[a].length > chunks[b].length;
  });

  std::vector<ChunkedSequence> bins;
  std::vector<std::uint64_t> fill;
  // (remaining capacity, bin index); the smallest remaining >= len is the
  // bin left with minimal residue, and set order breaks ties by index.
  std::set<std::pair<std::uint64_t, std::size_t>> open;

  for (std::size_t idx : order) {
    const auto& c = chunks[idx];
    if (c.length == 0) continue;
    auto it = open.lower_bound({c.length, 0});
    std::size_t bin;
    if (it == open.end()) {
      bin = bins.size();
      bins.push_back(ChunkedSequence{n, {}, 0});
      fill.push_back(0);
    } else {
      bin = it->second;
      open.erase(it);
    }
    bins[bin].segments.push_back({c.doc_id, c.offset, fill[bin], c.length});
    fill[bin] += c.length;
    if (fill[bin] < n) open.insert({n - fill[bin], bin});
  }
  for (std::size_t b = 0; b < bins.size(); ++b) bins[b].pad_count = n - fill[b];
  return bins;
}

std::vector<SequenceRecord> chunk_transform(std::span<const SequenceRecord> bucket,
                                            int target_exp, std::uint64_t shuffle_seed) {
  const int exp = common_exponent(bucket);
  if (exp < 0) return {};
  if (target_exp < 0 || target_exp >= exp)
    fail(ErrorCode::kInvalidArgument, "chunk transform needs target exponent < " +
                                          std::to_string(exp) + " (got " +
                                          std::to_string(target_exp) + ")");
  const std::uint64_t piece = std::uint64_t{1} << target_exp;
  const std::uint64_t parts = std::uint64_t{1} << (exp - target_exp);
  std::vector<SequenceRecord> out;
  out.reserve(bucket.size() * parts);
  for (const auto& r : bucket) {
    for (std::uint64_t k = 0; k < parts; ++k) out.push_back({r.doc_id, r.offset + k * piece, piece});
  }
  SplitMix64 rng(shuffle_seed);
  shuffle(out, rng);
  return out;
}

ConcatTransformResult concat_transform(std::span<const SequenceRecord> bucket,
                                       int target_exp, std::uint64_t shuffle_seed) {
  ConcatTransformResult result;
  const int exp = common_exponent(bucket);
  if (exp < 0) return result;
  if (target_exp <= exp || target_exp > kMaxExponent)
    fail(ErrorCode::kInvalidArgument, "concat transform needs target exponent > " +
                                          std::to_string(exp) + " (got " +
                                          std::to_string(target_exp) + ")");
  const std::uint64_t target_len = std::uint64_t{1} << target_exp;
  const std::uint64_t run = std::uint64_t{1} << (target_exp - exp);

  std::vector<SequenceRecord> shuffled(bucket.begin(), bucket.end());
  SplitMix64 rng(shuffle_seed);
  shuffle(shuffled, rng);

  const std::uint64_t full = shuffled.size() / run;
  result.sequences.reserve(full);
  for (std::uint64_t s = 0; s < full; ++s) {
    ChunkedSequence seq{target_len, {}, 0};
    std::uint64_t pos = 0;
    for (std::uint64_t k = 0; k < run; ++k) {
      const auto& r = shuffled[s * run + k];
      seq.segments.push_back({r.doc_id, r.offset, pos, r.length});
      pos += r.length;
    }
    result.sequences.push_back(std::move(seq));
  }
  result.dropped_records = shuffled.size() - full * run;
  result.dropped_tokens = result.dropped_records << exp;
  return result;
}

}  // namespace vsl
