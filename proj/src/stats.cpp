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

#include "vsl/stats.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "vsl/error.hpp"

namespace vsl {

namespace {

using u128 = unsigned __int128;

long double to_ld(u128 v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return static_cast<long double>(hi) * 0x1p64L + static_cast<long double>(lo);
}

int floor_log2(std::uint64_t v) { return static_cast<int>(std::bit_width(v)) - 1; }

}  // namespace

void LengthAccumulator::add(std::uint64_t length, std::uint64_t count) {
  if (length == 0) fail(ErrorCode::kInvalidArgument, "sequence lengths must be >= 1");
  const u128 l = length;
  tokens_ += l * count;
  pair_sum_ += l * (l - 1) * count;
  sequences_ += count;
}

void LengthAccumulator::merge(const LengthAccumulator& other) {
  tokens_ += other.tokens_;
  pair_sum_ += other.pair_sum_;
  sequences_ += other.sequences_;
}

LengthStats LengthAccumulator::finish() const {
  if (sequences_ == 0) fail(ErrorCode::kInvalidArgument, "no sequences to average");
  LengthStats s;
  s.total_tokens = static_cast<std::uint64_t>(tokens_);
  s.total_sequences = static_cast<std::uint64_t>(sequences_);
  s.avg_seq_len = static_cast<double>(to_ld(tokens_) / to_ld(sequences_));
  s.avg_ctx_len = static_cast<double>(to_ld(pair_sum_) / (2.0L * to_ld(tokens_)));
  return s;
}

LengthStats avg_lengths(std::span<const std::uint64_t> lengths) {
  LengthAccumulator acc;
  for (auto l : lengths) acc.add(l);
  return acc.finish();
}

LengthStats mixture_avg_lengths(const MixtureSpec& spec) {
  spec.validate();
  LengthAccumulator acc;
  for (const auto& [exp, n] : spec.budgets) {
    if (n == 0) continue;
    acc.add(std::uint64_t{1} << exp, n >> exp);
  }
  if (acc.empty()) fail(ErrorCode::kInvalidArgument, "mixture '" + spec.name + "' is empty");
  return acc.finish();
}

// --- Histograms ----------------------------------------------------------------

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (auto m : mass) t += m;
  return t;
}

double Histogram::mean() const {
  long double weighted = 0;
  long double count = 0;
  for (std::size_t k = 0; k < mass.size(); ++k) {
    weighted += static_cast<long double>(edges[k]) * mass[k];
    count += mass[k];
  }
  if (count == 0) return 0.0;
  return static_cast<double>(weighted / count);
}

Histogram Histogram::rebin_log2() const {
  Histogram out;
  out.edges.push_back(0);
  if (mass.empty()) return out;
  const std::uint64_t top = edges.back();
  for (std::uint64_t e = 1; e < top; e *= 2) {
    out.edges.push_back(e);
  }
  out.edges.push_back(std::max<std::uint64_t>(top, out.edges.back() + 1));
  out.mass.assign(out.edges.size() - 1, 0);
  for (std::size_t k = 0; k < mass.size(); ++k) {
    const std::uint64_t lo = edges[k];
    const std::size_t bin = lo == 0 ? 0 : static_cast<std::size_t>(floor_log2(lo)) + 1;
    out.mass[bin] += mass[k];
  }
  return out;
}

namespace {

// Difference-array accumulation: a segment of length l adds one count to
// each context 0..l-1.
class ContextCounter {
 public:
  void add(std::uint64_t length) {
    if (length == 0) return;
    if (diff_.size() < length + 1) diff_.resize(length + 1, 0);
    diff_[0] += 1;
    diff_[length] -= 1;
  }

  Histogram finish() const {
    Histogram h;
    if (diff_.size() <= 1) {
      h.edges = {0};
      return h;
    }
    const std::size_t bins = diff_.size() - 1;
    h.edges.resize(bins + 1);
    h.mass.resize(bins);
    std::int64_t running = 0;
    for (std::size_t k = 0; k < bins; ++k) {
      running += diff_[k];
      h.mass[k] = static_cast<std::uint64_t>(running);
      h.edges[k] = k;
    }
    h.edges[bins] = bins;
    return h;
  }

 private:
  std::vector<std::int64_t> diff_;
};

}  // namespace

Histogram context_distribution(std::span<const ChunkedSequence> chunks) {
  ContextCounter counter;
  for (const auto& chunk : chunks) {
    for (const auto& seg : chunk.segments) {
      if (!seg.is_reserved()) counter.add(seg.length);
    }
  }
  return counter.finish();
}

Histogram context_distribution(std::span<const std::uint64_t> sequence_lengths) {
  ContextCounter counter;
  for (auto l : sequence_lengths) counter.add(l);
  return counter.finish();
}

ProvenanceHistogram provenance_histogram(const BucketStore& store,
                                         std::span<const TokenizedDocument> docs) {
  const DocumentIndex index(docs);
  ProvenanceHistogram out;
  for (int exp : store.exponents()) {
    for (const auto& r : store.bucket(exp)) {
      const auto* doc = index.find(r.doc_id);
      if (doc == nullptr)
        fail(ErrorCode::kNotFound, "bucket " + std::to_string(exp) + " references document " +
                                       std::to_string(r.doc_id) + " which is not in the corpus");
      out[exp][floor_log2(doc->source_len())] += r.length;
    }
  }
  return out;
}

std::map<int, std::uint64_t> length_class_distribution(
    std::span<const std::uint64_t> lengths) {
  std::map<int, std::uint64_t> out;
  for (auto l : lengths) {
    if (l > 0) out[floor_log2(l)] += l;
  }
  return out;
}

}  // namespace vsl
