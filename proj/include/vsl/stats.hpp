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

#include "vsl/decompose.hpp"
#include "vsl/scheduler.hpp"

namespace vsl {

struct LengthStats {
  double avg_seq_len = 0.0;
  double avg_ctx_len = 0.0;
  std::uint64_t total_tokens = 0;
  std::uint64_t total_sequences = 0;
};

// Exact integer accumulators; Σ l(l-1) overflows 64 bits at corpus scale.
class LengthAccumulator {
 public:
  void add(std::uint64_t length, std::uint64_t count = 1);
  void merge(const LengthAccumulator& other);

  bool empty() const { return sequences_ == 0; }
  LengthStats finish() const;

 private:
  unsigned __int128 tokens_ = 0;
  unsigned __int128 pair_sum_ = 0;  // Σ l(l-1)
  unsigned __int128 sequences_ = 0;
};

// avg_seq = Σl / N, avg_ctx = Σ l(l-1) / (2 Σl).
LengthStats avg_lengths(std::span<const std::uint64_t> lengths);

// Closed form over bucket i holding n_i / 2^i sequences of length 2^i.
LengthStats mixture_avg_lengths(const MixtureSpec& spec);

// Mass per bin [edges[k], edges[k+1]).
struct Histogram {
  std::vector<std::uint64_t> edges;
  std::vector<std::uint64_t> mass;

  std::uint64_t total() const;
  // Mass-weighted mean of bin lower edges; exact for unit-width bins.
  double mean() const;
  // Regroups unit bins into [0,1), [1,2), [2,4), [4,8), ...
  Histogram rebin_log2() const;
};

// Unit bins over same-document context length: a token at position p of a
// segment has context p. Reserved (EOT/pad) segments are skipped.
Histogram context_distribution(std::span<const ChunkedSequence> chunks);
Histogram context_distribution(std::span<const std::uint64_t> sequence_lengths);

// bucket exponent -> floor(log2 source_len) -> tokens.
using ProvenanceHistogram = std::map<int, std::map<int, std::uint64_t>>;

ProvenanceHistogram provenance_histogram(const BucketStore& store,
                                         std::span<const TokenizedDocument> docs);

// Token mass per floor(log2 l) class of the given lengths.
std::map<int, std::uint64_t> length_class_distribution(
    std::span<const std::uint64_t> lengths);

}  // namespace vsl
