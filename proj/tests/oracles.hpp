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

// Reference procedures for the tests. Each one is written the slow, literal
// way and shares no code with the library paths it checks.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

namespace vsl::oracle {

// Digits of `l` found by repeatedly subtracting the largest power of two
// (capped at 2^cap_exp) that fits.
inline std::vector<std::uint64_t> greedy_power_digits(std::uint64_t l, int cap_exp) {
  std::vector<std::uint64_t> out;
  const std::uint64_t cap = std::uint64_t{1} << cap_exp;
  while (l > 0) {
    std::uint64_t p = 1;
    while (p * 2 <= l && p * 2 <= cap) p *= 2;
    out.push_back(p);
    l -= p;
  }
  return out;
}

// splitmix64 exactly as in the public-domain C reference (Vigna, 2015).
struct SplitMixReference {
  std::uint64_t x;
  std::uint64_t next() {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
    z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
    return z ^ (z >> 31);
  }
};

// Average context by enumerating every token's context length.
inline double enumerated_avg_context(const std::vector<std::uint64_t>& lengths) {
  long double sum = 0;
  long double tokens = 0;
  for (auto l : lengths) {
    for (std::uint64_t j = 0; j < l; ++j) sum += j;
    tokens += l;
  }
  return static_cast<double>(sum / tokens);
}

// Minimum number of bins of capacity n, by exhaustive assignment.
inline std::size_t optimal_bin_count(std::vector<std::uint64_t> items, std::uint64_t n) {
  std::sort(items.rbegin(), items.rend());
  std::size_t best = items.size();
  std::vector<std::uint64_t> bins;
  std::function<void(std::size_t)> place = [&](std::size_t i) {
    if (bins.size() >= best) return;
    if (i == items.size()) {
      best = bins.size();
      return;
    }
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (bins[b] + items[i] <= n) {
        bins[b] += items[i];
        place(i + 1);
        bins[b] -= items[i];
      }
    }
    bins.push_back(items[i]);
    place(i + 1);
    bins.pop_back();
  };
  place(0);
  return best;
}

// Best-fit decreasing, step by step: sort descending (stable), then scan
// every open bin for the feasible one with least remaining capacity after
// placement, first index wins; otherwise open a bin. Returns, for each
// chunk in input order, the index of the bin it landed in.
inline std::vector<std::size_t> literal_bfd(const std::vector<std::uint64_t>& lengths,
                                            std::uint64_t n) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < lengths.size(); ++i) order.push_back(i);
  for (std::size_t i = 1; i < order.size(); ++i) {  // insertion sort, stable
    for (std::size_t j = i; j > 0 && lengths[order[j]] > lengths[order[j - 1]]; --j)
      std::swap(order[j], order[j - 1]);
  }
  std::vector<std::uint64_t> remaining;
  std::vector<std::size_t> placed(lengths.size(), 0);
  for (std::size_t idx : order) {
    const auto len = lengths[idx];
    std::size_t best = remaining.size();
    for (std::size_t b = 0; b < remaining.size(); ++b) {
      if (remaining[b] < len) continue;
      if (best == remaining.size() || remaining[b] - len < remaining[best] - len) best = b;
    }
    if (best == remaining.size()) remaining.push_back(n);
    remaining[best] -= len;
    placed[idx] = best;
  }
  return placed;
}

}  // namespace vsl::oracle
