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
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace vsl {

// One splitmix64 step: returns (value, next state).
constexpr std::pair<std::uint64_t, std::uint64_t> prng_next(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {z ^ (z >> 31), state};
}

// All randomness in the library flows through this generator so that
// manifests are reproducible across implementations.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  constexpr std::uint64_t next() {
    auto [value, state] = prng_next(state_);
    state_ = state;
    return value;
  }

  // value / 2^64, in [0, 1).
  double next_unit() { return static_cast<double>(next()) * 0x1p-64; }

  // Draws an index from a cumulative probability vector: the first i with
  // u < cumulative[i]. Falls back to the last entry with positive mass when
  // rounding leaves u above the final cumulative value.
  std::size_t pick(std::span<const double> cumulative);

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Fisher-Yates: for i = n-1 down to 1, j = next() % (i + 1), swap(i, j).
template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next() % i);
    std::swap(items[i - 1], items[j]);
  }
}

inline std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  shuffle(order, rng);
  return order;
}

}  // namespace vsl
