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
#include <string>
#include <vector>

#include "vsl/decompose.hpp"

namespace vsl {

// Token budget n_i per bucket exponent. Every budget is a whole number of
// 2^i sequences.
struct MixtureSpec {
  std::string name;
  std::map<int, std::uint64_t> budgets;

  void validate() const;
  std::uint64_t total_tokens() const;
};

// Sampling odds o_i per bucket exponent, replayed for `cycles` cycles.
struct CurriculumSpec {
  std::string name;
  std::map<int, double> odds;
  int cycles = 1;

  void validate() const;
};

// Sequences chosen per bucket, in the order they will be consumed.
using Selection = std::map<int, std::vector<SequenceRecord>>;

Selection build_mixture(const BucketStore& store, const MixtureSpec& spec,
                        std::uint64_t seed);

struct BatchStep {
  std::uint64_t step_index = 0;
  int cycle_index = 0;
  int exp = 0;
  std::vector<SequenceRecord> refs;
};

struct ScheduleReport {
  std::vector<BatchStep> steps;
  std::map<int, std::uint64_t> dropped_tail_tokens;
  std::uint64_t seed = 0;
  std::uint64_t batch_tokens = 0;

  std::uint64_t total_dropped_tokens() const;
};

ScheduleReport make_schedule(const Selection& selection, const CurriculumSpec& curriculum,
                             std::uint64_t batch_tokens, std::uint64_t seed);

enum class Violation {
  kNone,
  kTokenCount,
  kWrongLength,
  kDuplicate,
  kUnknownRef,
  kCycleOrder,
  kStepIndex,
  kAccounting,
};

const char* violation_name(Violation v);

struct Verdict {
  Violation violation = Violation::kNone;
  std::string message;

  bool ok() const { return violation == Violation::kNone; }
};

Verdict validate_schedule(const ScheduleReport& report, const Selection& selection,
                          std::uint64_t batch_tokens);

// Named mixtures and curricula. Lookup is case-insensitive and accepts the
// "<=2k"/">=256"/">=1k" spellings alongside "le2k"/"ge256"/"ge1k".
std::vector<std::string> mixture_preset_names();
MixtureSpec mixture_preset(const std::string& name);

std::vector<std::string> curriculum_preset_names();
CurriculumSpec curriculum_preset(const std::string& name, int cycles = 1);

}  // namespace vsl
