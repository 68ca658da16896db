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

#include "vsl/scheduler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include "vsl/error.hpp"
#include "vsl/prng.hpp"

namespace vsl {

namespace {

std::uint64_t pow2(int exp) { return std::uint64_t{1} << exp; }

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

// --- Specs -------------------------------------------------------------------

void MixtureSpec::validate() const {
  for (const auto& [exp, n] : budgets) {
    if (exp < 0 || exp > kMaxExponent)
      fail(ErrorCode::kInvalidArgument, "mixture '" + name + "': bucket exponent " +
                                            std::to_string(exp) + " out of range");
    if (n % pow2(exp) != 0)
      fail(ErrorCode::kInvalidArgument,
           "mixture '" + name + "': budget " + std::to_string(n) + " for bucket " +
               std::to_string(exp) + " is not a multiple of " + std::to_string(pow2(exp)));
  }
}

std::uint64_t MixtureSpec::total_tokens() const {
  std::uint64_t total = 0;
  for (const auto& [exp, n] : budgets) total += n;
  return total;
}

void CurriculumSpec::validate() const {
  if (cycles < 1)
    fail(ErrorCode::kInvalidArgument, "curriculum '" + name + "': cycles must be >= 1");
  for (const auto& [exp, o] : odds) {
    if (!(o >= 0.0) || !std::isfinite(o))
      fail(ErrorCode::kInvalidArgument, "curriculum '" + name + "': odds for bucket " +
                                            std::to_string(exp) +
                                            " must be finite and non-negative");
  }
}

std::uint64_t ScheduleReport::total_dropped_tokens() const {
  std::uint64_t total = 0;
  for (const auto& [exp, t] : dropped_tail_tokens) total += t;
  return total;
}

// --- Mixture selection -------------------------------------------------------

Selection build_mixture(const BucketStore& store, const MixtureSpec& spec,
                        std::uint64_t seed) {
  spec.validate();
  Selection selection;
  SplitMix64 rng(seed);
  for (const auto& [exp, budget] : spec.budgets) {
    if (budget == 0) continue;
    const auto available = store.bucket_tokens(exp);
    if (budget > available)
      fail(ErrorCode::kInsufficientTokens,
           "bucket " + std::to_string(exp) + " holds " + std::to_string(available) +
               " tokens but the mixture asks for " + std::to_string(budget) + " (short by " +
               std::to_string(budget - available) + ")");
    const auto bucket = store.bucket(exp);
    std::vector<SequenceRecord> records(bucket.begin(), bucket.end());
    shuffle(records, rng);
    records.resize(budget / pow2(exp));
    selection.emplace(exp, std::move(records));
  }
  return selection;
}

// --- Schedule ----------------------------------------------------------------

namespace {

struct Subset {
  const SequenceRecord* next = nullptr;
  std::uint64_t batches_left = 0;
};

}  // namespace

ScheduleReport make_schedule(const Selection& selection, const CurriculumSpec& curriculum,
                             std::uint64_t batch_tokens, std::uint64_t seed) {
  curriculum.validate();
  if (batch_tokens == 0) fail(ErrorCode::kInvalidArgument, "tokens per step must be positive");

  std::vector<int> exps;
  for (const auto& [exp, records] : selection) {
    if (records.empty()) continue;
    if (batch_tokens % pow2(exp) != 0)
      fail(ErrorCode::kInvalidArgument,
           "tokens per step " + std::to_string(batch_tokens) + " is not divisible by 2^" +
               std::to_string(exp) + " = " + std::to_string(pow2(exp)));
    auto it = curriculum.odds.find(exp);
    if (it == curriculum.odds.end() || it->second <= 0.0)
      fail(ErrorCode::kInvalidArgument, "curriculum '" + curriculum.name +
                                            "' gives no positive odds to selected bucket " +
                                            std::to_string(exp));
    exps.push_back(exp);
  }

  ScheduleReport report;
  report.seed = seed;
  report.batch_tokens = batch_tokens;

  const auto cycles = static_cast<std::uint64_t>(curriculum.cycles);
  // subsets[j][k]: cycle j, bucket exps[k]. Each cycle gets floor(B / c)
  // batches; the last cycle also takes the remainder and the partial tail.
  std::vector<std::vector<Subset>> subsets(cycles, std::vector<Subset>(exps.size()));
  std::vector<double> odds(exps.size());
  for (std::size_t k = 0; k < exps.size(); ++k) {
    const int exp = exps[k];
    const auto& records = selection.at(exp);
    const std::uint64_t per_batch = batch_tokens / pow2(exp);
    const std::uint64_t batches = records.size() / per_batch;
    const std::uint64_t tail = records.size() - batches * per_batch;
    const std::uint64_t per_cycle = batches / cycles;
    const SequenceRecord* cursor = records.data();
    for (std::uint64_t j = 0; j < cycles; ++j) {
      const std::uint64_t n = j + 1 == cycles ? batches - per_cycle * (cycles - 1) : per_cycle;
      subsets[j][k] = {cursor, n};
      cursor += n * per_batch;
    }
    if (tail > 0) report.dropped_tail_tokens[exp] = tail * pow2(exp);
    odds[k] = curriculum.odds.at(exp);
  }

  SplitMix64 rng(seed);
  std::vector<double> cumulative(exps.size());
  for (std::uint64_t j = 0; j < cycles; ++j) {
    auto& cycle = subsets[j];
    for (;;) {
      double total = 0.0;
      for (std::size_t k = 0; k < exps.size(); ++k) {
        if (cycle[k].batches_left > 0) total += odds[k];
      }
      if (total == 0.0) break;
      double running = 0.0;
      for (std::size_t k = 0; k < exps.size(); ++k) {
        if (cycle[k].batches_left > 0) running += odds[k] / total;
        cumulative[k] = running;
      }
      const std::size_t k = rng.pick(cumulative);
      const int exp = exps[k];
      const std::uint64_t per_batch = batch_tokens / pow2(exp);
      auto& subset = cycle[k];

      BatchStep step;
      step.step_index = report.steps.size();
      step.cycle_index = static_cast<int>(j);
      step.exp = exp;
      step.refs.assign(subset.next, subset.next + per_batch);
      subset.next += per_batch;
      --subset.batches_left;
      report.steps.push_back(std::move(step));
    }
  }
  return report;
}

// --- Validation --------------------------------------------------------------

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::kNone: return "ok";
    case Violation::kTokenCount: return "token count";
    case Violation::kWrongLength: return "wrong sequence length";
    case Violation::kDuplicate: return "duplicate sequence";
    case Violation::kUnknownRef: return "unknown sequence";
    case Violation::kCycleOrder: return "cycle order";
    case Violation::kStepIndex: return "step index";
    case Violation::kAccounting: return "token accounting";
  }
  return "unknown";
}

Verdict validate_schedule(const ScheduleReport& report, const Selection& selection,
                          std::uint64_t batch_tokens) {
  auto violation = [](Violation v, const std::string& detail) {
    return Verdict{v, std::string(violation_name(v)) + ": " + detail};
  };

  std::set<SequenceRecord> selected;
  std::uint64_t selected_tokens = 0;
  for (const auto& [exp, records] : selection) {
    selected.insert(records.begin(), records.end());
    selected_tokens += static_cast<std::uint64_t>(records.size()) << exp;
  }

  std::set<SequenceRecord> seen;
  int last_cycle = 0;
  std::uint64_t step_tokens = 0;
  for (std::size_t s = 0; s < report.steps.size(); ++s) {
    const auto& step = report.steps[s];
    const std::string where = "step " + std::to_string(s);
    if (step.step_index != s)
      return violation(Violation::kStepIndex, where + " carries index " +
                                                  std::to_string(step.step_index));
    if (step.cycle_index < last_cycle)
      return violation(Violation::kCycleOrder, where + " belongs to cycle " +
                                                   std::to_string(step.cycle_index) +
                                                   " after cycle " + std::to_string(last_cycle));
    last_cycle = step.cycle_index;
    if (step.exp < 0 || step.exp > kMaxExponent)
      return violation(Violation::kWrongLength, where + " names bucket " + std::to_string(step.exp));

    std::uint64_t tokens = 0;
    for (const auto& ref : step.refs) {
      if (ref.length != pow2(step.exp))
        return violation(Violation::kWrongLength,
                         where + " holds a sequence of length " + std::to_string(ref.length) +
                             " in bucket " + std::to_string(step.exp));
      if (!selected.contains(ref))
        return violation(Violation::kUnknownRef, where + " references doc " +
                                                     std::to_string(ref.doc_id) + " offset " +
                                                     std::to_string(ref.offset));
      if (!seen.insert(ref).second)
        return violation(Violation::kDuplicate, where + " repeats doc " +
                                                    std::to_string(ref.doc_id) + " offset " +
                                                    std::to_string(ref.offset));
      tokens += ref.length;
    }
    if (tokens != batch_tokens)
      return violation(Violation::kTokenCount, where + " carries " + std::to_string(tokens) +
                                                   " tokens, expected " +
                                                   std::to_string(batch_tokens));
    step_tokens += tokens;
  }
  if (step_tokens + report.total_dropped_tokens() != selected_tokens)
    return violation(Violation::kAccounting,
                     std::to_string(step_tokens) + " scheduled + " +
                         std::to_string(report.total_dropped_tokens()) + " dropped != " +
                         std::to_string(selected_tokens) + " selected");
  return {};
}

// --- Presets -----------------------------------------------------------------

namespace {

constexpr std::uint64_t kGiga = std::uint64_t{1} << 30;

struct MixtureRow {
  const char* name;
  const char* aliases[2];
  std::uint64_t coeff[8];  // buckets 6..13, in units of 2^30 tokens
};

constexpr MixtureRow kMixtures[] = {
    {"natural", {"", ""}, {3, 6, 10, 17, 21, 17, 13, 9}},
    {"equal", {"", ""}, {12, 12, 12, 12, 12, 12, 12, 12}},
    {"1k-only", {"1k", ""}, {0, 0, 0, 0, 96, 0, 0, 0}},
    {"le2k", {"<=2k", "≤2k"}, {16, 16, 16, 16, 16, 16, 0, 0}},
    {"ge256", {">=256", "≥256"}, {0, 0, 16, 16, 16, 16, 16, 16}},
    {"mid", {"", ""}, {0, 0, 24, 24, 24, 24, 0, 0}},
    {"ge1k", {">=1k", "≥1k"}, {0, 0, 0, 0, 24, 24, 24, 24}},
};

// Odds are anchored at D_8..D_13; buckets outside that range continue the
// same progression.
constexpr int kCurriculumTop = 13;
constexpr int kCurriculumBottom = 8;

}  // namespace

std::vector<std::string> mixture_preset_names() {
  std::vector<std::string> names;
  for (const auto& row : kMixtures) names.emplace_back(row.name);
  return names;
}

MixtureSpec mixture_preset(const std::string& name) {
  const auto key = lower(name);
  for (const auto& row : kMixtures) {
    if (key.empty() || (key != row.name && key != row.aliases[0] && key != row.aliases[1])) continue;
    MixtureSpec spec{row.name, {}};
    for (int k = 0; k < 8; ++k) {
      if (row.coeff[k] != 0) spec.budgets[6 + k] = row.coeff[k] * kGiga;
    }
    return spec;
  }
  fail(ErrorCode::kNotFound, "unknown mixture preset '" + name + "'");
}

std::vector<std::string> curriculum_preset_names() {
  return {"uniform", "grow-linear", "grow-p2", "grow-p100", "shrink-p100"};
}

CurriculumSpec curriculum_preset(const std::string& name, int cycles) {
  const auto key = lower(name);
  CurriculumSpec spec{key, {}, cycles};
  for (int exp = 0; exp <= kMaxExponent; ++exp) {
    const int below_top = kCurriculumTop - exp;
    double o;
    if (key == "uniform") {
      o = 1.0;
    } else if (key == "grow-linear") {
      // 6, 5, ..., 1 over D_8..D_13; never below 1.
      o = std::max(1, below_top + 1);
    } else if (key == "grow-p2") {
      o = std::pow(2.0, below_top);
    } else if (key == "grow-p100") {
      o = std::pow(100.0, below_top);
    } else if (key == "shrink-p100") {
      o = std::pow(100.0, exp - kCurriculumBottom);
    } else {
      fail(ErrorCode::kNotFound, "unknown curriculum preset '" + name + "'");
    }
    spec.odds[exp] = o;
  }
  spec.validate();
  return spec;
}

}  // namespace vsl
