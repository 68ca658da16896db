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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "vsl/corpus.hpp"
#include "vsl/costmodel.hpp"
#include "vsl/decompose.hpp"
#include "vsl/error.hpp"
#include "vsl/manifest.hpp"
#include "vsl/prng.hpp"
#include "vsl/scheduler.hpp"
#include "vsl/stats.hpp"

using namespace vsl;

namespace {

// Failure detail from a criterion; empty means pass.
using Detail = std::string;

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::uint64_t uniform(SplitMix64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng.next() % (hi - lo + 1);
}

struct ExpectedRow {
  const char* preset;
  double avg_seq;
  double avg_ctx;
  double step_ms;
};

// Expected averages and step times per mixture, in the order Natural, Equal, 1k-only, <=2k, >=256,
// Mid, >=1k.
const ExpectedRow kExpected[] = {
    {"natural", 482, 1018, 244}, {"equal", 257, 1020, 244}, {"1k-only", 1024, 512, 234},
    {"le2k", 195, 336, 231},     {"ge256", 780, 1344, 250}, {"mid", 546, 480, 233},
    {"ge1k", 2185, 1920, 263},
};

// --- 1 -------------------------------------------------------------------------

Detail table2_analytic() {
  for (const auto& row : kExpected) {
    const auto s = mixture_avg_lengths(mixture_preset(row.preset));
    if (std::abs(s.avg_seq_len - row.avg_seq) > 1.0 || std::abs(s.avg_ctx_len - row.avg_ctx) > 1.0)
      return std::string(row.preset) + fmt(": got (%.2f, %.2f)", s.avg_seq_len, s.avg_ctx_len);
  }
  return {};
}

// --- 2 -------------------------------------------------------------------------

Detail table2_empirical() {
  // Budgets are the preset coefficients times 2^13 tokens, so each bucket
  // holds a whole number of b = 2^13 batches.
  constexpr int kScaleShift = 30 - 13;
  constexpr std::uint64_t kBatch = std::uint64_t{1} << 13;

  BucketStore store(6, 13);
  SplitMix64 lengths(2024);
  for (DocId id = 0; id < 8000; ++id) {
    for (const auto& r : decompose_length(id, uniform(lengths, 0, 40000), 6, 13).records) store.add(r);
  }

  for (const auto& row : kExpected) {
    auto spec = mixture_preset(row.preset);
    for (auto& [exp, n] : spec.budgets) n >>= kScaleShift;
    const auto analytic = mixture_avg_lengths(spec);

    for (const auto& [cur, cycles] : std::vector<std::pair<std::string, int>>{{"uniform", 1}, {"grow-p2", 8}}) {
      const auto selection = build_mixture(store, spec, 7);
      const auto report = make_schedule(selection, curriculum_preset(cur, cycles), kBatch, 7);
      const auto verdict = validate_schedule(report, selection, kBatch);
      if (!verdict.ok()) return std::string(row.preset) + ": " + verdict.message;

      LengthAccumulator acc;
      for (const auto& step : report.steps)
        for (const auto& r : step.refs) acc.add(r.length);
      for (const auto& [exp, dropped] : report.dropped_tail_tokens)
        if (dropped > 0) acc.add(std::uint64_t{1} << exp, dropped >> exp);
      const auto got = acc.finish();
      if (std::abs(got.avg_seq_len - analytic.avg_seq_len) > 1.0 ||
          std::abs(got.avg_ctx_len - analytic.avg_ctx_len) > 1.0 ||
          std::abs(got.avg_seq_len - row.avg_seq) > 1.0 || std::abs(got.avg_ctx_len - row.avg_ctx) > 1.0)
        return std::string(row.preset) + "/" + cur + fmt(": got (%.2f, %.2f)", got.avg_seq_len, got.avg_ctx_len);
    }
  }
  return {};
}

// --- 3 -------------------------------------------------------------------------

Detail step_time_model() {
  const std::vector<Measurement> m{{2048, 243, 1 << 19}, {8192, 304, 1 << 19}};
  const auto model = fit(m);
  if (std::abs(model.beta - 61.0 / 6144.0) > 1e-12) return fmt("beta %.9f alpha %.4f", model.beta, model.alpha);
  for (const auto& row : kExpected) {
    const double ms = expected_step_time(model, mixture_preset(row.preset));
    if (std::abs(ms - row.step_ms) > 3.0)
      return std::string(row.preset) + fmt(": predicted %.2f vs expected %.0f", ms, row.step_ms);
  }
  return {};
}

// --- 4 -------------------------------------------------------------------------

Detail decomposition_conservation() {
  SplitMix64 rng(4);
  BucketBuilder builder(6, 13);
  std::uint64_t source_tokens = 0;
  std::uint64_t record_tokens = 0;
  std::vector<Token> tokens;
  for (DocId id = 0; id < 10000; ++id) {
    TokenizedDocument doc{id, {}};
    doc.tokens.resize(uniform(rng, 0, 40000));
    for (auto& t : doc.tokens) t = static_cast<Token>(rng.next());
    source_tokens += doc.source_len();

    const auto& dec = builder.add(doc);
    std::uint64_t doc_sum = dec.dropped_tokens;
    for (const auto& r : dec.records) {
      if (!std::has_single_bit(r.length) || r.length < 64 || r.length > 8192)
        return "record length " + std::to_string(r.length) + " out of range";
      if (r.doc_id != id || r.offset + r.length > doc.source_len())
        return "record out of bounds in document " + std::to_string(id);
      doc_sum += r.length;
    }
    if (doc_sum != doc.source_len()) return "document " + std::to_string(id) + " not conserved";

    // Slices materialize to the same tokens as the source range.
    const std::vector<TokenizedDocument> one{doc};
    const DocumentIndex index(one);
    for (const auto& r : dec.records) {
      tokens = materialize(r, index);
      if (!std::equal(tokens.begin(), tokens.end(), doc.tokens.begin() + r.offset))
        return "slice mismatch in document " + std::to_string(id);
    }
  }
  const auto store = std::move(builder).finish();
  for (int exp : store.exponents())
    for (const auto& r : store.bucket(exp)) record_tokens += r.length;
  if (record_tokens + store.dropped_tokens() != source_tokens)
    return "records " + std::to_string(record_tokens) + " + dropped " + std::to_string(store.dropped_tokens()) +
           " != " + std::to_string(source_tokens);
  return {};
}

// --- 5 -------------------------------------------------------------------------

Detail binary_oracle() {
  for (std::uint64_t l = 0; l < (std::uint64_t{1} << 15); ++l) {
    const auto dec = decompose_length(0, l, 0, 13);
    std::vector<std::uint64_t> got;
    std::uint64_t sum = 0;
    for (const auto& r : dec.records) {
      got.push_back(r.length);
      sum += r.length;
    }
    if (sum != l || dec.dropped_tokens != 0 || got != oracle::greedy_power_digits(l, 13))
      return "mismatch at l = " + std::to_string(l);
  }
  return {};
}

// --- 6 -------------------------------------------------------------------------

Detail bfd_oracle() {
  constexpr std::uint64_t n = 8;
  std::vector<std::vector<std::uint64_t>> multisets{{}};
  for (std::size_t size = 1; size <= 6; ++size) {
    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& m : multisets) {
      if (m.size() != size - 1) continue;
      for (std::uint64_t v = m.empty() ? 1 : m.back(); v <= n; ++v) {
        next.push_back(m);
        next.back().push_back(v);
      }
    }
    multisets.insert(multisets.end(), next.begin(), next.end());
  }
  if (multisets.size() != 3003) return "enumerated " + std::to_string(multisets.size()) + " multisets";

  for (const auto& ascending : multisets) {
    for (const auto& lengths : {ascending, std::vector<std::uint64_t>(ascending.rbegin(), ascending.rend())}) {
      std::vector<SequenceRecord> chunks;
      for (std::size_t i = 0; i < lengths.size(); ++i) chunks.push_back({i, 0, lengths[i]});
      const auto bins = best_fit_pack(chunks, {n, 0});

      std::vector<std::size_t> placed(lengths.size());
      for (std::size_t b = 0; b < bins.size(); ++b) {
        std::uint64_t used = 0;
        for (const auto& s : bins[b].segments) {
          used += s.length;
          placed[s.doc_id] = b;
        }
        if (used > n || used + bins[b].pad_count != n || !segments_tile(bins[b])) return "bin overflow";
      }
      std::string label;
      for (auto l : lengths) label += std::to_string(l) + " ";
      if (bins.size() < oracle::optimal_bin_count(lengths, n)) return "fewer bins than optimal: " + label;
      if (placed != oracle::literal_bfd(lengths, n)) return "diverges from reference: " + label;
    }
  }
  return {};
}

// --- 7 -------------------------------------------------------------------------

std::string serialize(const ScheduleReport& report) {
  std::ostringstream out;
  write_schedule_manifest(report, ScheduleManifestInfo{"m", "c", {}, 1}, out);
  return out.str();
}

Detail scheduler_invariants() {
  SplitMix64 rng(77);
  for (int config = 0; config < 1000; ++config) {
    BucketStore store(0, 8);
    MixtureSpec mix{"random", {}};
    CurriculumSpec cur{"random", {}, static_cast<int>(uniform(rng, 1, 4))};
    int max_exp = 0;
    DocId next_id = 0;
    for (int exp = 0; exp <= 6; ++exp) {
      if (rng.next() % 2) continue;
      const auto records = uniform(rng, 0, 60);
      for (std::uint64_t k = 0; k < records; ++k) store.add({next_id++, 0, std::uint64_t{1} << exp});
      const auto take = records == 0 ? 0 : uniform(rng, 0, records);
      mix.budgets[exp] = take << exp;
      cur.odds[exp] = static_cast<double>(uniform(rng, 1, 100));
      if (take > 0) max_exp = std::max(max_exp, exp);
    }
    const std::uint64_t b = (std::uint64_t{1} << max_exp) * uniform(rng, 1, 3);
    const std::uint64_t seed = rng.next();

    const auto selection = build_mixture(store, mix, seed);
    const auto report = make_schedule(selection, cur, b, seed);
    const auto where = "config " + std::to_string(config) + ": ";

    if (!validate_schedule(report, selection, b).ok()) return where + validate_schedule(report, selection, b).message;

    std::set<SequenceRecord> seen;
    std::uint64_t scheduled = 0;
    int last_cycle = 0;
    std::map<int, std::vector<std::vector<SequenceRecord>>> drawn;  // exp -> cycle -> refs
    for (std::size_t k = 0; k < report.steps.size(); ++k) {
      const auto& step = report.steps[k];
      std::uint64_t tokens = 0;
      for (const auto& r : step.refs) {
        if (r.length != (std::uint64_t{1} << step.exp)) return where + "wrong length";
        if (!seen.insert(r).second) return where + "repeated sequence";
        tokens += r.length;
      }
      if (tokens != b) return where + "step carries " + std::to_string(tokens) + " tokens";
      if (step.cycle_index < last_cycle) return where + "cycle order";
      last_cycle = step.cycle_index;
      auto& per_cycle = drawn[step.exp];
      per_cycle.resize(cur.cycles);
      per_cycle[step.cycle_index].insert(per_cycle[step.cycle_index].end(), step.refs.begin(), step.refs.end());
      scheduled += tokens;
    }
    if (scheduled + report.total_dropped_tokens() != mix.total_tokens()) return where + "token accounting";

    // Cycle j of bucket i draws from its own contiguous slice of the selection.
    for (const auto& [exp, picked] : selection) {
      const std::uint64_t per_batch = b >> exp;
      const std::uint64_t per_cycle = picked.size() / per_batch / cur.cycles;
      auto cycles = drawn[exp];
      cycles.resize(cur.cycles);
      for (int j = 0; j < cur.cycles; ++j) {
        const auto start = picked.begin() + static_cast<std::ptrdiff_t>(j * per_cycle * per_batch);
        if (!std::equal(cycles[j].begin(), cycles[j].end(), start)) return where + "subset discipline";
      }
    }

    const auto again = make_schedule(build_mixture(store, mix, seed), cur, b, seed);
    if (serialize(report) != serialize(again)) return where + "not deterministic";
  }

  // Two-bucket sampling frequency over 10,000 draws.
  constexpr std::uint64_t kDraws = 10000;
  BucketStore store(0, 1);
  for (DocId k = 0; k < 2 * kDraws; ++k) store.add({k, 0, 1});
  for (DocId k = 0; k < kDraws; ++k) store.add({2 * kDraws + k, 0, 2});
  const MixtureSpec mix{"two", {{0, 2 * kDraws}, {1, 2 * kDraws}}};
  auto first_bucket_z = [&](double p, double q, std::uint64_t seed) {
    const auto selection = build_mixture(store, mix, seed);
    const auto report = make_schedule(selection, CurriculumSpec{"two", {{0, p}, {1, q}}, 1}, 2, seed);
    std::uint64_t first = 0;
    for (std::uint64_t k = 0; k < kDraws; ++k) first += report.steps[k].exp == 0;
    const double expected = p / (p + q);
    return (static_cast<double>(first) / kDraws - expected) / std::sqrt(expected * (1 - expected) / kDraws);
  };
  const std::pair<double, double> ratios[] = {{1, 1}, {1, 3}, {2, 1}, {32, 16}, {1, 9}};
  std::uint64_t seed = 1000;
  for (const auto& [p, q] : ratios) {
    const double z = first_bucket_z(p, q, seed++);
    if (std::abs(z) > 3) return fmt("odds %.0f:%.0f", p, q) + ": z = " + std::to_string(z);
  }

  // Across 200 seeds the z-scores should look standard normal.
  double sum = 0, sum_sq = 0;
  constexpr int kSeeds = 200;
  for (int s = 0; s < kSeeds; ++s) {
    const double z = first_bucket_z(1, 1, 5000 + s);
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / kSeeds;
  const double var = sum_sq / kSeeds - mean * mean;
  if (std::abs(mean) > 4 / std::sqrt(kSeeds) || var < 0.7 || var > 1.4)
    return fmt("z-scores over seeds: mean %.3f variance %.3f", mean, var);
  return {};
}

// --- 8 -------------------------------------------------------------------------

Detail context_identity() {
  SplitMix64 rng(8);
  for (int set = 0; set < 500; ++set) {
    std::vector<ChunkedSequence> chunks;
    std::vector<std::uint64_t> segment_lengths;
    for (auto c = uniform(rng, 1, 20); c > 0; --c) {
      ChunkedSequence chunk;
      for (auto s = uniform(rng, 1, 6); s > 0; --s) {
        const auto len = uniform(rng, 1, 2000);
        const bool reserved = rng.next() % 5 == 0;
        chunk.segments.push_back({reserved ? kReservedDocId : s, 0, chunk.target_len, len});
        chunk.target_len += len;
        if (!reserved) segment_lengths.push_back(len);
      }
      chunk.pad_count = uniform(rng, 0, 3);
      chunk.target_len += chunk.pad_count;
      chunks.push_back(std::move(chunk));
    }
    if (segment_lengths.empty()) continue;
    const double mean = context_distribution(chunks).mean();
    const double expected = avg_lengths(segment_lengths).avg_ctx_len;
    if (std::abs(mean - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      return "set " + std::to_string(set) + fmt(": %.12f vs %.12f", mean, expected);
  }
  return {};
}

// --- 9 -------------------------------------------------------------------------

Detail shard_roundtrip() {
  const auto dir = std::filesystem::temp_directory_path() / ("vsl_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / "c.shard";
  struct Cleanup {
    std::filesystem::path p;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove_all(p, ec);
    }
  } cleanup{dir};

  SplitMix64 rng(9);
  std::vector<TokenizedDocument> docs;
  for (int corpus = 0; corpus < 1000; ++corpus) {
    docs.assign(uniform(rng, 0, 20), {});
    std::set<DocId> ids;
    for (auto& d : docs) {
      do d.doc_id = rng.next(); while (!ids.insert(d.doc_id).second);
      d.tokens.resize(uniform(rng, 0, 300));
      for (auto& t : d.tokens) t = static_cast<Token>(rng.next());
    }
    write_shard(docs, path);
    if (read_shard(path) != docs) return "corpus " + std::to_string(corpus) + " differs";
  }

  auto expect = [&](ErrorCode code, const std::string& bytes, const char* what) -> Detail {
    {
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      out << bytes;
    }
    try {
      read_shard(path);
    } catch (const Error& e) {
      if (e.code() == code) return {};
      return std::string(what) + ": raised " + error_code_name(e.code());
    }
    return std::string(what) + ": no error";
  };

  write_shard(docs, path);
  std::ifstream in(path, std::ios::binary);
  const std::string good{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  if (auto d = expect(ErrorCode::kFormat, bad_magic, "corrupted magic"); !d.empty()) return d;
  if (auto d = expect(ErrorCode::kCorruption, good.substr(0, good.size() - 1), "truncated payload"); !d.empty()) return d;
  if (auto d = expect(ErrorCode::kCorruption, good.substr(0, 12), "truncated header"); !d.empty()) return d;
  return {};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Detail()>> criteria[] = {
      {"mixture statistics, analytic", table2_analytic},
      {"mixture statistics, empirical schedule", table2_empirical},
      {"step-time model", step_time_model},
      {"decomposition conservation", decomposition_conservation},
      {"binary-decomposition oracle", binary_oracle},
      {"best-fit-decreasing oracle", bfd_oracle},
      {"scheduler invariants", scheduler_invariants},
      {"context-distribution identity", context_identity},
      {"shard roundtrip", shard_roundtrip},
  };
  int failures = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    const auto start = std::chrono::steady_clock::now();
    Detail detail;
    try {
      detail = run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (detail.empty()) {
      std::printf("PASS  criterion %d: %s (%.0f ms)\n", number, name, ms);
    } else {
      ++failures;
      std::printf("FAIL  criterion %d: %s (%.0f ms): %s\n", number, name, ms, detail.c_str());
    }
  }
  std::printf("%d/%d criteria passed\n", number - failures, number);
  return failures == 0 ? 0 : 1;
}
