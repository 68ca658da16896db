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

#include "vsl/vsl.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <new>
#include <string>
#include <unordered_set>

#include "vsl/corpus.hpp"
#include "vsl/costmodel.hpp"
#include "vsl/decompose.hpp"
#include "vsl/error.hpp"
#include "vsl/manifest.hpp"
#include "vsl/report.hpp"
#include "vsl/scheduler.hpp"
#include "vsl/stats.hpp"

struct vsl_corpus {
  std::vector<vsl::TokenizedDocument> docs;
  std::unordered_set<vsl::DocId> ids;  // rebuilt lazily when out of sync

  void add(vsl::TokenizedDocument doc) {
    if (ids.size() != docs.size()) {
      ids.clear();
      for (const auto& d : docs) ids.insert(d.doc_id);
    }
    if (!ids.insert(doc.doc_id).second)
      vsl::fail(vsl::ErrorCode::kDuplicateId, "duplicate document id " + std::to_string(doc.doc_id));
    docs.push_back(std::move(doc));
  }
};

struct vsl_buckets {
  vsl::BucketStore store;
};

struct vsl_chunks {
  std::vector<vsl::ChunkedSequence> chunks;
  vsl::ChunkManifestInfo info;
  std::uint64_t dropped_tokens = 0;
};

struct vsl_mixture {
  vsl::MixtureSpec spec;
};

struct vsl_curriculum {
  vsl::CurriculumSpec spec;
};

struct vsl_schedule {
  vsl::ScheduleReport report;
  vsl::ScheduleManifestInfo info;
};

struct vsl_cost_model {
  vsl::StepTimeModel model;
};

namespace {

thread_local std::string g_last_error;

vsl_status to_status(vsl::ErrorCode code) {
  switch (code) {
    case vsl::ErrorCode::kInvalidArgument: return VSL_ERR_INVALID_ARGUMENT;
    case vsl::ErrorCode::kIo: return VSL_ERR_IO;
    case vsl::ErrorCode::kFormat: return VSL_ERR_FORMAT;
    case vsl::ErrorCode::kCorruption: return VSL_ERR_CORRUPTION;
    case vsl::ErrorCode::kParse: return VSL_ERR_PARSE;
    case vsl::ErrorCode::kDuplicateId: return VSL_ERR_DUPLICATE_ID;
    case vsl::ErrorCode::kInsufficientTokens: return VSL_ERR_INSUFFICIENT_TOKENS;
    case vsl::ErrorCode::kNotFound: return VSL_ERR_NOT_FOUND;
    case vsl::ErrorCode::kInvalidSchedule: return VSL_ERR_INVALID_SCHEDULE;
  }
  return VSL_ERR_INTERNAL;
}

template <typename F>
vsl_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return VSL_OK;
  } catch (const vsl::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown exception";
  }
  return VSL_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) vsl::fail(vsl::ErrorCode::kInvalidArgument, what);
}

template <typename Handle, typename... Args>
void emit(Handle** out, Args&&... args) {
  require(out != nullptr, "output handle pointer is null");
  *out = new Handle{std::forward<Args>(args)...};
}

// Runs `write` against stdout for "-", otherwise against a file.
template <typename W>
void with_output(const char* path, W&& write) {
  require(path != nullptr, "output path is null");
  if (std::strcmp(path, "-") == 0) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) vsl::fail(vsl::ErrorCode::kIo, std::string("cannot open ") + path + " for writing");
  write(out);
  out.flush();
  if (!out) vsl::fail(vsl::ErrorCode::kIo, std::string("write failure on ") + path);
}

bool is_file(const char* s) {
  std::error_code ec;
  return std::filesystem::is_regular_file(s, ec);
}

std::string join_names(const std::vector<std::string>& names) {
  std::string joined;
  for (const auto& n : names) joined += n + "\n";
  return joined;
}

}  // namespace

extern "C" {

const char* vsl_last_error(void) { return g_last_error.c_str(); }

const char* vsl_status_name(vsl_status status) {
  switch (status) {
    case VSL_OK: return "ok";
    case VSL_ERR_INTERNAL: return "internal error";
    default: return vsl::error_code_name(static_cast<vsl::ErrorCode>(status));
  }
}

const char* vsl_version(void) { return "1.0.0"; }

// ---- corpus -------------------------------------------------------------------

vsl_status vsl_corpus_create(vsl_corpus** out) {
  return guard([&] { emit(out); });
}

vsl_status vsl_corpus_load(const char* path, vsl_corpus** out) {
  return guard([&] {
    require(path != nullptr, "path is null");
    emit(out, vsl::load_corpus(path), std::unordered_set<vsl::DocId>{});
  });
}

vsl_status vsl_corpus_load_jsonl(const char* path, vsl_corpus** out) {
  return guard([&] {
    require(path != nullptr, "path is null");
    emit(out, vsl::read_jsonl(path), std::unordered_set<vsl::DocId>{});
  });
}

vsl_status vsl_corpus_load_shard(const char* path, vsl_corpus** out) {
  return guard([&] {
    require(path != nullptr, "path is null");
    emit(out, vsl::read_shard(path), std::unordered_set<vsl::DocId>{});
  });
}

void vsl_corpus_free(vsl_corpus* corpus) { delete corpus; }

vsl_status vsl_corpus_add(vsl_corpus* corpus, uint64_t doc_id, const uint32_t* tokens,
                          size_t count) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    require(tokens != nullptr || count == 0, "tokens is null");
    corpus->add({doc_id, std::vector<vsl::Token>(tokens, tokens + count)});
  });
}

vsl_status vsl_corpus_add_text(vsl_corpus* corpus, uint64_t doc_id, const char* utf8) {
  return guard([&] {
    require(corpus != nullptr && utf8 != nullptr, "corpus or text is null");
    corpus->add(vsl::byte_tokenize(utf8, doc_id));
  });
}

vsl_status vsl_corpus_append_eot(vsl_corpus* corpus, uint32_t eot_token) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    for (auto& d : corpus->docs) {
      if (!d.tokens.empty()) d.tokens.push_back(eot_token);
    }
  });
}

size_t vsl_corpus_size(const vsl_corpus* corpus) { return corpus ? corpus->docs.size() : 0; }

uint64_t vsl_corpus_total_tokens(const vsl_corpus* corpus) {
  return corpus ? vsl::total_tokens(corpus->docs) : 0;
}

vsl_status vsl_corpus_get(const vsl_corpus* corpus, size_t index, uint64_t* doc_id,
                          const uint32_t** tokens, size_t* count) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    if (index >= corpus->docs.size())
      vsl::fail(vsl::ErrorCode::kNotFound, "document index " + std::to_string(index) + " out of range");
    const auto& d = corpus->docs[index];
    if (doc_id) *doc_id = d.doc_id;
    if (tokens) *tokens = d.tokens.data();
    if (count) *count = d.tokens.size();
  });
}

vsl_status vsl_corpus_write_shard(const vsl_corpus* corpus, const char* path) {
  return guard([&] {
    require(corpus != nullptr && path != nullptr, "corpus or path is null");
    vsl::write_shard(corpus->docs, path);
  });
}

// ---- decomposition --------------------------------------------------------------

vsl_status vsl_decompose(const vsl_corpus* corpus, int min_exp, int max_exp, vsl_buckets** out) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    emit(out, vsl::decompose_corpus(corpus->docs, min_exp, max_exp));
  });
}

vsl_status vsl_buckets_load_manifest(const char* path, vsl_buckets** out) {
  return guard([&] {
    require(path != nullptr, "path is null");
    emit(out, vsl::read_bucket_manifest(path));
  });
}

vsl_status vsl_buckets_write_manifest(const vsl_buckets* buckets, const char* path) {
  return guard([&] {
    require(buckets != nullptr, "buckets is null");
    with_output(path, [&](std::ostream& os) { vsl::write_bucket_manifest(buckets->store, os); });
  });
}

void vsl_buckets_free(vsl_buckets* buckets) { delete buckets; }

int vsl_buckets_min_exp(const vsl_buckets* b) { return b ? b->store.min_exp() : -1; }
int vsl_buckets_max_exp(const vsl_buckets* b) { return b ? b->store.max_exp() : -1; }
uint64_t vsl_buckets_dropped_tokens(const vsl_buckets* b) { return b ? b->store.dropped_tokens() : 0; }
size_t vsl_buckets_count(const vsl_buckets* b, int exp) { return b ? b->store.bucket(exp).size() : 0; }
uint64_t vsl_buckets_total_tokens(const vsl_buckets* b) { return b ? b->store.total_tokens() : 0; }

vsl_status vsl_buckets_record(const vsl_buckets* buckets, int exp, size_t index,
                              uint64_t* doc_id, uint64_t* offset, uint64_t* length) {
  return guard([&] {
    require(buckets != nullptr, "buckets is null");
    const auto bucket = buckets->store.bucket(exp);
    if (index >= bucket.size())
      vsl::fail(vsl::ErrorCode::kNotFound, "record index out of range");
    if (doc_id) *doc_id = bucket[index].doc_id;
    if (offset) *offset = bucket[index].offset;
    if (length) *length = bucket[index].length;
  });
}

vsl_status vsl_buckets_chunk_transform(const vsl_buckets* buckets, int from_exp, int to_exp,
                                       uint64_t seed, vsl_buckets** out) {
  return guard([&] {
    require(buckets != nullptr, "buckets is null");
    auto records = vsl::chunk_transform(buckets->store.bucket(from_exp), to_exp, seed);
    vsl::BucketStore store(to_exp, to_exp);
    for (const auto& r : records) store.add(r);
    emit(out, std::move(store));
  });
}

// ---- chunks -----------------------------------------------------------------------

vsl_status vsl_concat_and_chunk(const vsl_corpus* corpus, uint64_t target_len,
                                uint32_t eot_token, uint64_t seed, vsl_chunks** out) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    auto chunks = vsl::concat_and_chunk(corpus->docs, target_len, seed);
    std::uint64_t kept = target_len * chunks.size();
    std::uint64_t all = 0;
    for (const auto& d : corpus->docs) all += d.tokens.empty() ? 0 : d.source_len() + 1;
    vsl::ChunkManifestInfo info{"concat_chunk", target_len, eot_token, std::nullopt, seed};
    emit(out, std::move(chunks), info, all - kept);
  });
}

vsl_status vsl_best_fit_pack(const vsl_corpus* corpus, uint64_t context_size,
                             uint32_t pad_token, vsl_chunks** out) {
  return guard([&] {
    require(corpus != nullptr, "corpus is null");
    auto pieces = vsl::prechunk(corpus->docs, context_size);
    auto bins = vsl::best_fit_pack(pieces, {context_size, pad_token});
    vsl::ChunkManifestInfo info{"best_fit", context_size, std::nullopt, pad_token, 0};
    emit(out, std::move(bins), info, std::uint64_t{0});
  });
}

vsl_status vsl_buckets_concat_transform(const vsl_buckets* buckets, int from_exp, int to_exp,
                                        uint64_t seed, vsl_chunks** out) {
  return guard([&] {
    require(buckets != nullptr, "buckets is null");
    auto result = vsl::concat_transform(buckets->store.bucket(from_exp), to_exp, seed);
    require(to_exp >= 0 && to_exp <= vsl::kMaxExponent, "target exponent out of range");
    vsl::ChunkManifestInfo info{"concat_transform", std::uint64_t{1} << to_exp, std::nullopt,
                                std::nullopt, seed};
    emit(out, std::move(result.sequences), info, result.dropped_tokens);
  });
}

vsl_status vsl_chunks_write_manifest(const vsl_chunks* chunks, const char* path) {
  return guard([&] {
    require(chunks != nullptr, "chunks is null");
    with_output(path, [&](std::ostream& os) {
      vsl::write_chunk_manifest(chunks->chunks, chunks->info, os);
    });
  });
}

void vsl_chunks_free(vsl_chunks* chunks) { delete chunks; }

size_t vsl_chunks_count(const vsl_chunks* c) { return c ? c->chunks.size() : 0; }

uint64_t vsl_chunks_pad_tokens(const vsl_chunks* c) {
  std::uint64_t total = 0;
  if (c) {
    for (const auto& ch : c->chunks) total += ch.pad_count;
  }
  return total;
}

uint64_t vsl_chunks_dropped_tokens(const vsl_chunks* c) { return c ? c->dropped_tokens : 0; }

size_t vsl_chunks_segment_count(const vsl_chunks* c, size_t chunk) {
  return c && chunk < c->chunks.size() ? c->chunks[chunk].segments.size() : 0;
}

vsl_status vsl_chunks_segment(const vsl_chunks* c, size_t chunk, size_t segment,
                              uint64_t* doc_id, uint64_t* doc_offset, uint64_t* start_in_chunk,
                              uint64_t* length) {
  return guard([&] {
    require(c != nullptr, "chunks is null");
    if (chunk >= c->chunks.size() || segment >= c->chunks[chunk].segments.size())
      vsl::fail(vsl::ErrorCode::kNotFound, "segment index out of range");
    const auto& s = c->chunks[chunk].segments[segment];
    if (doc_id) *doc_id = s.doc_id;
    if (doc_offset) *doc_offset = s.doc_offset;
    if (start_in_chunk) *start_in_chunk = s.start_in_chunk;
    if (length) *length = s.length;
  });
}

// ---- mixtures / curricula ----------------------------------------------------------

vsl_status vsl_mixture_open(const char* name_or_path, vsl_mixture** out) {
  return guard([&] {
    require(name_or_path != nullptr, "mixture name is null");
    if (is_file(name_or_path)) {
      emit(out, vsl::read_mixture_json(name_or_path));
    } else {
      emit(out, vsl::mixture_preset(name_or_path));
    }
  });
}

vsl_status vsl_mixture_create(const char* name, vsl_mixture** out) {
  return guard([&] { emit(out, vsl::MixtureSpec{name ? name : "", {}}); });
}

vsl_status vsl_mixture_set_budget(vsl_mixture* mixture, int exp, uint64_t tokens) {
  return guard([&] {
    require(mixture != nullptr, "mixture is null");
    auto spec = mixture->spec;
    spec.budgets[exp] = tokens;
    spec.validate();
    mixture->spec = std::move(spec);
  });
}

vsl_status vsl_mixture_scale(vsl_mixture* mixture, int scale_log2) {
  return guard([&] {
    require(mixture != nullptr, "mixture is null");
    require(scale_log2 > -64 && scale_log2 < 64, "scale out of range");
    auto spec = mixture->spec;
    for (auto& [exp, n] : spec.budgets) {
      if (scale_log2 >= 0) {
        require((n << scale_log2) >> scale_log2 == n, "scaled budget overflows");
        n <<= scale_log2;
      } else {
        const int shift = -scale_log2;
        if (n % (std::uint64_t{1} << shift) != 0)
          vsl::fail(vsl::ErrorCode::kInvalidArgument,
                    "budget for bucket " + std::to_string(exp) + " is not divisible by 2^" +
                        std::to_string(shift));
        n >>= shift;
      }
    }
    spec.validate();
    mixture->spec = std::move(spec);
  });
}

uint64_t vsl_mixture_budget(const vsl_mixture* mixture, int exp) {
  if (!mixture) return 0;
  auto it = mixture->spec.budgets.find(exp);
  return it == mixture->spec.budgets.end() ? 0 : it->second;
}

void vsl_mixture_free(vsl_mixture* mixture) { delete mixture; }

const char* vsl_mixture_presets(void) {
  static const std::string names = join_names(vsl::mixture_preset_names());
  return names.c_str();
}

vsl_status vsl_curriculum_open(const char* name_or_path, vsl_curriculum** out) {
  return guard([&] {
    require(name_or_path != nullptr, "curriculum name is null");
    if (is_file(name_or_path)) {
      emit(out, vsl::read_curriculum_json(name_or_path));
    } else {
      emit(out, vsl::curriculum_preset(name_or_path));
    }
  });
}

vsl_status vsl_curriculum_create(const char* name, int cycles, vsl_curriculum** out) {
  return guard([&] {
    vsl::CurriculumSpec spec{name ? name : "", {}, cycles};
    spec.validate();
    emit(out, std::move(spec));
  });
}

vsl_status vsl_curriculum_set_odds(vsl_curriculum* curriculum, int exp, double odds) {
  return guard([&] {
    require(curriculum != nullptr, "curriculum is null");
    auto spec = curriculum->spec;
    spec.odds[exp] = odds;
    spec.validate();
    curriculum->spec = std::move(spec);
  });
}

vsl_status vsl_curriculum_set_cycles(vsl_curriculum* curriculum, int cycles) {
  return guard([&] {
    require(curriculum != nullptr, "curriculum is null");
    require(cycles >= 1, "cycles must be >= 1");
    curriculum->spec.cycles = cycles;
  });
}

int vsl_curriculum_cycles(const vsl_curriculum* c) { return c ? c->spec.cycles : 0; }

void vsl_curriculum_free(vsl_curriculum* curriculum) { delete curriculum; }

const char* vsl_curriculum_presets(void) {
  static const std::string names = join_names(vsl::curriculum_preset_names());
  return names.c_str();
}

// ---- schedules -------------------------------------------------------------------------

vsl_status vsl_schedule_build(const vsl_buckets* buckets, const vsl_mixture* mixture,
                              const vsl_curriculum* curriculum, uint64_t batch_tokens,
                              uint64_t seed, vsl_schedule** out) {
  return guard([&] {
    require(buckets && mixture && curriculum, "buckets, mixture or curriculum is null");
    const auto selection = vsl::build_mixture(buckets->store, mixture->spec, seed);
    auto report = vsl::make_schedule(selection, curriculum->spec, batch_tokens, seed);
    const auto verdict = vsl::validate_schedule(report, selection, batch_tokens);
    if (!verdict.ok()) vsl::fail(vsl::ErrorCode::kInvalidSchedule, verdict.message);

    // Record only the odds that applied to the selected buckets.
    vsl::ScheduleManifestInfo info{mixture->spec.name, curriculum->spec.name, {},
                                   curriculum->spec.cycles};
    for (const auto& [exp, records] : selection) info.odds[exp] = curriculum->spec.odds.at(exp);
    emit(out, std::move(report), std::move(info));
  });
}

vsl_status vsl_schedule_write_manifest(const vsl_schedule* schedule, const char* path) {
  return guard([&] {
    require(schedule != nullptr, "schedule is null");
    with_output(path, [&](std::ostream& os) {
      vsl::write_schedule_manifest(schedule->report, schedule->info, os);
    });
  });
}

void vsl_schedule_free(vsl_schedule* schedule) { delete schedule; }

size_t vsl_schedule_step_count(const vsl_schedule* s) { return s ? s->report.steps.size() : 0; }

uint64_t vsl_schedule_dropped_tokens(const vsl_schedule* s) {
  return s ? s->report.total_dropped_tokens() : 0;
}

vsl_status vsl_schedule_step(const vsl_schedule* schedule, size_t step, int* cycle, int* exp,
                             size_t* ref_count) {
  return guard([&] {
    require(schedule != nullptr, "schedule is null");
    if (step >= schedule->report.steps.size())
      vsl::fail(vsl::ErrorCode::kNotFound, "step index out of range");
    const auto& s = schedule->report.steps[step];
    if (cycle) *cycle = s.cycle_index;
    if (exp) *exp = s.exp;
    if (ref_count) *ref_count = s.refs.size();
  });
}

// ---- statistics --------------------------------------------------------------------------

namespace {

void copy_stats(const vsl::LengthStats& s, vsl_length_stats* out) {
  require(out != nullptr, "output is null");
  *out = {s.avg_seq_len, s.avg_ctx_len, s.total_tokens, s.total_sequences};
}

}  // namespace

vsl_status vsl_avg_lengths(const uint64_t* lengths, size_t count, vsl_length_stats* out) {
  return guard([&] {
    require(lengths != nullptr || count == 0, "lengths is null");
    copy_stats(vsl::avg_lengths(std::span<const std::uint64_t>(lengths, count)), out);
  });
}

vsl_status vsl_mixture_stats(const vsl_mixture* mixture, vsl_length_stats* out) {
  return guard([&] {
    require(mixture != nullptr, "mixture is null");
    copy_stats(vsl::mixture_avg_lengths(mixture->spec), out);
  });
}

vsl_status vsl_manifest_stats(const char* manifest_path, const char* json_path,
                              const char* csv_path, vsl_length_stats* out) {
  return guard([&] {
    require(manifest_path != nullptr, "manifest path is null");
    const auto report = vsl::manifest_stats(vsl::read_manifest(manifest_path));
    if (json_path) with_output(json_path, [&](std::ostream& os) { vsl::write_stats_json(report, os); });
    if (csv_path) with_output(csv_path, [&](std::ostream& os) { vsl::write_context_csv(report.context, os); });
    if (out) copy_stats(report.lengths, out);
  });
}

// ---- cost model ----------------------------------------------------------------------------

vsl_status vsl_cost_model_create(double alpha, double beta, uint64_t b_ref, vsl_cost_model** out) {
  return guard([&] {
    require(alpha >= 0.0 && beta >= 0.0, "alpha and beta must be non-negative");
    vsl::StepTimeModel m;
    m.alpha = alpha;
    m.beta = beta;
    m.b_ref = b_ref;
    emit(out, std::move(m));
  });
}

vsl_status vsl_cost_model_fit(const double* seq_len, const double* step_time_ms,
                              const uint64_t* batch_tokens, size_t count, vsl_cost_model** out) {
  return guard([&] {
    require(count == 0 || (seq_len && step_time_ms && batch_tokens), "measurement arrays are null");
    std::vector<vsl::Measurement> ms;
    for (size_t i = 0; i < count; ++i) ms.push_back({seq_len[i], step_time_ms[i], batch_tokens[i]});
    emit(out, vsl::fit(ms));
  });
}

vsl_status vsl_cost_model_fit_csv(const char* path, vsl_cost_model** out) {
  return guard([&] {
    require(path != nullptr, "path is null");
    emit(out, vsl::fit(vsl::read_measurements_csv(path)));
  });
}

vsl_status vsl_cost_model_load(const char* path, vsl_cost_model** out) {
  return guard([&] {
    require(path != nullptr, "path is null");
    emit(out, vsl::load_model(path));
  });
}

vsl_status vsl_cost_model_save(const vsl_cost_model* model, const char* path) {
  return guard([&] {
    require(model != nullptr && path != nullptr, "model or path is null");
    vsl::save_model(model->model, path);
  });
}

void vsl_cost_model_free(vsl_cost_model* model) { delete model; }

double vsl_cost_model_alpha(const vsl_cost_model* m) { return m ? m->model.alpha : 0.0; }
double vsl_cost_model_beta(const vsl_cost_model* m) { return m ? m->model.beta : 0.0; }
uint64_t vsl_cost_model_b_ref(const vsl_cost_model* m) { return m ? m->model.b_ref : 0; }
int vsl_cost_model_negative_beta(const vsl_cost_model* m) { return m && m->model.negative_beta; }

vsl_status vsl_expected_step_time(const vsl_cost_model* model, const vsl_mixture* mixture,
                                  double* out_ms) {
  return guard([&] {
    require(model && mixture && out_ms, "null argument");
    *out_ms = vsl::expected_step_time(model->model, mixture->spec);
  });
}

vsl_status vsl_speedup(const vsl_cost_model* model, const vsl_mixture* mixture,
                       double baseline_len, double* out_ratio) {
  return guard([&] {
    require(model && mixture && out_ratio, "null argument");
    *out_ratio = vsl::speedup(model->model, mixture->spec, baseline_len);
  });
}

}  // extern "C"
