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

/*
 * C interface to the vsl library: corpus ingestion, dataset decomposition,
 * baseline chunking and packing, variable-sequence-length schedules, length
 * statistics and the step-time cost model.
 *
 * Every fallible call returns a vsl_status. On failure the thread-local
 * message from vsl_last_error() describes the problem; outputs are left
 * untouched. Handles are opaque and released with their *_free function;
 * passing NULL to a *_free function is a no-op.
 *
 * Paths may be "-" wherever a report is written, meaning stdout.
 */
#ifndef VSL_VSL_H_
#define VSL_VSL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(VSL_BUILDING_LIBRARY)
#    define VSL_API __declspec(dllexport)
#  else
#    define VSL_API __declspec(dllimport)
#  endif
#else
#  define VSL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vsl_status {
  VSL_OK = 0,
  VSL_ERR_INVALID_ARGUMENT = 1,
  VSL_ERR_IO = 2,
  VSL_ERR_FORMAT = 3,
  VSL_ERR_CORRUPTION = 4,
  VSL_ERR_PARSE = 5,
  VSL_ERR_DUPLICATE_ID = 6,
  VSL_ERR_INSUFFICIENT_TOKENS = 7,
  VSL_ERR_NOT_FOUND = 8,
  VSL_ERR_INVALID_SCHEDULE = 9,
  VSL_ERR_INTERNAL = 100
} vsl_status;

VSL_API const char* vsl_last_error(void);
VSL_API const char* vsl_status_name(vsl_status status);
VSL_API const char* vsl_version(void);

/* Reserved document id marking EOT and pad segments. */
#define VSL_RESERVED_DOC_ID UINT64_MAX

/* ---- corpus ------------------------------------------------------------ */

typedef struct vsl_corpus vsl_corpus;

VSL_API vsl_status vsl_corpus_create(vsl_corpus** out);
/* Reads a shard or a JSONL file, chosen by the leading magic bytes. */
VSL_API vsl_status vsl_corpus_load(const char* path, vsl_corpus** out);
VSL_API vsl_status vsl_corpus_load_jsonl(const char* path, vsl_corpus** out);
VSL_API vsl_status vsl_corpus_load_shard(const char* path, vsl_corpus** out);
VSL_API void vsl_corpus_free(vsl_corpus* corpus);

VSL_API vsl_status vsl_corpus_add(vsl_corpus* corpus, uint64_t doc_id, const uint32_t* tokens,
                                  size_t count);
VSL_API vsl_status vsl_corpus_add_text(vsl_corpus* corpus, uint64_t doc_id, const char* utf8);
/* Appends one eot token to every non-empty document. */
VSL_API vsl_status vsl_corpus_append_eot(vsl_corpus* corpus, uint32_t eot_token);

VSL_API size_t vsl_corpus_size(const vsl_corpus* corpus);
VSL_API uint64_t vsl_corpus_total_tokens(const vsl_corpus* corpus);
/* Borrowed view of document `index`; valid until the corpus is modified. */
VSL_API vsl_status vsl_corpus_get(const vsl_corpus* corpus, size_t index, uint64_t* doc_id,
                                  const uint32_t** tokens, size_t* count);

VSL_API vsl_status vsl_corpus_write_shard(const vsl_corpus* corpus, const char* path);

/* ---- dataset decomposition ---------------------------------------------- */

typedef struct vsl_buckets vsl_buckets;

VSL_API vsl_status vsl_decompose(const vsl_corpus* corpus, int min_exp, int max_exp,
                                 vsl_buckets** out);
VSL_API vsl_status vsl_buckets_load_manifest(const char* path, vsl_buckets** out);
VSL_API vsl_status vsl_buckets_write_manifest(const vsl_buckets* buckets, const char* path);
VSL_API void vsl_buckets_free(vsl_buckets* buckets);

VSL_API int vsl_buckets_min_exp(const vsl_buckets* buckets);
VSL_API int vsl_buckets_max_exp(const vsl_buckets* buckets);
VSL_API uint64_t vsl_buckets_dropped_tokens(const vsl_buckets* buckets);
VSL_API size_t vsl_buckets_count(const vsl_buckets* buckets, int exp);
VSL_API uint64_t vsl_buckets_total_tokens(const vsl_buckets* buckets);
VSL_API vsl_status vsl_buckets_record(const vsl_buckets* buckets, int exp, size_t index,
                                      uint64_t* doc_id, uint64_t* offset, uint64_t* length);

/* Splits bucket `from_exp` into 2^to_exp pieces and shuffles them. The
 * result holds only bucket `to_exp`. */
VSL_API vsl_status vsl_buckets_chunk_transform(const vsl_buckets* buckets, int from_exp,
                                               int to_exp, uint64_t seed, vsl_buckets** out);

/* ---- chunked sequences ---------------------------------------------------- */

typedef struct vsl_chunks vsl_chunks;

VSL_API vsl_status vsl_concat_and_chunk(const vsl_corpus* corpus, uint64_t target_len,
                                        uint32_t eot_token, uint64_t seed, vsl_chunks** out);
/* Pre-chunks documents to at most `context_size` tokens, then packs with
 * best-fit decreasing. */
VSL_API vsl_status vsl_best_fit_pack(const vsl_corpus* corpus, uint64_t context_size,
                                     uint32_t pad_token, vsl_chunks** out);
/* Joins shuffled runs of bucket `from_exp` into 2^to_exp sequences. */
VSL_API vsl_status vsl_buckets_concat_transform(const vsl_buckets* buckets, int from_exp,
                                                int to_exp, uint64_t seed, vsl_chunks** out);
VSL_API vsl_status vsl_chunks_write_manifest(const vsl_chunks* chunks, const char* path);
VSL_API void vsl_chunks_free(vsl_chunks* chunks);

VSL_API size_t vsl_chunks_count(const vsl_chunks* chunks);
VSL_API uint64_t vsl_chunks_pad_tokens(const vsl_chunks* chunks);
VSL_API uint64_t vsl_chunks_dropped_tokens(const vsl_chunks* chunks);
VSL_API size_t vsl_chunks_segment_count(const vsl_chunks* chunks, size_t chunk);
VSL_API vsl_status vsl_chunks_segment(const vsl_chunks* chunks, size_t chunk, size_t segment,
                                      uint64_t* doc_id, uint64_t* doc_offset,
                                      uint64_t* start_in_chunk, uint64_t* length);

/* ---- mixtures and curricula ----------------------------------------------- */

typedef struct vsl_mixture vsl_mixture;
typedef struct vsl_curriculum vsl_curriculum;

/* Accepts a preset name or a path to a JSON config. */
VSL_API vsl_status vsl_mixture_open(const char* name_or_path, vsl_mixture** out);
VSL_API vsl_status vsl_mixture_create(const char* name, vsl_mixture** out);
VSL_API vsl_status vsl_mixture_set_budget(vsl_mixture* mixture, int exp, uint64_t tokens);
/* Multiplies every budget by 2^scale_log2 (negative scales divide). */
VSL_API vsl_status vsl_mixture_scale(vsl_mixture* mixture, int scale_log2);
VSL_API uint64_t vsl_mixture_budget(const vsl_mixture* mixture, int exp);
VSL_API void vsl_mixture_free(vsl_mixture* mixture);
/* Newline-separated preset names; static storage. */
VSL_API const char* vsl_mixture_presets(void);

VSL_API vsl_status vsl_curriculum_open(const char* name_or_path, vsl_curriculum** out);
VSL_API vsl_status vsl_curriculum_create(const char* name, int cycles, vsl_curriculum** out);
VSL_API vsl_status vsl_curriculum_set_odds(vsl_curriculum* curriculum, int exp, double odds);
VSL_API vsl_status vsl_curriculum_set_cycles(vsl_curriculum* curriculum, int cycles);
VSL_API int vsl_curriculum_cycles(const vsl_curriculum* curriculum);
VSL_API void vsl_curriculum_free(vsl_curriculum* curriculum);
VSL_API const char* vsl_curriculum_presets(void);

/* ---- schedules -------------------------------------------------------------- */

typedef struct vsl_schedule vsl_schedule;

/* Selects the mixture from the buckets, builds the schedule and validates it;
 * an invalid schedule is reported as VSL_ERR_INVALID_SCHEDULE. */
VSL_API vsl_status vsl_schedule_build(const vsl_buckets* buckets, const vsl_mixture* mixture,
                                      const vsl_curriculum* curriculum, uint64_t batch_tokens,
                                      uint64_t seed, vsl_schedule** out);
VSL_API vsl_status vsl_schedule_write_manifest(const vsl_schedule* schedule, const char* path);
VSL_API void vsl_schedule_free(vsl_schedule* schedule);

VSL_API size_t vsl_schedule_step_count(const vsl_schedule* schedule);
VSL_API uint64_t vsl_schedule_dropped_tokens(const vsl_schedule* schedule);
VSL_API vsl_status vsl_schedule_step(const vsl_schedule* schedule, size_t step, int* cycle,
                                     int* exp, size_t* ref_count);

/* ---- statistics ------------------------------------------------------------- */

typedef struct vsl_length_stats {
  double avg_seq_len;
  double avg_ctx_len;
  uint64_t total_tokens;
  uint64_t total_sequences;
} vsl_length_stats;

VSL_API vsl_status vsl_avg_lengths(const uint64_t* lengths, size_t count,
                                   vsl_length_stats* out);
VSL_API vsl_status vsl_mixture_stats(const vsl_mixture* mixture, vsl_length_stats* out);

/* Reads any manifest (buckets, chunks or schedule) and writes a JSON report
 * to `json_path` and, when non-NULL, the exact context histogram as CSV to
 * `csv_path`. */
VSL_API vsl_status vsl_manifest_stats(const char* manifest_path, const char* json_path,
                                      const char* csv_path, vsl_length_stats* out);

/* ---- step-time model ------------------------------------------------------- */

typedef struct vsl_cost_model vsl_cost_model;

VSL_API vsl_status vsl_cost_model_create(double alpha, double beta, uint64_t b_ref,
                                         vsl_cost_model** out);
/* Least-squares fit; arrays of equal length `count`. */
VSL_API vsl_status vsl_cost_model_fit(const double* seq_len, const double* step_time_ms,
                                      const uint64_t* batch_tokens, size_t count,
                                      vsl_cost_model** out);
/* CSV rows "seq_len,step_time_ms,b". */
VSL_API vsl_status vsl_cost_model_fit_csv(const char* path, vsl_cost_model** out);
VSL_API vsl_status vsl_cost_model_load(const char* path, vsl_cost_model** out);
VSL_API vsl_status vsl_cost_model_save(const vsl_cost_model* model, const char* path);
VSL_API void vsl_cost_model_free(vsl_cost_model* model);

VSL_API double vsl_cost_model_alpha(const vsl_cost_model* model);
VSL_API double vsl_cost_model_beta(const vsl_cost_model* model);
VSL_API uint64_t vsl_cost_model_b_ref(const vsl_cost_model* model);
VSL_API int vsl_cost_model_negative_beta(const vsl_cost_model* model);

VSL_API vsl_status vsl_expected_step_time(const vsl_cost_model* model,
                                          const vsl_mixture* mixture, double* out_ms);
VSL_API vsl_status vsl_speedup(const vsl_cost_model* model, const vsl_mixture* mixture,
                               double baseline_len, double* out_ratio);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* VSL_VSL_H_ */
