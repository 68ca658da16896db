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

// Command-line front end. Links only against the C interface.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "vsl/vsl.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

// Thrown out of a subcommand after a failed C call; carries the exit code.
struct CommandFailed {
  int exit_code;
};

void check(vsl_status status, const char* what) {
  if (status == VSL_OK) return;
  std::fprintf(stderr, "vsl: %s: %s: %s\n", what, vsl_status_name(status), vsl_last_error());
  const bool internal = status == VSL_ERR_INTERNAL || status == VSL_ERR_INVALID_SCHEDULE;
  throw CommandFailed{internal ? kExitInternal : kExitUsage};
}

void log_phase(const std::string& line) { std::fprintf(stderr, "vsl: %s\n", line.c_str()); }

// Minimal owning wrapper around an opaque handle.
template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr_); }

  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Corpus = Handle<vsl_corpus, vsl_corpus_free>;
using Buckets = Handle<vsl_buckets, vsl_buckets_free>;
using Chunks = Handle<vsl_chunks, vsl_chunks_free>;
using Mixture = Handle<vsl_mixture, vsl_mixture_free>;
using Curriculum = Handle<vsl_curriculum, vsl_curriculum_free>;
using Schedule = Handle<vsl_schedule, vsl_schedule_free>;
using CostModel = Handle<vsl_cost_model, vsl_cost_model_free>;

void require_input(const std::string& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    std::fprintf(stderr, "vsl: input not found: %s\n", path.c_str());
    throw CommandFailed{kExitUsage};
  }
}

void require_parent(const std::string& path) {
  if (path == "-") return;
  const auto parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty() && !fs::is_directory(parent, ec)) {
    std::fprintf(stderr, "vsl: output directory does not exist: %s\n", parent.string().c_str());
    throw CommandFailed{kExitUsage};
  }
}

struct RunConfig {
  std::uint64_t seed = 0;

  // decompose
  std::string input;
  std::string output;
  int min_exp = 6;
  int max_exp = 13;
  bool append_eot = false;
  std::uint32_t eot_id = 0;

  // chunk / pack
  std::uint64_t target_len = 0;
  std::uint64_t context = 0;
  std::uint32_t pad_id = 0;

  // schedule
  std::string mixture = "natural";
  std::string curriculum = "uniform";
  int cycles = 0;  // 0: keep the curriculum's own value
  std::uint64_t batch_tokens = std::uint64_t{1} << 19;

  // stats / cost
  std::string json_out = "-";
  std::string csv_out;
  std::string model;
  std::string measurements;
  double baseline_len = 8192;
};

int cmd_decompose(const RunConfig& cfg) {
  require_input(cfg.input);
  Corpus corpus;
  check(vsl_corpus_load(cfg.input.c_str(), corpus.out()), "reading corpus");
  log_phase("read " + std::to_string(vsl_corpus_size(corpus.get())) + " documents, " +
            std::to_string(vsl_corpus_total_tokens(corpus.get())) + " tokens");
  if (cfg.append_eot) check(vsl_corpus_append_eot(corpus.get(), cfg.eot_id), "appending EOT");

  Buckets buckets;
  check(vsl_decompose(corpus.get(), cfg.min_exp, cfg.max_exp, buckets.out()), "decomposing");

  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) {
    std::fprintf(stderr, "vsl: cannot create %s: %s\n", cfg.output.c_str(), ec.message().c_str());
    throw CommandFailed{kExitUsage};
  }
  const auto manifest = (fs::path(cfg.output) / "buckets.jsonl").string();
  const auto shard = (fs::path(cfg.output) / "corpus.shard").string();
  check(vsl_buckets_write_manifest(buckets.get(), manifest.c_str()), "writing bucket manifest");
  check(vsl_corpus_write_shard(corpus.get(), shard.c_str()), "writing shard");

  std::string summary = "buckets";
  for (int e = cfg.min_exp; e <= cfg.max_exp; ++e)
    summary += " D" + std::to_string(e) + "=" + std::to_string(vsl_buckets_count(buckets.get(), e));
  log_phase(summary + ", dropped " + std::to_string(vsl_buckets_dropped_tokens(buckets.get())) +
            " tokens");
  log_phase("wrote " + manifest + " and " + shard);
  return kExitOk;
}

int write_chunks(const Chunks& chunks, const std::string& output) {
  check(vsl_chunks_write_manifest(chunks.get(), output.c_str()), "writing chunk manifest");
  log_phase("wrote " + std::to_string(vsl_chunks_count(chunks.get())) + " sequences (" +
            std::to_string(vsl_chunks_pad_tokens(chunks.get())) + " pad, " +
            std::to_string(vsl_chunks_dropped_tokens(chunks.get())) + " dropped tokens)");
  return kExitOk;
}

int cmd_chunk(const RunConfig& cfg) {
  require_input(cfg.input);
  require_parent(cfg.output);
  Corpus corpus;
  check(vsl_corpus_load(cfg.input.c_str(), corpus.out()), "reading corpus");
  Chunks chunks;
  check(vsl_concat_and_chunk(corpus.get(), cfg.target_len, cfg.eot_id, cfg.seed, chunks.out()),
        "concat-and-chunk");
  return write_chunks(chunks, cfg.output);
}

int cmd_pack(const RunConfig& cfg) {
  require_input(cfg.input);
  require_parent(cfg.output);
  Corpus corpus;
  check(vsl_corpus_load(cfg.input.c_str(), corpus.out()), "reading corpus");
  Chunks chunks;
  check(vsl_best_fit_pack(corpus.get(), cfg.context, cfg.pad_id, chunks.out()), "best-fit packing");
  return write_chunks(chunks, cfg.output);
}

int cmd_schedule(const RunConfig& cfg) {
  require_input(cfg.input);
  require_parent(cfg.output);
  std::string manifest = cfg.input;
  if (fs::is_directory(manifest)) manifest = (fs::path(manifest) / "buckets.jsonl").string();

  Buckets buckets;
  check(vsl_buckets_load_manifest(manifest.c_str(), buckets.out()), "reading bucket manifest");
  Mixture mixture;
  check(vsl_mixture_open(cfg.mixture.c_str(), mixture.out()), "loading mixture");
  Curriculum curriculum;
  check(vsl_curriculum_open(cfg.curriculum.c_str(), curriculum.out()), "loading curriculum");
  if (cfg.cycles > 0) check(vsl_curriculum_set_cycles(curriculum.get(), cfg.cycles), "setting cycles");

  Schedule schedule;
  check(vsl_schedule_build(buckets.get(), mixture.get(), curriculum.get(), cfg.batch_tokens,
                           cfg.seed, schedule.out()),
        "building schedule");
  check(vsl_schedule_write_manifest(schedule.get(), cfg.output.c_str()), "writing schedule");
  log_phase("scheduled " + std::to_string(vsl_schedule_step_count(schedule.get())) +
            " steps over " + std::to_string(vsl_curriculum_cycles(curriculum.get())) +
            " cycles, dropped " + std::to_string(vsl_schedule_dropped_tokens(schedule.get())) +
            " tail tokens");
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg) {
  require_input(cfg.input);
  require_parent(cfg.json_out);
  if (!cfg.csv_out.empty()) require_parent(cfg.csv_out);
  vsl_length_stats stats{};
  check(vsl_manifest_stats(cfg.input.c_str(), cfg.json_out.c_str(),
                           cfg.csv_out.empty() ? nullptr : cfg.csv_out.c_str(), &stats),
        "computing statistics");
  return kExitOk;
}

int cmd_fit(const RunConfig& cfg) {
  require_input(cfg.input);
  require_parent(cfg.output);
  CostModel model;
  check(vsl_cost_model_fit_csv(cfg.input.c_str(), model.out()), "fitting step-time model");
  if (vsl_cost_model_negative_beta(model.get()))
    log_phase("warning: fitted slope is negative; step time decreases with length");
  check(vsl_cost_model_save(model.get(), cfg.output.c_str()), "writing model");
  char line[160];
  std::snprintf(line, sizeof(line), "alpha = %.4f ms, beta = %.8f ms/token, b = %llu",
                vsl_cost_model_alpha(model.get()), vsl_cost_model_beta(model.get()),
                static_cast<unsigned long long>(vsl_cost_model_b_ref(model.get())));
  log_phase(line);
  return kExitOk;
}

int cmd_cost(const RunConfig& cfg) {
  CostModel model;
  if (!cfg.model.empty()) {
    require_input(cfg.model);
    check(vsl_cost_model_load(cfg.model.c_str(), model.out()), "loading model");
  } else {
    require_input(cfg.measurements);
    check(vsl_cost_model_fit_csv(cfg.measurements.c_str(), model.out()), "fitting model");
  }
  Mixture mixture;
  check(vsl_mixture_open(cfg.mixture.c_str(), mixture.out()), "loading mixture");
  double ms = 0.0;
  double ratio = 0.0;
  check(vsl_expected_step_time(model.get(), mixture.get(), &ms), "predicting step time");
  check(vsl_speedup(model.get(), mixture.get(), cfg.baseline_len, &ratio), "computing speedup");
  vsl_length_stats stats{};
  check(vsl_mixture_stats(mixture.get(), &stats), "mixture statistics");
  std::printf(
      "{\n  \"mixture\": \"%s\",\n  \"expected_step_time_ms\": %.6f,\n  \"baseline_len\": %.0f,\n"
      "  \"baseline_step_time_ms\": %.6f,\n  \"speedup\": %.6f,\n  \"avg_seq_len\": %.6f,\n"
      "  \"avg_ctx_len\": %.6f\n}\n",
      cfg.mixture.c_str(), ms, cfg.baseline_len,
      vsl_cost_model_alpha(model.get()) + vsl_cost_model_beta(model.get()) * cfg.baseline_len,
      ratio, stats.avg_seq_len, stats.avg_ctx_len);
  return kExitOk;
}

int cmd_presets() {
  std::printf("mixtures:\n%scurricula:\n%s", vsl_mixture_presets(), vsl_curriculum_presets());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dataset decomposition and variable-sequence-length batch scheduling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vsl_version()));

  RunConfig cfg;
  std::function<int()> run;

  auto* decompose = app.add_subcommand("decompose", "Split documents into power-of-two buckets");
  decompose->add_option("input", cfg.input, "Corpus (JSONL or shard)")->required();
  decompose->add_option("output", cfg.output, "Output directory (buckets.jsonl, corpus.shard)")->required();
  decompose->add_option("--min-exp", cfg.min_exp, "Smallest bucket exponent")->capture_default_str()->check(CLI::Range(0, 40));
  decompose->add_option("--max-exp", cfg.max_exp, "Largest bucket exponent")->capture_default_str()->check(CLI::Range(0, 40));
  decompose->add_flag("--append-eot", cfg.append_eot, "Append one EOT token to every document first");
  decompose->add_option("--eot-id", cfg.eot_id, "EOT token id")->capture_default_str();
  decompose->callback([&] { run = [&] { return cmd_decompose(cfg); }; });

  auto* chunk = app.add_subcommand("chunk", "Concat-and-chunk baseline");
  chunk->add_option("input", cfg.input, "Corpus (JSONL or shard)")->required();
  chunk->add_option("output", cfg.output, "Chunk manifest path ('-' for stdout)")->required();
  chunk->add_option("--target-len", cfg.target_len, "Tokens per chunk")->required()->check(CLI::PositiveNumber);
  chunk->add_option("--eot-id", cfg.eot_id, "EOT token id")->capture_default_str();
  chunk->add_option("--seed", cfg.seed, "Shuffle seed")->capture_default_str();
  chunk->callback([&] { run = [&] { return cmd_chunk(cfg); }; });

  auto* pack = app.add_subcommand("pack", "Best-fit-decreasing packing baseline");
  pack->add_option("input", cfg.input, "Corpus (JSONL or shard)")->required();
  pack->add_option("output", cfg.output, "Chunk manifest path ('-' for stdout)")->required();
  pack->add_option("--context", cfg.context, "Bin capacity in tokens")->required()->check(CLI::PositiveNumber);
  pack->add_option("--pad-id", cfg.pad_id, "Pad token id")->capture_default_str();
  pack->callback([&] { run = [&] { return cmd_pack(cfg); }; });

  auto* schedule = app.add_subcommand("schedule", "Build a variable-sequence-length batch schedule");
  schedule->add_option("buckets", cfg.input, "Bucket manifest or decompose output directory")->required();
  schedule->add_option("output", cfg.output, "Schedule manifest path ('-' for stdout)")->required();
  schedule->add_option("--mixture", cfg.mixture, "Mixture preset or JSON file")->capture_default_str();
  schedule->add_option("--curriculum", cfg.curriculum, "Curriculum preset or JSON file")->capture_default_str();
  schedule->add_option("--cycles", cfg.cycles, "Curriculum cycles (overrides the curriculum)")->check(CLI::PositiveNumber);
  schedule->add_option("--batch-tokens", cfg.batch_tokens, "Tokens per optimization step")->capture_default_str()->check(CLI::PositiveNumber);
  schedule->add_option("--seed", cfg.seed, "Global seed")->capture_default_str();
  schedule->callback([&] { run = [&] { return cmd_schedule(cfg); }; });

  auto* stats = app.add_subcommand("stats", "Length and context statistics of a manifest");
  stats->add_option("manifest", cfg.input, "Bucket, chunk or schedule manifest")->required();
  stats->add_option("--out", cfg.json_out, "JSON report path ('-' for stdout)")->capture_default_str();
  stats->add_option("--csv", cfg.csv_out, "Write the exact context histogram as CSV");
  stats->callback([&] { run = [&] { return cmd_stats(cfg); }; });

  auto* fit = app.add_subcommand("fit", "Fit the affine step-time model");
  fit->add_option("measurements", cfg.input, "CSV rows seq_len,step_time_ms,b")->required();
  fit->add_option("output", cfg.output, "Model JSON path")->required();
  fit->callback([&] { run = [&] { return cmd_fit(cfg); }; });

  auto* cost = app.add_subcommand("cost", "Predict step time and speedup for a mixture");
  auto* model_opt = cost->add_option("--model", cfg.model, "Model JSON from 'fit'");
  auto* meas_opt = cost->add_option("--measurements", cfg.measurements, "Fit from this CSV instead");
  model_opt->excludes(meas_opt);
  cost->add_option("--mixture", cfg.mixture, "Mixture preset or JSON file")->capture_default_str();
  cost->add_option("--baseline-len", cfg.baseline_len, "Fixed sequence length to compare against")->capture_default_str()->check(CLI::PositiveNumber);
  cost->callback([&] {
    if (cfg.model.empty() && cfg.measurements.empty())
      throw CLI::RequiredError("--model or --measurements");
    run = [&] { return cmd_cost(cfg); };
  });

  auto* presets = app.add_subcommand("presets", "List mixture and curriculum presets");
  presets->callback([&] { run = [] { return cmd_presets(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    return run();
  } catch (const CommandFailed& f) {
    return f.exit_code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "vsl: %s\n", e.what());
    return kExitInternal;
  }
}
