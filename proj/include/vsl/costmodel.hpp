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
#include <filesystem>
#include <span>
#include <vector>

#include "vsl/scheduler.hpp"

namespace vsl {

struct Measurement {
  double seq_len = 0.0;
  double step_time_ms = 0.0;
  std::uint64_t batch_tokens = 0;
};

// Step time T(l) = alpha + beta * l at a fixed tokens-per-step b_ref. At
// constant b the attention work per step is b * l, so l enters linearly.
struct StepTimeModel {
  double alpha = 0.0;  // ms
  double beta = 0.0;   // ms per token of sequence length
  std::uint64_t b_ref = 0;
  bool negative_beta = false;  // set by fit() when the slope came out < 0
  std::vector<Measurement> source_measurements;

  double predict(double seq_len) const { return alpha + beta * seq_len; }
};

// Least squares over measurements sharing one b. Two points give the
// interpolating line.
StepTimeModel fit(std::span<const Measurement> measurements);

std::vector<double> residuals(const StepTimeModel& model,
                              std::span<const Measurement> measurements);

// Token-weighted mean sequence length Σ n_i 2^i / Σ n_i. Constant tokens per
// step makes n_i / Σn the fraction of steps drawn from bucket i.
double mean_step_length(const MixtureSpec& spec);

double expected_step_time(const StepTimeModel& model, const MixtureSpec& spec);

double speedup(const StepTimeModel& model, const MixtureSpec& spec, double baseline_len);

// CSV header "seq_len,step_time_ms,b" is optional.
std::vector<Measurement> read_measurements_csv(const std::filesystem::path& path);

void save_model(const StepTimeModel& model, const std::filesystem::path& path);
StepTimeModel load_model(const std::filesystem::path& path);

}  // namespace vsl
