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

#include "vsl/costmodel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "vsl/error.hpp"

namespace vsl {

StepTimeModel fit(std::span<const Measurement> measurements) {
  if (measurements.size() < 2)
    fail(ErrorCode::kInvalidArgument, "need at least two measurements to fit a step-time model");
  const auto b = measurements.front().batch_tokens;
  double mean_l = 0.0;
  double mean_t = 0.0;
  for (const auto& m : measurements) {
    if (m.batch_tokens != b)
      fail(ErrorCode::kInvalidArgument,
           "measurements mix tokens-per-step " + std::to_string(b) + " and " +
               std::to_string(m.batch_tokens) + "; calibrate one model per b");
    if (!(m.seq_len > 0) || !(m.step_time_ms > 0) || m.batch_tokens == 0)
      fail(ErrorCode::kInvalidArgument, "measurements must be positive");
    mean_l += m.seq_len;
    mean_t += m.step_time_ms;
  }
  const auto n = static_cast<double>(measurements.size());
  mean_l /= n;
  mean_t /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& m : measurements) {
    sxx += (m.seq_len - mean_l) * (m.seq_len - mean_l);
    sxy += (m.seq_len - mean_l) * (m.step_time_ms - mean_t);
  }
  if (sxx == 0.0)
    fail(ErrorCode::kInvalidArgument, "all measurements share one sequence length");

  StepTimeModel model;
  model.beta = sxy / sxx;
  model.alpha = mean_t - model.beta * mean_l;
  model.b_ref = b;
  model.negative_beta = model.beta < 0.0;
  model.source_measurements.assign(measurements.begin(), measurements.end());
  return model;
}

std::vector<double> residuals(const StepTimeModel& model,
                              std::span<const Measurement> measurements) {
  std::vector<double> out;
  out.reserve(measurements.size());
  for (const auto& m : measurements) out.push_back(m.step_time_ms - model.predict(m.seq_len));
  return out;
}

double mean_step_length(const MixtureSpec& spec) {
  spec.validate();
  long double total = 0;
  long double weighted = 0;
  for (const auto& [exp, n] : spec.budgets) {
    total += n;
    weighted += static_cast<long double>(n) * static_cast<long double>(std::uint64_t{1} << exp);
  }
  if (total == 0) fail(ErrorCode::kInvalidArgument, "mixture '" + spec.name + "' is empty");
  return static_cast<double>(weighted / total);
}

double expected_step_time(const StepTimeModel& model, const MixtureSpec& spec) {
  return model.predict(mean_step_length(spec));
}

double speedup(const StepTimeModel& model, const MixtureSpec& spec, double baseline_len) {
  return model.predict(baseline_len) / expected_step_time(model, spec);
}

// --- Files ---------------------------------------------------------------------

std::vector<Measurement> read_measurements_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<Measurement> out;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line_no == 1 && line.find("seq_len") != std::string::npos) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    std::getline(fields, a, ',');
    std::getline(fields, b, ',');
    std::getline(fields, c, ',');
    try {
      Measurement m;
      m.seq_len = std::stod(a);
      m.step_time_ms = std::stod(b);
      m.batch_tokens = std::stoull(c);
      out.push_back(m);
    } catch (const std::exception&) {
      fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) +
                                  ": expected seq_len,step_time_ms,b");
    }
  }
  return out;
}

void save_model(const StepTimeModel& model, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["alpha"] = model.alpha;
  j["beta"] = model.beta;
  j["b_ref"] = model.b_ref;
  j["negative_beta"] = model.negative_beta;
  auto& src = j["source_measurements"] = nlohmann::ordered_json::array();
  for (const auto& m : model.source_measurements)
    src.push_back({{"seq_len", m.seq_len}, {"step_time_ms", m.step_time_ms}, {"b", m.batch_tokens}});
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failure on " + path.string());
}

StepTimeModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    const auto j = nlohmann::json::parse(in);
    StepTimeModel model;
    model.alpha = j.at("alpha").get<double>();
    model.beta = j.at("beta").get<double>();
    model.b_ref = j.at("b_ref").get<std::uint64_t>();
    model.negative_beta = model.beta < 0.0;
    if (j.contains("source_measurements")) {
      for (const auto& m : j["source_measurements"])
        model.source_measurements.push_back(
            {m.at("seq_len").get<double>(), m.at("step_time_ms").get<double>(),
             m.at("b").get<std::uint64_t>()});
    }
    if (!std::isfinite(model.alpha) || !std::isfinite(model.beta))
      fail(ErrorCode::kFormat, path.string() + ": alpha and beta must be finite");
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace vsl
