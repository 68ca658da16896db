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

#include "vsl/report.hpp"

#include <ostream>
#include <vector>

#include "json.hpp"
#include "vsl/error.hpp"

namespace vsl {

namespace {

struct LengthCollector {
  std::vector<std::uint64_t> lengths;
  StatsReport report;

  void operator()(const BucketStore& store) {
    report.kind = "buckets";
    report.dropped_tokens = store.dropped_tokens();
    for (int exp : store.exponents()) {
      for (const auto& r : store.bucket(exp)) lengths.push_back(r.length);
    }
  }

  void operator()(const ChunkManifest& m) {
    report.kind = "chunks";
    for (const auto& c : m.chunks) {
      for (const auto& s : c.segments) {
        if (!s.is_reserved()) lengths.push_back(s.length);
      }
    }
  }

  void operator()(const ScheduleManifest& m) {
    report.kind = "schedule";
    report.dropped_tokens = m.report.total_dropped_tokens();
    for (const auto& step : m.report.steps) {
      for (const auto& r : step.refs) lengths.push_back(r.length);
    }
  }
};

}  // namespace

StatsReport manifest_stats(const AnyManifest& manifest) {
  LengthCollector collector;
  std::visit(collector, manifest);
  if (collector.lengths.empty())
    fail(ErrorCode::kInvalidArgument, "manifest holds no sequences");
  auto report = std::move(collector.report);
  report.lengths = avg_lengths(collector.lengths);
  report.context = context_distribution(std::span<const std::uint64_t>(collector.lengths));
  report.length_classes = length_class_distribution(collector.lengths);
  return report;
}

void write_stats_json(const StatsReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["kind"] = report.kind;
  j["avg_seq_len"] = report.lengths.avg_seq_len;
  j["avg_ctx_len"] = report.lengths.avg_ctx_len;
  j["total_tokens"] = report.lengths.total_tokens;
  j["total_sequences"] = report.lengths.total_sequences;
  j["dropped_tokens"] = report.dropped_tokens;

  const auto log_hist = report.context.rebin_log2();
  nlohmann::ordered_json ctx;
  ctx["edges"] = log_hist.edges;
  ctx["mass"] = log_hist.mass;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& [k, tokens] : report.length_classes) classes[std::to_string(k)] = tokens;
  j["histograms"] = {{"context_log2", ctx}, {"tokens_by_log2_length", classes}};
  out << j.dump(2) << '\n';
}

void write_context_csv(const Histogram& hist, std::ostream& out) {
  out << "context_len,count\n";
  for (std::size_t k = 0; k < hist.mass.size(); ++k) out << hist.edges[k] << ',' << hist.mass[k] << '\n';
}

}  // namespace vsl
