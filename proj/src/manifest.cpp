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

#include "vsl/manifest.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "vsl/error.hpp"

namespace vsl {

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorCode::kIo, "write failure on " + path.string());
}

// Line-oriented reader that reports "path:line: ..." on bad JSON.
class ManifestLines {
 public:
  explicit ManifestLines(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) fail(ErrorCode::kIo, "cannot open " + path.string());
  }

  bool next(json& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out = json::parse(line);
      } catch (const json::parse_error& e) {
        fail(ErrorCode::kParse, where() + "malformed JSON: " + e.what());
      }
      return true;
    }
    return false;
  }

  std::string where() const { return path_.string() + ":" + std::to_string(line_no_) + ": "; }

  [[noreturn]] void bad(const std::string& what) const { fail(ErrorCode::kParse, where() + what); }

  json header(const char* kind) {
    json h;
    if (!next(h)) fail(ErrorCode::kFormat, path_.string() + ": empty manifest");
    if (!h.is_object() || h.value("kind", "") != kind)
      fail(ErrorCode::kFormat, path_.string() + ": not a " + kind + " manifest");
    return h;
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t line_no_ = 0;
};

json encode_doc(DocId id) { return id == kReservedDocId ? json(-1) : json(id); }

DocId decode_doc(const json& j) {
  if (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() == -1)
    return kReservedDocId;
  return j.get<DocId>();
}

template <typename F>
auto guarded(ManifestLines& lines, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    lines.bad(e.what());
  }
}

}  // namespace

// --- Buckets -------------------------------------------------------------------

void write_bucket_manifest(const BucketStore& store, std::ostream& out) {
  ojson h;
  h["kind"] = "buckets";
  h["min_exp"] = store.min_exp();
  h["max_exp"] = store.max_exp();
  h["dropped_tokens"] = store.dropped_tokens();
  out << h.dump() << '\n';
  for (int exp : store.exponents()) {
    for (const auto& r : store.bucket(exp)) {
      ojson line;
      line["exp"] = exp;
      line["doc"] = r.doc_id;
      line["off"] = r.offset;
      line["len"] = r.length;
      out << line.dump() << '\n';
    }
  }
}

void write_bucket_manifest(const BucketStore& store, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_bucket_manifest(store, out);
  finish_out(out, path);
}

BucketStore read_bucket_manifest(const std::filesystem::path& path) {
  ManifestLines lines(path);
  const auto h = lines.header("buckets");
  return guarded(lines, [&] {
    BucketStore store(h.at("min_exp").get<int>(), h.at("max_exp").get<int>());
    store.add_dropped(h.value("dropped_tokens", std::uint64_t{0}));
    json j;
    while (lines.next(j)) {
      SequenceRecord r{j.at("doc").get<DocId>(), j.at("off").get<std::uint64_t>(),
                       j.at("len").get<std::uint64_t>()};
      const int exp = j.at("exp").get<int>();
      if (exp < 0 || exp > kMaxExponent || r.length != (std::uint64_t{1} << exp))
        lines.bad("record length does not match its bucket exponent");
      try {
        store.add(r);
      } catch (const Error& e) {
        lines.bad(e.what());
      }
    }
    return store;
  });
}

// --- Chunks --------------------------------------------------------------------

void write_chunk_manifest(std::span<const ChunkedSequence> chunks,
                          const ChunkManifestInfo& info, std::ostream& out) {
  ojson h;
  h["kind"] = "chunks";
  h["method"] = info.method;
  h["target_len"] = info.target_len;
  h["eot"] = info.eot_token ? ojson(*info.eot_token) : ojson(nullptr);
  h["pad"] = info.pad_token ? ojson(*info.pad_token) : ojson(nullptr);
  h["seed"] = info.seed;
  h["count"] = chunks.size();
  out << h.dump() << '\n';
  for (const auto& c : chunks) {
    ojson line;
    line["len"] = c.target_len;
    line["pad_count"] = c.pad_count;
    auto& segs = line["segments"] = ojson::array();
    for (const auto& s : c.segments)
      segs.push_back(ojson::array({encode_doc(s.doc_id), s.doc_offset, s.start_in_chunk, s.length}));
    out << line.dump() << '\n';
  }
}

void write_chunk_manifest(std::span<const ChunkedSequence> chunks,
                          const ChunkManifestInfo& info, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_chunk_manifest(chunks, info, out);
  finish_out(out, path);
}

ChunkManifest read_chunk_manifest(const std::filesystem::path& path) {
  ManifestLines lines(path);
  const auto h = lines.header("chunks");
  return guarded(lines, [&] {
    ChunkManifest m;
    m.info.method = h.value("method", "");
    m.info.target_len = h.at("target_len").get<std::uint64_t>();
    if (h.contains("eot") && !h["eot"].is_null()) m.info.eot_token = h["eot"].get<Token>();
    if (h.contains("pad") && !h["pad"].is_null()) m.info.pad_token = h["pad"].get<Token>();
    m.info.seed = h.value("seed", std::uint64_t{0});
    json j;
    while (lines.next(j)) {
      ChunkedSequence c;
      c.target_len = j.at("len").get<std::uint64_t>();
      c.pad_count = j.at("pad_count").get<std::uint64_t>();
      for (const auto& s : j.at("segments")) {
        if (!s.is_array() || s.size() != 4) lines.bad("segment must be [doc, doc_off, start, len]");
        c.segments.push_back({decode_doc(s[0]), s[1].get<std::uint64_t>(),
                              s[2].get<std::uint64_t>(), s[3].get<std::uint64_t>()});
      }
      if (!segments_tile(c)) lines.bad("segments do not tile the chunk");
      m.chunks.push_back(std::move(c));
    }
    return m;
  });
}

// --- Schedules -----------------------------------------------------------------

namespace {

ojson odds_json(const std::map<int, double>& odds) {
  ojson o = ojson::object();
  for (const auto& [exp, v] : odds) o[std::to_string(exp)] = v;
  return o;
}

}  // namespace

void write_schedule_manifest(const ScheduleReport& report, const ScheduleManifestInfo& info,
                             std::ostream& out) {
  ojson h;
  h["kind"] = "schedule";
  h["seed"] = report.seed;
  h["b"] = report.batch_tokens;
  h["mixture"] = info.mixture;
  h["curriculum"] = info.curriculum;
  h["odds"] = odds_json(info.odds);
  h["cycles"] = info.cycles;
  h["steps"] = report.steps.size();
  ojson dropped = ojson::object();
  for (const auto& [exp, t] : report.dropped_tail_tokens) dropped[std::to_string(exp)] = t;
  h["dropped_tail_tokens"] = dropped;
  out << h.dump() << '\n';
  for (const auto& step : report.steps) {
    ojson line;
    line["step"] = step.step_index + 1;
    line["cycle"] = step.cycle_index;
    line["exp"] = step.exp;
    auto& refs = line["refs"] = ojson::array();
    for (const auto& r : step.refs) refs.push_back(ojson::array({r.doc_id, r.offset}));
    out << line.dump() << '\n';
  }
}

void write_schedule_manifest(const ScheduleReport& report, const ScheduleManifestInfo& info,
                             const std::filesystem::path& path) {
  auto out = open_out(path);
  write_schedule_manifest(report, info, out);
  finish_out(out, path);
}

ScheduleManifest read_schedule_manifest(const std::filesystem::path& path) {
  ManifestLines lines(path);
  const auto h = lines.header("schedule");
  return guarded(lines, [&] {
    ScheduleManifest m;
    m.report.seed = h.at("seed").get<std::uint64_t>();
    m.report.batch_tokens = h.at("b").get<std::uint64_t>();
    m.info.mixture = h.value("mixture", "");
    m.info.curriculum = h.value("curriculum", "");
    m.info.cycles = h.value("cycles", 1);
    if (h.contains("odds")) {
      for (const auto& [k, v] : h["odds"].items()) m.info.odds[std::stoi(k)] = v.get<double>();
    }
    if (h.contains("dropped_tail_tokens")) {
      for (const auto& [k, v] : h["dropped_tail_tokens"].items())
        m.report.dropped_tail_tokens[std::stoi(k)] = v.get<std::uint64_t>();
    }
    json j;
    while (lines.next(j)) {
      BatchStep step;
      const auto k = j.at("step").get<std::uint64_t>();
      if (k == 0) lines.bad("step numbers start at 1");
      step.step_index = k - 1;
      step.cycle_index = j.at("cycle").get<int>();
      step.exp = j.at("exp").get<int>();
      if (step.exp < 0 || step.exp > kMaxExponent) lines.bad("bucket exponent out of range");
      const std::uint64_t len = std::uint64_t{1} << step.exp;
      for (const auto& r : j.at("refs")) {
        if (!r.is_array() || r.size() != 2) lines.bad("ref must be [doc, off]");
        step.refs.push_back({r[0].get<DocId>(), r[1].get<std::uint64_t>(), len});
      }
      m.report.steps.push_back(std::move(step));
    }
    return m;
  });
}

AnyManifest read_manifest(const std::filesystem::path& path) {
  std::string kind;
  {
    ManifestLines lines(path);
    json h;
    if (!lines.next(h)) fail(ErrorCode::kFormat, path.string() + ": empty manifest");
    if (h.is_object()) kind = h.value("kind", "");
  }
  if (kind == "buckets") return read_bucket_manifest(path);
  if (kind == "chunks") return read_chunk_manifest(path);
  if (kind == "schedule") return read_schedule_manifest(path);
  fail(ErrorCode::kFormat, path.string() + ": unrecognized manifest header");
}

// --- Mixture / curriculum configs ----------------------------------------------

MixtureSpec read_mixture_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    const auto j = json::parse(in);
    MixtureSpec spec;
    spec.name = j.value("name", path.stem().string());
    for (const auto& [k, v] : j.at("budgets").items()) spec.budgets[std::stoi(k)] = v.get<std::uint64_t>();
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  } catch (const std::logic_error& e) {  // stoi
    fail(ErrorCode::kParse, path.string() + ": bucket keys must be integer exponents");
  }
}

CurriculumSpec read_curriculum_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    const auto j = json::parse(in);
    CurriculumSpec spec;
    spec.name = j.value("name", path.stem().string());
    spec.cycles = j.value("cycles", 1);
    for (const auto& [k, v] : j.at("odds").items()) spec.odds[std::stoi(k)] = v.get<double>();
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, path.string() + ": " + e.what());
  } catch (const std::logic_error& e) {
    fail(ErrorCode::kParse, path.string() + ": bucket keys must be integer exponents");
  }
}

std::string mixture_to_json(const MixtureSpec& spec) {
  ojson j;
  j["name"] = spec.name;
  ojson b = ojson::object();
  for (const auto& [exp, n] : spec.budgets) b[std::to_string(exp)] = n;
  j["budgets"] = b;
  return j.dump(2);
}

std::string curriculum_to_json(const CurriculumSpec& spec) {
  ojson j;
  j["name"] = spec.name;
  j["odds"] = odds_json(spec.odds);
  j["cycles"] = spec.cycles;
  return j.dump(2);
}

}  // namespace vsl
