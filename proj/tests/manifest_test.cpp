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

#include "doctest.h"

#include <sstream>

#include "test_helpers.hpp"
#include "vsl/manifest.hpp"
#include "vsl/report.hpp"

using namespace vsl;
using vsl::testing::code_of;
using vsl::testing::TempDir;

namespace {

bool same_store(const BucketStore& a, const BucketStore& b) {
  if (a.min_exp() != b.min_exp() || a.max_exp() != b.max_exp()) return false;
  if (a.dropped_tokens() != b.dropped_tokens() || a.exponents() != b.exponents()) return false;
  for (int exp : a.exponents()) {
    const auto x = a.bucket(exp);
    const auto y = b.bucket(exp);
    if (!std::equal(x.begin(), x.end(), y.begin(), y.end())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bucket manifest round trip") {
  TempDir dir;
  SplitMix64 rng(4);
  const auto docs = vsl::testing::random_corpus(rng, 50, 0, 3000);
  const auto store = decompose_corpus(docs, 6, 10);
  write_bucket_manifest(store, dir.file("b.jsonl"));
  CHECK(same_store(read_bucket_manifest(dir.file("b.jsonl")), store));
  CHECK(std::holds_alternative<BucketStore>(read_manifest(dir.file("b.jsonl"))));

  std::ostringstream first;
  write_bucket_manifest(store, first);
  CHECK(first.str().find("\"kind\":\"buckets\"") < first.str().find('\n'));
}

TEST_CASE("chunk manifest round trip keeps reserved segments") {
  TempDir dir;
  const std::vector<TokenizedDocument> docs{vsl::testing::positional_doc(0, 5),
                                            vsl::testing::positional_doc(1, 9)};
  const auto chunks = concat_and_chunk(docs, 4, 3);
  const ChunkManifestInfo info{"concat_chunk", 4, Token{50256}, std::nullopt, 3};
  write_chunk_manifest(chunks, info, dir.file("c.jsonl"));
  const auto back = read_chunk_manifest(dir.file("c.jsonl"));
  CHECK(back.chunks == chunks);
  CHECK(back.info.method == "concat_chunk");
  CHECK(back.info.eot_token == Token{50256});
  CHECK_FALSE(back.info.pad_token.has_value());

  const auto text = vsl::testing::read_bytes(dir.file("c.jsonl"));
  CHECK(text.find("[-1,") != std::string::npos);
}

TEST_CASE("schedule manifest numbers steps from 1") {
  TempDir dir;
  BucketStore store(0, 13);
  for (DocId k = 0; k < 12; ++k) store.add({k, 0, 8});
  const auto sel = build_mixture(store, MixtureSpec{"m", {{3, 96}}}, 1);
  const auto report = make_schedule(sel, CurriculumSpec{"u", {{3, 1.0}}, 2}, 16, 1);
  const ScheduleManifestInfo info{"m", "u", {{3, 1.0}}, 2};
  write_schedule_manifest(report, info, dir.file("s.jsonl"));

  std::istringstream lines(vsl::testing::read_bytes(dir.file("s.jsonl")));
  std::string line;
  std::getline(lines, line);
  CHECK(line.find("\"kind\":\"schedule\"") != std::string::npos);
  std::getline(lines, line);
  CHECK(line.find("\"step\":1") != std::string::npos);

  const auto back = read_schedule_manifest(dir.file("s.jsonl"));
  REQUIRE(back.report.steps.size() == report.steps.size());
  for (std::size_t k = 0; k < report.steps.size(); ++k) {
    CHECK(back.report.steps[k].step_index == report.steps[k].step_index);
    CHECK(back.report.steps[k].cycle_index == report.steps[k].cycle_index);
    CHECK(back.report.steps[k].refs == report.steps[k].refs);
  }
  CHECK(back.info.cycles == 2);
  CHECK(back.report.batch_tokens == 16);
  CHECK(validate_schedule(back.report, sel, 16).ok());
}

TEST_CASE("manifest readers reject malformed input") {
  TempDir dir;
  const auto path = dir.file("m.jsonl");
  vsl::testing::write_text(path, "");
  CHECK(code_of([&] { read_manifest(path); }) == ErrorCode::kFormat);
  vsl::testing::write_text(path, "{\"kind\":\"what\"}\n");
  CHECK(code_of([&] { read_manifest(path); }) == ErrorCode::kFormat);
  vsl::testing::write_text(path, "{\"kind\":\"buckets\",\"min_exp\":0,\"max_exp\":13}\n{\"exp\":3,\"doc\":0,\"off\":0,\"len\":5}\n");
  CHECK(code_of([&] { read_manifest(path); }) == ErrorCode::kParse);
  vsl::testing::write_text(path, "{\"kind\":\"buckets\",\"min_exp\":0,\"max_exp\":13}\n{oops\n");
  CHECK(vsl::testing::message_of([&] { read_manifest(path); }).find(":2:") != std::string::npos);
  CHECK(code_of([&] { read_manifest(dir.file("missing")); }) == ErrorCode::kIo);
}

TEST_CASE("mixture and curriculum JSON round trip") {
  TempDir dir;
  const MixtureSpec mix{"mine", {{6, 64}, {7, 256}}};
  vsl::testing::write_text(dir.file("mix.json"), mixture_to_json(mix));
  const auto m = read_mixture_json(dir.file("mix.json"));
  CHECK(m.name == "mine");
  CHECK(m.budgets == mix.budgets);

  const CurriculumSpec cur{"c", {{6, 2.0}, {7, 0.5}}, 3};
  vsl::testing::write_text(dir.file("cur.json"), curriculum_to_json(cur));
  const auto c = read_curriculum_json(dir.file("cur.json"));
  CHECK(c.odds == cur.odds);
  CHECK(c.cycles == 3);

  vsl::testing::write_text(dir.file("bad.json"), "{\"name\":\"x\",\"budgets\":{\"3\":5}}");
  CHECK(code_of([&] { read_mixture_json(dir.file("bad.json")); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("manifest_stats over each manifest kind") {
  const std::vector<TokenizedDocument> docs{vsl::testing::positional_doc(0, 11)};
  const auto store = decompose_corpus(docs, 0, 13);
  const auto bs = manifest_stats(AnyManifest{store});
  CHECK(bs.kind == "buckets");
  CHECK(bs.lengths.total_tokens == 11);
  CHECK(bs.lengths.total_sequences == 3);
  CHECK(bs.context.total() == 11);

  ChunkManifest cm;
  cm.chunks = {{4, {{0, 0, 0, 3}, {kReservedDocId, 0, 3, 1}}, 0}};
  const auto cs = manifest_stats(AnyManifest{cm});
  CHECK(cs.lengths.total_tokens == 3);
  CHECK(cs.context.mass[0] == 1);

  CHECK(code_of([] { manifest_stats(AnyManifest{BucketStore(0, 13)}); }) ==
        ErrorCode::kInvalidArgument);

  std::ostringstream json, csv;
  write_stats_json(bs, json);
  CHECK(json.str().find("\"avg_ctx_len\"") != std::string::npos);
  write_context_csv(bs.context, csv);
  CHECK(csv.str().rfind("context_len,count\n0,3\n", 0) == 0);
}
