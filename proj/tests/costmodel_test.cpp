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

#include "test_helpers.hpp"
#include "vsl/costmodel.hpp"

using namespace vsl;
using vsl::testing::code_of;

TEST_CASE("two-point fit interpolates") {
  const std::vector<Measurement> m{{2048, 243, 1 << 19}, {8192, 304, 1 << 19}};
  const auto model = fit(m);
  CHECK(model.beta == doctest::Approx(61.0 / 6144.0).epsilon(1e-12));
  CHECK(model.alpha == doctest::Approx(243.0 - 2048.0 * 61.0 / 6144.0).epsilon(1e-12));
  CHECK(model.alpha == doctest::Approx(222.67).epsilon(1e-4));
  CHECK(model.b_ref == 1u << 19);
  CHECK_FALSE(model.negative_beta);
  CHECK(model.predict(8192) == doctest::Approx(304.0));
}

TEST_CASE("flat measurements fit a zero slope") {
  const std::vector<Measurement> m{{1024, 250, 8}, {2048, 250, 8}, {4096, 250, 8}};
  const auto model = fit(m);
  CHECK(model.beta == doctest::Approx(0.0));
  CHECK(model.alpha == doctest::Approx(250.0));
}

TEST_CASE("collinear points leave zero residuals") {
  std::vector<Measurement> m;
  for (double l : {256.0, 1024.0, 4096.0, 8192.0}) m.push_back({l, 100.0 + 0.01 * l, 8});
  const auto model = fit(m);
  for (double r : residuals(model, m)) CHECK(r == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("negative slope is flagged, not rejected") {
  const std::vector<Measurement> m{{1024, 300, 8}, {2048, 250, 8}};
  CHECK(fit(m).negative_beta);
}

TEST_CASE("fit rejects degenerate input") {
  CHECK(code_of([] { fit(std::vector<Measurement>{{1024, 1, 8}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { fit(std::vector<Measurement>{{1024, 1, 8}, {1024, 2, 8}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { fit(std::vector<Measurement>{{1024, 1, 8}, {2048, 2, 16}}); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { fit(std::vector<Measurement>{{1024, -1, 8}, {2048, 2, 8}}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("expected step time uses the token-weighted mean length") {
  const StepTimeModel model{100.0, 0.5, 8, false, {}};
  CHECK(mean_step_length(MixtureSpec{"a", {{10, 1024}}}) == 1024.0);
  // Equal tokens in 2^2 and 2^4: steps split evenly, mean length 10.
  const MixtureSpec two{"b", {{2, 64}, {4, 64}}};
  CHECK(mean_step_length(two) == 10.0);
  CHECK(expected_step_time(model, two) == 105.0);
  CHECK(speedup(model, two, 30.0) == doctest::Approx(115.0 / 105.0));
  CHECK(code_of([&] { expected_step_time(model, MixtureSpec{"e", {}}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("natural mixture against the 8192 baseline") {
  const std::vector<Measurement> m{{2048, 243, 8}, {8192, 304, 8}};
  const auto model = fit(m);
  const auto natural = mixture_preset("natural");
  CHECK(mean_step_length(natural) == doctest::Approx(195520.0 / 96.0));
  CHECK(expected_step_time(model, natural) == doctest::Approx(242.9).epsilon(1e-3));
  CHECK(speedup(model, natural, 8192) == doctest::Approx(1.25).epsilon(5e-3));
}

TEST_CASE("measurement CSV and model JSON round trip") {
  vsl::testing::TempDir dir;
  vsl::testing::write_text(dir.file("m.csv"), "seq_len,step_time_ms,b\n2048,243,524288\n8192,304,524288\n");
  const auto m = read_measurements_csv(dir.file("m.csv"));
  REQUIRE(m.size() == 2);
  CHECK(m[1].step_time_ms == 304.0);
  CHECK(m[1].batch_tokens == 524288u);

  vsl::testing::write_text(dir.file("h.csv"), "2048,243,8\n");
  CHECK(read_measurements_csv(dir.file("h.csv")).size() == 1);

  const auto model = fit(m);
  save_model(model, dir.file("model.json"));
  const auto back = load_model(dir.file("model.json"));
  CHECK(back.alpha == model.alpha);
  CHECK(back.beta == model.beta);
  CHECK(back.b_ref == model.b_ref);
  CHECK(back.source_measurements.size() == 2);

  vsl::testing::write_text(dir.file("bad.csv"), "2048,abc,8\n");
  CHECK(code_of([&] { read_measurements_csv(dir.file("bad.csv")); }) == ErrorCode::kParse);
  vsl::testing::write_text(dir.file("bad.json"), "{\"alpha\":1}");
  CHECK(code_of([&] { load_model(dir.file("bad.json")); }) == ErrorCode::kParse);
  CHECK(code_of([&] { load_model(dir.file("none.json")); }) == ErrorCode::kIo);
}
