// Copyright 2026 The eqinfo Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

#include "eqinfo/error.hpp"
#include "eqinfo/metrics.hpp"

namespace eqinfo {
namespace {

TEST(BitsPerByte, UniformLossRows) {
  const double loss = std::log(256.0);
  EXPECT_NEAR(bits_per_byte(loss, 1), 8.0, 1e-12);
  EXPECT_NEAR(bits_per_byte(loss, 5.49), 1.457, 5e-4);
  EXPECT_NEAR(bits_per_byte(loss, 2.66), 3.008, 5e-4);
  EXPECT_NEAR(bits_per_byte(loss, 3.49), 2.292, 5e-4);
  EXPECT_NEAR(bits_per_byte(loss, 4.16), 1.923, 5e-4);
  EXPECT_NEAR(bits_per_byte(loss, 4.61), 1.735, 5e-4);
}

TEST(FlopsPerByte, Rows) {
  EXPECT_NEAR(flops_per_byte(25e6, 1) / 1e6, 50.0, 1e-9);
  EXPECT_NEAR(flops_per_byte(25e6, 5.49, 3e6) / 1e6, 15.11, 5e-3);
  EXPECT_NEAR(flops_per_byte(25e6, 2.66, 3e6) / 1e6, 24.80, 5e-3);
  EXPECT_NEAR(flops_per_byte(25e6, 5.31, 3e6) / 1e6, 15.42, 5e-3);
}

TEST(FlopsPerByte, LinearInInverseRatio) {
  const double a = flops_per_byte(1e6, 2);
  const double b = flops_per_byte(1e6, 4);
  EXPECT_NEAR(a, 2 * b, 1e-6);
}

TEST(TrivialModel, SmallOracle) {
  const std::vector<std::uint32_t> tokens{0, 0, 1, 2};
  const auto t = trivial_model_eval(tokens, 4, 2.0);
  EXPECT_NEAR(t.uniform_bpb, 1.0, 1e-12);
  EXPECT_NEAR(t.delta, 0.25, 1e-12);
  EXPECT_NEAR(t.unigram_bpb, 0.75, 1e-12);
}

TEST(TrivialModel, UniformCountsGiveZeroDelta) {
  std::vector<std::uint32_t> tokens;
  for (int r = 0; r < 3; ++r) {
    for (std::uint32_t v = 0; v < 256; ++v) tokens.push_back(v);
  }
  const auto t = trivial_model_eval(tokens, 256, 1.0);
  EXPECT_NEAR(t.delta, 0.0, 1e-12);
  EXPECT_GE(t.delta, 0.0);
}

TEST(TrivialModel, EmptyInput) {
  try {
    trivial_model_eval(std::vector<std::uint32_t>{}, 256, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

TEST(StatsReport, ByteIdentityRow) {
  const std::vector<Document> docs{{"abab"}, {"cc"}};
  const auto s = byte_identity_stats(docs, 25e6);
  EXPECT_EQ(s.method, "bytes");
  EXPECT_EQ(s.input_bytes, 6u);
  EXPECT_EQ(s.input_symbols, 6u);
  EXPECT_DOUBLE_EQ(s.token_ratio, 1.0);
  EXPECT_NEAR(s.uniform_bpb, 8.0, 1e-12);
  ASSERT_TRUE(s.flops_per_byte);
  EXPECT_NEAR(*s.flops_per_byte, 50e6, 1e-3);
}

TEST(StatsReport, CsvAndJsonShareColumns) {
  const std::vector<Document> docs{{"hello"}};
  const std::vector<CompressionStats> rows{byte_identity_stats(docs)};
  const std::string csv = stats_csv(rows);
  const std::string header = csv.substr(0, csv.find('\n'));
  std::string expect;
  for (const auto& c : stats_columns()) expect += (expect.empty() ? "" : ",") + c;
  EXPECT_EQ(header, expect);
  const auto j = nlohmann::json::parse(stats_json(rows));
  ASSERT_TRUE(j.is_array());
  for (const auto& c : stats_columns()) EXPECT_TRUE(j[0].contains(c)) << c;
  EXPECT_TRUE(j[0]["params"].is_null());
}

}  // namespace
}  // namespace eqinfo
