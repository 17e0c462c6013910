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

#include "eqinfo/error.hpp"
#include "eqinfo/seq2seq.hpp"
#include "test_support.hpp"

namespace eqinfo {
namespace {

TEST(Seq2Seq, DyadicModelTargetsAreShiftedBytes) {
  auto model = std::make_shared<UniformModel>(256);
  const std::vector<Symbol> x{'h', 'i', 0, 255};
  const auto r = make_seq2seq(x, model, 8, Seq2SeqDirection::kCompress);
  EXPECT_EQ(r.inputs, (std::vector<std::uint32_t>{'h', 'i', 0, 255}));
  EXPECT_EQ(r.targets, (std::vector<std::uint32_t>{256 + 'h', 256 + 'i', 256, 511}));
  EXPECT_EQ(r.bit_length, 32u);
}

TEST(Seq2Seq, IdRangesNeverCollide) {
  const auto model = testing::trained_model(2);
  const auto ex = testing::eval_examples(2, 1024);
  for (const auto& e : ex) {
    const auto c = make_seq2seq(e.symbols, model, 8, Seq2SeqDirection::kCompress);
    for (auto v : c.inputs) ASSERT_LT(v, kAlphabetSize);
    for (auto v : c.targets) ASSERT_GE(v, kAlphabetSize);
    const auto d = make_seq2seq(e.symbols, model, 8, Seq2SeqDirection::kDecompress);
    for (auto v : d.inputs) ASSERT_LT(v, 256u);
    for (auto v : d.targets) ASSERT_GE(v, 256u);
  }
}

TEST(Seq2Seq, ByteLmSharesDecompressTargets) {
  const auto model = testing::trained_model(2);
  const auto e = testing::eval_examples(1, 512)[0];
  const auto d = make_seq2seq(e.symbols, model, 16, Seq2SeqDirection::kDecompress);
  const auto lm = byte_lm_control(d);
  EXPECT_EQ(lm.direction, Seq2SeqDirection::kByteLm);
  EXPECT_TRUE(lm.inputs.empty());
  EXPECT_EQ(lm.targets, d.targets);
  EXPECT_EQ(make_seq2seq(e.symbols, model, 16, Seq2SeqDirection::kByteLm), lm);
}

TEST(Seq2Seq, RecoverSymbolsBothDirections) {
  const auto model = testing::trained_model(2);
  const auto e = testing::eval_examples(1, 700)[0];
  for (const unsigned n : {8u, 16u}) {
    for (const auto dir : {Seq2SeqDirection::kCompress, Seq2SeqDirection::kDecompress}) {
      const auto r = make_seq2seq(e.symbols, model, n, dir);
      EXPECT_EQ(recover_symbols(r, model), e.symbols);
    }
  }
}

TEST(Seq2Seq, RecoverDetectsTamperedTargets) {
  const auto model = testing::trained_model(2);
  const auto e = testing::eval_examples(1, 300)[0];
  auto r = make_seq2seq(e.symbols, model, 8, Seq2SeqDirection::kDecompress);
  r.targets[10] = r.targets[10] == 256 + 'a' ? 256 + 'b' : 256 + 'a';
  EXPECT_THROW(recover_symbols(r, model), Error);
}

TEST(Seq2Seq, JsonRoundtrip) {
  const auto model = testing::trained_model(1);
  const auto e = testing::eval_examples(1, 200)[0];
  for (const auto dir : {Seq2SeqDirection::kCompress, Seq2SeqDirection::kDecompress,
                         Seq2SeqDirection::kByteLm}) {
    const auto r = make_seq2seq(e.symbols, model, 8, dir);
    const std::string line = seq2seq_record_json(r);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(parse_seq2seq_record(line), r);
  }
  EXPECT_THROW(parse_seq2seq_record("{\"schema_version\": 9}"), Error);
}

}  // namespace
}  // namespace eqinfo
