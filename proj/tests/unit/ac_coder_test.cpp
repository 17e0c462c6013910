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

#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "eqinfo/ac_coder.hpp"
#include "eqinfo/error.hpp"
#include "test_support.hpp"

namespace eqinfo {
namespace {

using boost::multiprecision::cpp_int;

// Exact interval of a symbol sequence under a model: [low, low + width) / 2^(beta n).
struct ExactInterval {
  cpp_int low = 0;
  cpp_int width = 1;
  cpp_int denom = 1;
};

ExactInterval exact_interval(std::span<const Symbol> x, const ModelPtr& model) {
  ExactInterval iv;
  ModelState st(model);
  for (const Symbol s : x) {
    const auto cdf = st.next_cdf();
    iv.low = iv.low * cdf->total() + iv.width * cdf->lower(s);
    iv.width *= cdf->width(s);
    iv.denom *= cdf->total();
    st.observe(s);
  }
  return iv;
}

// Shortest k such that some dyadic block [j, j + 1) / 2^k lies inside the interval.
unsigned minimal_dyadic_length(const ExactInterval& iv) {
  for (unsigned k = 0;; ++k) {
    const cpp_int scale = cpp_int(1) << k;
    const cpp_int j = (iv.low * scale + iv.denom - 1) / iv.denom;
    if ((j + 1) * iv.denom <= (iv.low + iv.width) * scale) return k;
  }
}

// length <= -log2(width / denom) + 2, evaluated exactly.
bool within_two_bits(std::size_t length, const ExactInterval& iv) {
  if (length < 2) return true;
  return iv.width * (cpp_int(1) << (length - 2)) <= iv.denom;
}

// ceil(-log2(width / denom)).
unsigned ceil_information(const ExactInterval& iv) {
  unsigned k = 0;
  while (iv.width * (cpp_int(1) << k) < iv.denom) ++k;
  return k;
}

BitStream encode_fresh(std::span<const Symbol> x, const ModelPtr& model) {
  ModelState st(model);
  return encode(x, st);
}

std::vector<Symbol> decode_fresh(const BitStream& bits, const ModelPtr& model, std::size_t n) {
  ModelState st(model);
  return decode(bits, st, n);
}

TEST(ArithmeticCoder, DyadicBytesAreTheirOwnBits) {
  auto model = std::make_shared<UniformModel>(256);
  const std::vector<Symbol> bytes = {0x00, 0xB9, 0xFF, 0x01, 0x80, 0x7F};
  const BitStream bits = encode_fresh(bytes, model);
  const std::vector<std::uint8_t> raw(bytes.begin(), bytes.end());
  EXPECT_EQ(bits, BitStream::from_bytes(raw, 8 * raw.size()));
  EXPECT_EQ(decode_fresh(bits, model, bytes.size()), bytes);
}

TEST(ArithmeticCoder, DyadicIdentityOnRandomBytes) {
  std::mt19937_64 rng(21);
  auto model = std::make_shared<UniformModel>(256);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = testing::random_symbols(rng, rng() % 600, 256);
    const std::vector<std::uint8_t> raw(x.begin(), x.end());
    ASSERT_EQ(encode_fresh(x, model), BitStream::from_bytes(raw, 8 * raw.size()));
  }
}

TEST(ArithmeticCoder, EmptyInput) {
  auto model = std::make_shared<UniformModel>();
  const BitStream bits = encode_fresh({}, model);
  EXPECT_TRUE(bits.empty());
  EXPECT_TRUE(decode_fresh(bits, model, 0).empty());
}

TEST(ArithmeticCoder, RandomRoundtrip) {
  std::mt19937_64 rng(7);
  std::vector<std::uint64_t> freqs(kAlphabetSize);
  for (auto& f : freqs) f = rng() % 1000;
  const std::vector<ModelPtr> models = {
      std::make_shared<StaticModel>(freqs), std::make_shared<UniformModel>(),
      testing::trained_model(2)};
  for (const auto& model : models) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto x = testing::random_symbols(rng, 1 + rng() % 512);
      ASSERT_EQ(decode_fresh(encode_fresh(x, model), model, x.size()), x)
          << model->model_id() << " trial " << trial;
    }
  }
}

TEST(ArithmeticCoder, RealTextRoundtripAtEveryPrecision) {
  const auto ex = testing::eval_examples(3, 2048);
  for (const unsigned beta : {9u, 12u, 14u, 16u, 20u, 24u}) {
    auto model = std::make_shared<ContextModel>(fit_context_model(ex, 2, beta));
    for (const auto& e : ex) {
      ASSERT_EQ(decode_fresh(encode_fresh(e.symbols, model), model, e.symbols.size()), e.symbols)
          << "precision " << beta;
    }
  }
}

TEST(ArithmeticCoder, EmittedBitsNeverChange) {
  auto model = testing::trained_model(2);
  const auto ex = testing::eval_examples(1, 3000);
  ArithmeticEncoder enc;
  ModelState st(model);
  BitStream previous;
  for (const Symbol s : ex[0].symbols) {
    enc.encode(*st.next_cdf(), s);
    st.observe(s);
    const BitStream& now = enc.emitted();
    ASSERT_GE(now.size(), previous.size());
    ASSERT_EQ(now.slice(0, previous.size()), previous);
    ASSERT_EQ(enc.finish().slice(0, now.size()), now);
    ASSERT_EQ(enc.finish().size(), enc.finished_length());
    previous = now;
  }
}

TEST(ArithmeticCoder, TruncatedStream) {
  auto model = std::make_shared<UniformModel>(256);
  const std::vector<Symbol> x = {1, 2, 3, 4};
  BitStream bits = encode_fresh(x, model);
  bits.resize(bits.size() - 9);
  try {
    decode_fresh(bits, model, x.size());
    FAIL() << "expected truncated stream";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTruncatedStream);
  }
}

TEST(ArithmeticCoder, ModelMismatchIsDetected) {
  const auto ex = testing::eval_examples(4, 1024);
  auto params = fit_context_model(ex, 2);
  auto a = std::make_shared<ContextModel>(params);
  // Same model with a single count bumped.
  auto& root = params.tables[0].at(0);
  root.entries[0].second += 1;
  root.total += 1;
  auto b = std::make_shared<ContextModel>(params);
  ASSERT_NE(a->params_digest(), b->params_digest());
  int detected = 0;
  for (const auto& e : ex) {
    const BitStream bits = encode_fresh(e.symbols, a);
    try {
      const auto out = decode_fresh(bits, b, e.symbols.size());
      // Any successful decode must still be exact.
      EXPECT_EQ(out, e.symbols);
    } catch (const Error& err) {
      EXPECT_TRUE(err.code() == ErrorCode::kCorruptStream || err.code() == ErrorCode::kTruncatedStream);
      ++detected;
    }
  }
  EXPECT_GT(detected, 0);
}

TEST(ArithmeticCoder, OutOfAlphabetSymbol) {
  auto model = std::make_shared<UniformModel>(256);
  const std::vector<Symbol> x = {256};
  EXPECT_THROW(encode_fresh(x, model), Error);
}

TEST(ArithmeticCoder, ExhaustiveFourSymbolNearOptimality) {
  const std::vector<std::vector<std::uint64_t>> panels = {{4, 3, 2, 1}, {10, 5, 2, 1}, {1000, 100, 10, 1}};
  for (const auto& f : panels) {
    auto model = std::make_shared<StaticModel>(f);
    for (unsigned len = 0; len <= 6; ++len) {
      std::vector<Symbol> x(len);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * len)); ++code) {
        for (unsigned i = 0; i < len; ++i) x[i] = static_cast<Symbol>((code >> (2 * i)) & 3);
        const auto iv = exact_interval(x, model);
        const BitStream bits = encode_fresh(x, model);
        ASSERT_TRUE(within_two_bits(bits.size(), iv)) << "len " << len << " code " << code;
        const int gap = static_cast<int>(bits.size()) - static_cast<int>(minimal_dyadic_length(iv));
        ASSERT_LE(std::abs(gap), 1) << "len " << len << " code " << code;
      }
    }
  }
}

TEST(ArithmeticCoder, EnglishOrderTwoMatchesInformationBound) {
  // Length stays within one bit of ceil(-log2 p) + 1 on short English spans.
  auto model = testing::trained_model(2);
  const auto ex = testing::eval_examples(2, 10240);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const auto& s = ex[trial % 2].symbols;
    const std::size_t len = 1 + rng() % 32;
    const std::size_t at = rng() % (s.size() - len);
    const std::span<const Symbol> x(s.data() + at, len);
    const auto iv = exact_interval(x, model);
    const BitStream bits = encode_fresh(x, model);
    const int bound = static_cast<int>(ceil_information(iv)) + 1;
    ASSERT_LE(std::abs(static_cast<int>(bits.size()) - bound), 1) << "trial " << trial;
    ASSERT_TRUE(within_two_bits(bits.size(), iv)) << "trial " << trial;
  }
}

TEST(ArithmeticCoder, SkewedCellsCostUpToOneBitEach) {
  // Cells of one quantization unit lose precision in the precision + 2 bit
  // registers; the loss is bounded by one bit per such symbol.
  auto model = std::make_shared<StaticModel>(std::vector<std::uint64_t>{1, 1, 1, 16381});
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 3000; ++trial) {
    auto x = testing::random_symbols(rng, 1 + rng() % 32, 4);
    const auto iv = exact_interval(x, model);
    const auto rare = static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](Symbol s) { return s < 3; }));
    const BitStream bits = encode_fresh(x, model);
    ASSERT_TRUE(within_two_bits(bits.size() > rare ? bits.size() - rare : 0, iv)) << "trial " << trial;
  }
}

}  // namespace
}  // namespace eqinfo
