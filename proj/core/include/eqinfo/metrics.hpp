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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqinfo/tokenizer.hpp"

namespace eqinfo {

// loss / ratio / ln 2. Throws kDomain for ratio <= 0 or negative loss.
double bits_per_byte(double loss_nats_per_token, double token_ratio);

// 2 * params / ratio, plus 2 * m1_params when a compressor model runs once per
// input byte. Embedding parameters are the caller's to exclude.
double flops_per_byte(double params, double token_ratio,
                      std::optional<double> m1_params = std::nullopt);

struct TrivialModelEval {
  double uniform_bpb = 0;
  double unigram_bpb = 0;
  double delta = 0;  // uniform - unigram, never negative
};

// Uniform model: loss ln(vocab). Unigram model: in-sample empirical token
// frequencies. Throws kInsufficientData for an empty sequence.
TrivialModelEval trivial_model_eval(std::span<const std::uint32_t> tokens,
                                    std::uint64_t vocab_size, double token_ratio);
TrivialModelEval trivial_model_eval(const TokenSequence& tokens, double token_ratio);

struct CompressionStats {
  std::string method;   // method name, or "bytes" for the identity tokenizer
  std::string variant;  // Equal-Info only, else empty
  unsigned window_bits = 0;
  unsigned token_bits = 8;
  std::uint64_t vocab_size = 256;
  std::uint64_t input_bytes = 0;    // EOS excluded
  std::uint64_t input_symbols = 0;  // EOS included
  std::uint64_t output_bits = 0;    // exact, before token padding
  std::uint64_t tokens = 0;
  double token_ratio = 0;  // input_symbols / tokens
  double bit_ratio = 0;    // 8 * input_symbols / (tokens * ceil(log2 vocab))
  double uniform_bpb = 0;
  double unigram_bpb = 0;
  double delta = 0;
  std::optional<double> params;
  std::optional<double> m1_params;
  std::optional<double> flops_per_byte;
};

// input_bytes = symbols - documents.
CompressionStats compute_stats(const TokenDataset& dataset,
                               std::optional<double> params = std::nullopt,
                               std::optional<double> m1_params = std::nullopt);

// Identity tokenizer baseline: one token per document byte, vocabulary 256.
CompressionStats byte_identity_stats(std::span<const Document> docs,
                                     std::optional<double> params = std::nullopt);

// Stable column order shared by the CSV and JSON reports.
const std::vector<std::string>& stats_columns();
std::string stats_csv(std::span<const CompressionStats> rows);
std::string stats_json(std::span<const CompressionStats> rows);

}  // namespace eqinfo
