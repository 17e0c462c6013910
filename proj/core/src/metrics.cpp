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

#include "eqinfo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "eqinfo/error.hpp"

namespace eqinfo {

double bits_per_byte(double loss_nats_per_token, double token_ratio) {
  if (!(token_ratio > 0)) throw Error(ErrorCode::kDomain, "token ratio must be positive");
  if (loss_nats_per_token < 0) throw Error(ErrorCode::kDomain, "loss must be non-negative");
  return loss_nats_per_token / token_ratio / std::numbers::ln2;
}

double flops_per_byte(double params, double token_ratio, std::optional<double> m1_params) {
  if (!(params > 0)) throw Error(ErrorCode::kDomain, "parameter count must be positive");
  if (!(token_ratio > 0)) throw Error(ErrorCode::kDomain, "token ratio must be positive");
  double flops = 2 * params / token_ratio;
  if (m1_params) flops += 2 * *m1_params;
  return flops;
}

TrivialModelEval trivial_model_eval(std::span<const std::uint32_t> tokens,
                                    std::uint64_t vocab_size, double token_ratio) {
  if (tokens.empty()) throw Error(ErrorCode::kInsufficientData, "trivial model of an empty token stream");
  std::vector<std::uint64_t> counts(vocab_size, 0);
  for (const std::uint32_t t : tokens) {
    if (t >= vocab_size) throw Error(ErrorCode::kDomain, "token outside vocabulary");
    ++counts[t];
  }
  // KL(empirical || uniform) in nats; c * V / n is exactly 1 for uniform counts.
  const double n = static_cast<double>(tokens.size());
  double kl = 0;
  for (const std::uint64_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    kl += p * std::log(static_cast<double>(c) * static_cast<double>(vocab_size) / n);
  }
  kl = std::max(kl, 0.0);
  TrivialModelEval out;
  const double uniform_loss = std::log(static_cast<double>(vocab_size));
  out.uniform_bpb = bits_per_byte(uniform_loss, token_ratio);
  out.delta = kl / token_ratio / std::numbers::ln2;
  out.unigram_bpb = out.uniform_bpb - out.delta;
  return out;
}

TrivialModelEval trivial_model_eval(const TokenSequence& tokens, double token_ratio) {
  return trivial_model_eval(tokens.tokens, tokens.vocab_size(), token_ratio);
}

CompressionStats compute_stats(const TokenDataset& dataset,
                               std::optional<double> params, std::optional<double> m1_params) {
  CompressionStats s;
  const MethodConfig& c = dataset.config;
  s.method = std::string(method_name(c.method));
  if (c.method == Method::kEqualInfo) {
    s.variant = std::string(variant_name(c.variant));
    s.window_bits = c.window_bits;
  }
  s.token_bits = dataset.bit_depth;
  s.vocab_size = std::uint64_t{1} << dataset.bit_depth;
  s.input_symbols = dataset.total_symbols();
  s.input_bytes = s.input_symbols - std::min(s.input_symbols, dataset.document_count);
  s.output_bits = dataset.total_bits();
  s.tokens = dataset.tokens.size();
  s.token_ratio = token_compression_ratio(s.input_symbols, s.tokens);
  s.bit_ratio = bit_ratio_from_tokens(s.input_symbols, s.tokens, s.vocab_size);
  const TrivialModelEval t = trivial_model_eval(dataset.tokens, s.vocab_size, s.token_ratio);
  s.uniform_bpb = t.uniform_bpb;
  s.unigram_bpb = t.unigram_bpb;
  s.delta = t.delta;
  s.params = params;
  s.m1_params = m1_params;
  if (params) s.flops_per_byte = flops_per_byte(*params, s.token_ratio, m1_params);
  return s;
}

CompressionStats byte_identity_stats(std::span<const Document> docs, std::optional<double> params) {
  std::vector<std::uint32_t> tokens;
  for (const auto& d : docs) {
    for (const char ch : d.bytes) tokens.push_back(static_cast<unsigned char>(ch));
  }
  CompressionStats s;
  s.method = "bytes";
  s.token_bits = 8;
  s.vocab_size = 256;
  s.input_bytes = tokens.size();
  s.input_symbols = tokens.size();
  s.output_bits = 8 * tokens.size();
  s.tokens = tokens.size();
  s.token_ratio = 1.0;
  s.bit_ratio = 1.0;
  const TrivialModelEval t = trivial_model_eval(tokens, 256, 1.0);
  s.uniform_bpb = t.uniform_bpb;
  s.unigram_bpb = t.unigram_bpb;
  s.delta = t.delta;
  s.params = params;
  if (params) s.flops_per_byte = flops_per_byte(*params, 1.0);
  return s;
}

const std::vector<std::string>& stats_columns() {
  static const std::vector<std::string> columns = {
      "method",      "variant",     "window_bits", "token_bits",  "vocab_size",
      "input_bytes", "input_symbols", "output_bits", "tokens",    "token_ratio",
      "bit_ratio",   "uniform_bpb", "unigram_bpb", "delta",       "params",
      "m1_params",   "flops_per_byte"};
  return columns;
}

namespace {

nlohmann::ordered_json to_json(const CompressionStats& s) {
  nlohmann::ordered_json j;
  j["method"] = s.method;
  j["variant"] = s.variant;
  j["window_bits"] = s.window_bits;
  j["token_bits"] = s.token_bits;
  j["vocab_size"] = s.vocab_size;
  j["input_bytes"] = s.input_bytes;
  j["input_symbols"] = s.input_symbols;
  j["output_bits"] = s.output_bits;
  j["tokens"] = s.tokens;
  j["token_ratio"] = s.token_ratio;
  j["bit_ratio"] = s.bit_ratio;
  j["uniform_bpb"] = s.uniform_bpb;
  j["unigram_bpb"] = s.unigram_bpb;
  j["delta"] = s.delta;
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  j["params"] = opt(s.params);
  j["m1_params"] = opt(s.m1_params);
  j["flops_per_byte"] = opt(s.flops_per_byte);
  return j;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string stats_csv(std::span<const CompressionStats> rows) {
  std::ostringstream os;
  const auto& cols = stats_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? fixed(*v, 0) : std::string(); };
  for (const auto& s : rows) {
    os << s.method << ',' << s.variant << ',' << s.window_bits << ',' << s.token_bits << ','
       << s.vocab_size << ',' << s.input_bytes << ',' << s.input_symbols << ',' << s.output_bits
       << ',' << s.tokens << ',' << fixed(s.token_ratio, 6) << ',' << fixed(s.bit_ratio, 6) << ','
       << fixed(s.uniform_bpb, 6) << ',' << fixed(s.unigram_bpb, 6) << ',' << fixed(s.delta, 6)
       << ',' << opt(s.params) << ',' << opt(s.m1_params) << ',' << opt(s.flops_per_byte) << '\n';
  }
  return os.str();
}

std::string stats_json(std::span<const CompressionStats> rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : rows) arr.push_back(to_json(s));
  return arr.dump(2) + "\n";
}

}  // namespace eqinfo
