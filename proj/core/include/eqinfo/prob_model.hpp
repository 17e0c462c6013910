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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eqinfo/byte_io.hpp"
#include "eqinfo/corpus.hpp"

namespace eqinfo {

// Coder precision in bits; the quantized CDF has a total mass of 2^precision.
inline constexpr unsigned kDefaultPrecision = 14;
inline constexpr unsigned kMinPrecision = 9;
inline constexpr unsigned kMaxPrecision = 24;
inline constexpr std::size_t kMaxOrder = 4;

// Cumulative distribution over an alphabet, quantized to integers summing to
// 2^precision. bounds[0] == 0, bounds.back() == 2^precision and every symbol
// owns at least one unit.
class QuantizedCdf {
 public:
  QuantizedCdf(std::vector<std::uint32_t> bounds, unsigned precision);

  // Largest-remainder apportionment of `masses` onto 2^precision units, then
  // every empty cell takes one unit from the currently largest cell (lowest
  // index on ties). Masses need not be normalized; an all-zero input is
  // treated as uniform.
  static QuantizedCdf from_masses(std::span<const std::uint64_t> masses,
                                  unsigned precision);

  std::size_t alphabet_size() const { return bounds_.size() - 1; }
  unsigned precision() const { return precision_; }
  std::uint32_t total() const { return bounds_.back(); }
  std::uint32_t lower(Symbol s) const { return bounds_[s]; }
  std::uint32_t upper(Symbol s) const { return bounds_[s + 1u]; }
  std::uint32_t width(Symbol s) const { return bounds_[s + 1u] - bounds_[s]; }
  // The symbol whose cell [lower, upper) contains `target` (< total()).
  Symbol find(std::uint32_t target) const;
  std::span<const std::uint32_t> bounds() const { return bounds_; }

  bool operator==(const QuantizedCdf&) const = default;

 private:
  std::vector<std::uint32_t> bounds_;
  unsigned precision_;
};

class ProbabilityModel {
 public:
  virtual ~ProbabilityModel() = default;

  virtual std::size_t alphabet_size() const = 0;
  virtual unsigned precision() const = 0;
  // Number of most recent symbols the model conditions on.
  virtual std::size_t context_capacity() const = 0;
  // `context` holds at most context_capacity() symbols, oldest first.
  virtual std::shared_ptr<const QuantizedCdf> cdf(std::span<const Symbol> context) const = 0;
  virtual const std::string& model_id() const = 0;
  virtual const Digest& params_digest() const = 0;
};

using ModelPtr = std::shared_ptr<const ProbabilityModel>;

// Per-stream conditioning state over an immutable shared model.
class ModelState {
 public:
  explicit ModelState(ModelPtr model);

  std::shared_ptr<const QuantizedCdf> next_cdf() const {
    return model_->cdf(context());
  }
  // Throws kDomain for symbols outside the model's alphabet.
  void observe(Symbol symbol);
  void reset() { length_ = 0; }

  std::span<const Symbol> context() const { return {context_.data(), length_}; }
  const ProbabilityModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }

 private:
  ModelPtr model_;
  std::array<Symbol, kMaxOrder> context_{};
  std::size_t length_ = 0;
};

// Equal mass on every symbol. With alphabet 256 and any precision >= 8 every
// cell is an exact power of two ("dyadic").
class UniformModel final : public ProbabilityModel {
 public:
  explicit UniformModel(std::size_t alphabet_size = kAlphabetSize,
                        unsigned precision = kDefaultPrecision);

  std::size_t alphabet_size() const override { return alphabet_size_; }
  unsigned precision() const override { return cdf_->precision(); }
  std::size_t context_capacity() const override { return 0; }
  std::shared_ptr<const QuantizedCdf> cdf(std::span<const Symbol>) const override { return cdf_; }
  const std::string& model_id() const override { return id_; }
  const Digest& params_digest() const override { return digest_; }

 private:
  std::size_t alphabet_size_;
  std::shared_ptr<const QuantizedCdf> cdf_;
  std::string id_;
  Digest digest_;
};

// Context-free model over explicit non-negative frequencies.
class StaticModel final : public ProbabilityModel {
 public:
  StaticModel(std::vector<std::uint64_t> frequencies,
              unsigned precision = kDefaultPrecision);

  std::size_t alphabet_size() const override { return cdf_->alphabet_size(); }
  unsigned precision() const override { return cdf_->precision(); }
  std::size_t context_capacity() const override { return 0; }
  std::shared_ptr<const QuantizedCdf> cdf(std::span<const Symbol>) const override { return cdf_; }
  const std::string& model_id() const override { return id_; }
  const Digest& params_digest() const override { return digest_; }

 private:
  std::shared_ptr<const QuantizedCdf> cdf_;
  std::string id_;
  Digest digest_;
};

// Frozen n-gram counts for orders 0..order over the 257-symbol alphabet.
struct ContextCounts {
  std::uint64_t total = 0;
  // (symbol, count) pairs sorted by symbol, counts > 0.
  std::vector<std::pair<Symbol, std::uint32_t>> entries;
};

struct ContextModelParams {
  unsigned order = 0;
  unsigned precision = kDefaultPrecision;
  std::size_t alphabet_size = kAlphabetSize;
  // tables[j] maps a packed length-j context to its successor counts.
  std::vector<std::map<std::uint64_t, ContextCounts>> tables;

  // Canonical serialized body (everything after magic and version).
  std::vector<std::uint8_t> canonical_body() const;
  Digest digest() const;
};

std::uint64_t pack_context(std::span<const Symbol> context);

// Order-0 counts over every symbol of the corpus (EOS included).
ContextModelParams fit_unigram(std::span<const Example> corpus,
                               unsigned precision = kDefaultPrecision);
ContextModelParams fit_context_model(std::span<const Example> corpus, unsigned order,
                                     unsigned precision = kDefaultPrecision);

// Interpolated back-off model:
//   P_0(s) = (c_0(s) + 1) / (n_0 + |A|)
//   P_j(s) = (c_j(s) + e_j * P_{j-1}(s)) / (n_j + e_j),  e_j = u_j * kEscapeNum / kEscapeDen
// where u_j is the number of distinct successors of the length-j context.
// A context never seen in training contributes nothing (P_j = P_{j-1}). All
// arithmetic is integer, so CDFs are identical on every platform.
class ContextModel final : public ProbabilityModel {
 public:
  // Escape weight as a fixed rational.
  static constexpr std::uint64_t kEscapeNum = 1;
  static constexpr std::uint64_t kEscapeDen = 2;

  explicit ContextModel(ContextModelParams params);
  ~ContextModel() override;

  std::size_t alphabet_size() const override { return params_.alphabet_size; }
  unsigned precision() const override { return params_.precision; }
  std::size_t context_capacity() const override { return params_.order; }
  std::shared_ptr<const QuantizedCdf> cdf(std::span<const Symbol> context) const override;
  const std::string& model_id() const override { return id_; }
  const Digest& params_digest() const override { return digest_; }

  const ContextModelParams& params() const { return params_; }

 private:
  struct Cache;

  std::shared_ptr<const QuantizedCdf> compute(std::span<const Symbol> context) const;

  ContextModelParams params_;
  std::string id_;
  Digest digest_;
  std::vector<std::uint64_t> base_masses_;
  std::unique_ptr<Cache> cache_;
};

// EQIM model file: magic "EQIM", u16 version, canonical body.
std::vector<std::uint8_t> serialize_model(const ContextModelParams& params);
ContextModelParams deserialize_model(std::span<const std::uint8_t> data);
void save_model(const std::filesystem::path& path, const ContextModelParams& params);
ContextModelParams load_model(const std::filesystem::path& path);

}  // namespace eqinfo
