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

#include "eqinfo/prob_model.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "eqinfo/error.hpp"

namespace eqinfo {
namespace {

constexpr char kModelMagic[] = "EQIM";
constexpr std::uint16_t kModelVersion = 1;
constexpr unsigned kSymbolBits = 9;
constexpr unsigned kMassBits = 30;

void check_precision(unsigned precision, std::size_t alphabet) {
  if (precision < kMinPrecision || precision > kMaxPrecision) {
    throw Error(ErrorCode::kConfig, "precision must be in [" + std::to_string(kMinPrecision) +
                                        ", " + std::to_string(kMaxPrecision) + "]");
  }
  if (alphabet < 1 || alphabet > (std::size_t{1} << precision)) {
    throw Error(ErrorCode::kConfig, "alphabet of " + std::to_string(alphabet) +
                                        " symbols does not fit precision " +
                                        std::to_string(precision));
  }
}

}  // namespace

// --- QuantizedCdf ------------------------------------------------------------

QuantizedCdf::QuantizedCdf(std::vector<std::uint32_t> bounds, unsigned precision)
    : bounds_(std::move(bounds)), precision_(precision) {
  if (bounds_.size() < 2) throw Error(ErrorCode::kDomain, "CDF needs at least one symbol");
  if (bounds_.front() != 0 || bounds_.back() != (std::uint32_t{1} << precision)) {
    throw Error(ErrorCode::kDomain, "CDF must span [0, 2^precision]");
  }
  for (std::size_t i = 1; i < bounds_.size(); ++i) {
    if (bounds_[i] <= bounds_[i - 1]) {
      throw Error(ErrorCode::kDomain, "CDF bounds must be strictly increasing");
    }
  }
}

QuantizedCdf QuantizedCdf::from_masses(std::span<const std::uint64_t> masses,
                                       unsigned precision) {
  const std::size_t n = masses.size();
  check_precision(precision, n);
  const std::uint64_t target = std::uint64_t{1} << precision;

  std::uint64_t sum = 0;
  for (auto m : masses) sum += m;
  std::vector<std::uint64_t> scaled(masses.begin(), masses.end());
  if (sum == 0) {
    std::fill(scaled.begin(), scaled.end(), 1);
    sum = n;
  }
  // Keep mass * target within 64 bits.
  const unsigned headroom = 63 - precision;
  if (std::bit_width(sum) > headroom) {
    const unsigned shift = static_cast<unsigned>(std::bit_width(sum)) - headroom;
    sum = 0;
    for (auto& m : scaled) {
      m >>= shift;
      sum += m;
    }
    if (sum == 0) {
      std::fill(scaled.begin(), scaled.end(), 1);
      sum = n;
    }
  }

  std::vector<std::uint32_t> width(n);
  std::vector<std::uint64_t> remainder(n);
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t num = scaled[i] * target;
    width[i] = static_cast<std::uint32_t>(num / sum);
    remainder[i] = num % sum;
    assigned += width[i];
  }
  std::uint64_t deficit = target - assigned;
  if (deficit > 0) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto by_remainder = [&](std::uint32_t a, std::uint32_t b) {
      return remainder[a] != remainder[b] ? remainder[a] > remainder[b] : a < b;
    };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(deficit),
                      order.end(), by_remainder);
    for (std::uint64_t k = 0; k < deficit; ++k) ++width[order[k]];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (width[i] != 0) continue;
    const auto largest = std::max_element(width.begin(), width.end()) - width.begin();
    --width[static_cast<std::size_t>(largest)];
    width[i] = 1;
  }

  std::vector<std::uint32_t> bounds(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) bounds[i + 1] = bounds[i] + width[i];
  return QuantizedCdf(std::move(bounds), precision);
}

Symbol QuantizedCdf::find(std::uint32_t target) const {
  auto it = std::upper_bound(bounds_.begin() + 1, bounds_.end(), target);
  return static_cast<Symbol>(it - bounds_.begin() - 1);
}

// --- ModelState --------------------------------------------------------------

ModelState::ModelState(ModelPtr model) : model_(std::move(model)) {
  if (!model_) throw Error(ErrorCode::kConfig, "model state needs a model");
  if (model_->context_capacity() > kMaxOrder) {
    throw Error(ErrorCode::kConfig, "model context exceeds the maximum order");
  }
}

void ModelState::observe(Symbol symbol) {
  if (symbol >= model_->alphabet_size()) {
    throw Error(ErrorCode::kDomain, "symbol " + std::to_string(symbol) +
                                        " outside alphabet of " +
                                        std::to_string(model_->alphabet_size()));
  }
  const std::size_t capacity = model_->context_capacity();
  if (capacity == 0) return;
  if (length_ < capacity) {
    context_[length_++] = symbol;
  } else {
    std::copy(context_.begin() + 1, context_.begin() + static_cast<std::ptrdiff_t>(capacity),
              context_.begin());
    context_[capacity - 1] = symbol;
  }
}

// --- UniformModel / StaticModel ----------------------------------------------

UniformModel::UniformModel(std::size_t alphabet_size, unsigned precision)
    : alphabet_size_(alphabet_size) {
  check_precision(precision, alphabet_size);
  std::vector<std::uint64_t> masses(alphabet_size, 1);
  cdf_ = std::make_shared<const QuantizedCdf>(QuantizedCdf::from_masses(masses, precision));
  id_ = "uniform-a" + std::to_string(alphabet_size) + "-b" + std::to_string(precision);
  ByteWriter body;
  body.str(id_);
  digest_ = sha256(body.data());
}

StaticModel::StaticModel(std::vector<std::uint64_t> frequencies, unsigned precision) {
  cdf_ = std::make_shared<const QuantizedCdf>(QuantizedCdf::from_masses(frequencies, precision));
  id_ = "static-a" + std::to_string(frequencies.size()) + "-b" + std::to_string(precision);
  ByteWriter body;
  body.str(id_);
  for (auto f : frequencies) body.u64(f);
  digest_ = sha256(body.data());
}

// --- Context model parameters ------------------------------------------------

std::uint64_t pack_context(std::span<const Symbol> context) {
  std::uint64_t key = 0;
  for (Symbol s : context) key = (key << kSymbolBits) | s;
  return key;
}

std::vector<std::uint8_t> ContextModelParams::canonical_body() const {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(order));
  w.u8(static_cast<std::uint8_t>(precision));
  w.u16(static_cast<std::uint16_t>(alphabet_size));
  for (std::size_t j = 0; j < tables.size(); ++j) {
    w.u64(tables[j].size());
    for (const auto& [key, counts] : tables[j]) {
      for (std::size_t i = 0; i < j; ++i) {
        w.u16(static_cast<std::uint16_t>((key >> (kSymbolBits * (j - 1 - i))) & 0x1FF));
      }
      w.u32(static_cast<std::uint32_t>(counts.entries.size()));
      for (const auto& [sym, count] : counts.entries) {
        w.u16(sym);
        w.u32(count);
      }
    }
  }
  return w.take();
}

Digest ContextModelParams::digest() const { return sha256(canonical_body()); }

ContextModelParams fit_unigram(std::span<const Example> corpus, unsigned precision) {
  return fit_context_model(corpus, 0, precision);
}

ContextModelParams fit_context_model(std::span<const Example> corpus, unsigned order,
                                     unsigned precision) {
  if (order > kMaxOrder) {
    throw Error(ErrorCode::kConfig, "model order must be in [0, " + std::to_string(kMaxOrder) + "]");
  }
  check_precision(precision, kAlphabetSize);
  std::size_t symbols = 0;
  for (const auto& ex : corpus) symbols += ex.symbols.size();
  if (symbols == 0) throw Error(ErrorCode::kEmptyCorpus, "empty corpus");

  ContextModelParams params;
  params.order = order;
  params.precision = precision;
  params.alphabet_size = kAlphabetSize;
  params.tables.resize(order + 1);

  for (unsigned j = 0; j <= order; ++j) {
    std::unordered_map<std::uint64_t, std::uint32_t> counts;
    for (const auto& ex : corpus) {
      const auto& s = ex.symbols;
      for (std::size_t i = j; i < s.size(); ++i) {
        if (s[i] >= kAlphabetSize) {
          throw Error(ErrorCode::kDomain, "symbol out of range: " + std::to_string(s[i]));
        }
        const std::uint64_t ctx = pack_context({s.data() + i - j, j});
        ++counts[(ctx << kSymbolBits) | s[i]];
      }
    }
    std::vector<std::pair<std::uint64_t, std::uint32_t>> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    auto& table = params.tables[j];
    for (const auto& [key, count] : sorted) {
      auto& cc = table[key >> kSymbolBits];
      cc.total += count;
      cc.entries.emplace_back(static_cast<Symbol>(key & 0x1FF), count);
    }
  }
  return params;
}

// --- ContextModel ------------------------------------------------------------

struct ContextModel::Cache {
  static constexpr std::size_t kShards = 16;
  static constexpr std::size_t kShardCapacity = 1 << 13;

  struct Shard {
    std::mutex mu;
    std::unordered_map<std::uint64_t, std::shared_ptr<const QuantizedCdf>> map;
  };
  std::array<Shard, kShards> shards;
};

ContextModel::ContextModel(ContextModelParams params)
    : params_(std::move(params)), cache_(std::make_unique<Cache>()) {
  if (params_.order > kMaxOrder || params_.tables.size() != params_.order + 1) {
    throw Error(ErrorCode::kConfig, "inconsistent context model parameters");
  }
  check_precision(params_.precision, params_.alphabet_size);
  id_ = "ctx-k" + std::to_string(params_.order) + "-b" + std::to_string(params_.precision);
  digest_ = params_.digest();

  base_masses_.assign(params_.alphabet_size, 1);
  auto root = params_.tables[0].find(0);
  if (root != params_.tables[0].end()) {
    for (const auto& [sym, count] : root->second.entries) base_masses_[sym] += count;
  }
}

ContextModel::~ContextModel() = default;

std::shared_ptr<const QuantizedCdf> ContextModel::cdf(std::span<const Symbol> context) const {
  if (context.size() > params_.order) context = context.last(params_.order);
  const std::uint64_t key = (static_cast<std::uint64_t>(context.size()) << 48) | pack_context(context);
  auto& shard = cache_->shards[(key * 0x9E3779B97F4A7C15ull) >> 60];
  {
    std::lock_guard lock(shard.mu);
    auto it = shard.map.find(key);
    if (it != shard.map.end()) return it->second;
  }
  auto result = compute(context);
  std::lock_guard lock(shard.mu);
  if (shard.map.size() >= Cache::kShardCapacity) shard.map.clear();
  shard.map.emplace(key, result);
  return result;
}

std::shared_ptr<const QuantizedCdf> ContextModel::compute(std::span<const Symbol> context) const {
  std::vector<std::uint64_t> masses = base_masses_;
  std::uint64_t total = std::accumulate(masses.begin(), masses.end(), std::uint64_t{0});

  auto normalize = [&] {
    if (std::bit_width(total) <= kMassBits) return;
    const unsigned shift = static_cast<unsigned>(std::bit_width(total)) - kMassBits;
    total = 0;
    for (auto& m : masses) {
      m >>= shift;
      total += m;
    }
  };
  normalize();

  for (std::size_t j = 1; j <= context.size(); ++j) {
    const auto& table = params_.tables[j];
    auto it = table.find(pack_context(context.last(j)));
    if (it == table.end()) break;  // longer contexts are unseen as well
    const ContextCounts& cc = it->second;
    const std::uint64_t escape = kEscapeNum * cc.entries.size();
    std::uint64_t next_total = 0;
    for (auto& m : masses) {
      m *= escape;
      next_total += m;
    }
    const std::uint64_t scale = total * kEscapeDen;
    for (const auto& [sym, count] : cc.entries) {
      masses[sym] += count * scale;
      next_total += count * scale;
    }
    total = next_total;
    normalize();
  }
  return std::make_shared<const QuantizedCdf>(QuantizedCdf::from_masses(masses, params_.precision));
}

// --- Serialization -----------------------------------------------------------

std::vector<std::uint8_t> serialize_model(const ContextModelParams& params) {
  ByteWriter w;
  w.magic(std::string_view(kModelMagic, 4));
  w.u16(kModelVersion);
  w.bytes(params.canonical_body());
  return w.take();
}

ContextModelParams deserialize_model(std::span<const std::uint8_t> data) {
  ByteReader r(data, "model file");
  r.expect_magic(std::string_view(kModelMagic, 4));
  if (const auto version = r.u16(); version != kModelVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  ContextModelParams params;
  params.order = r.u8();
  params.precision = r.u8();
  params.alphabet_size = r.u16();
  if (params.order > kMaxOrder) r.fail("order out of range");
  if (params.alphabet_size != kAlphabetSize) r.fail("unsupported alphabet size");
  params.tables.resize(params.order + 1);
  for (unsigned j = 0; j <= params.order; ++j) {
    const std::uint64_t contexts = r.u64();
    std::uint64_t prev_key = 0;
    for (std::uint64_t c = 0; c < contexts; ++c) {
      std::array<Symbol, kMaxOrder> ctx{};
      for (unsigned i = 0; i < j; ++i) {
        ctx[i] = r.u16();
        if (ctx[i] >= kAlphabetSize) r.fail("context symbol out of range");
      }
      const std::uint64_t key = pack_context({ctx.data(), j});
      if (c > 0 && key <= prev_key) r.fail("contexts not in canonical order");
      prev_key = key;
      ContextCounts cc;
      const std::uint32_t entries = r.u32();
      if (entries > kAlphabetSize) r.fail("too many successor entries");
      for (std::uint32_t e = 0; e < entries; ++e) {
        const Symbol sym = r.u16();
        const std::uint32_t count = r.u32();
        if (sym >= kAlphabetSize || count == 0) r.fail("bad successor entry");
        if (!cc.entries.empty() && sym <= cc.entries.back().first) {
          r.fail("successors not in canonical order");
        }
        cc.entries.emplace_back(sym, count);
        cc.total += count;
      }
      params.tables[j].emplace(key, std::move(cc));
    }
  }
  if (r.remaining() != 0) r.fail("trailing bytes");
  return params;
}

void save_model(const std::filesystem::path& path, const ContextModelParams& params) {
  write_binary_file(path.string(), serialize_model(params));
}

ContextModelParams load_model(const std::filesystem::path& path) {
  return deserialize_model(read_binary_file(path.string()));
}

}  // namespace eqinfo
