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

#include "eqinfo/container.hpp"

#include <algorithm>

#include "eqinfo/error.hpp"

namespace eqinfo {
namespace {

constexpr char kContainerMagic[] = "EQIC";
constexpr std::uint16_t kContainerVersion = 1;

bool uses_model(Method method) { return method != Method::kGzip; }

}  // namespace

std::uint64_t CompressedCorpus::total_symbols() const {
  std::uint64_t n = 0;
  for (const auto& ex : examples) n += ex.symbol_count;
  return n;
}

std::uint64_t CompressedCorpus::total_bits() const {
  std::uint64_t n = 0;
  for (const auto& ex : examples) n += ex.bits.size();
  return n;
}

CompressedCorpus compress_corpus(std::span<const Example> examples, const MethodConfig& config,
                                 const ModelPtr& model, unsigned jobs) {
  config.validate();
  if (uses_model(config.method) && !model) {
    throw Error(ErrorCode::kConfig, std::string(method_name(config.method)) + " needs a model");
  }
  CompressedCorpus out;
  out.config = config;
  if (model) {
    out.config.model_id = model->model_id();
    out.config.params_digest = model->params_digest();
    out.precision = model->precision();
  } else {
    out.config.model_id.clear();
    out.config.params_digest = Digest{};
  }
  for (const Example& ex : examples) {
    out.document_count += static_cast<std::uint64_t>(std::count(ex.symbols.begin(), ex.symbols.end(), kEos));
  }
  out.examples.resize(examples.size());
  parallel_for(examples.size(), jobs, [&](std::size_t i) {
    const Example& ex = examples[i];
    CompressedExample& ce = out.examples[i];
    ce.symbol_count = ex.symbols.size();
    ce.tail = ex.tail;
    switch (config.method) {
      case Method::kAc:
      case Method::kStaticAc:
        ce.bits = compress_ac(ex.symbols, model);
        break;
      case Method::kEqualInfo: {
        const auto windows = compress_equal_info(ex.symbols, model, config.window_bits, config.variant);
        ce.window_count = static_cast<std::uint32_t>(windows.size());
        for (std::size_t w = 0; w < windows.size(); ++w) {
          ce.bits.append(windows[w].bits);
          if (windows[w].pinned) {
            ce.pinned.push_back({static_cast<std::uint32_t>(w), windows[w].symbol_count});
          }
        }
        break;
      }
      case Method::kGzip:
        ce.bits = compress_gzip(ex.symbols, config.strip_framing);
        break;
    }
  });
  return out;
}

std::vector<Window> split_windows(const CompressedExample& example, unsigned window_bits) {
  if (window_bits == 0 || example.bits.size() != std::size_t{example.window_count} * window_bits) {
    throw Error(ErrorCode::kCorruptWindow, "window payload does not match window count");
  }
  std::vector<Window> windows(example.window_count);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    windows[w].bits = example.bits.slice(w * window_bits, window_bits);
  }
  for (const auto& pin : example.pinned) {
    if (pin.window_index >= windows.size()) {
      throw Error(ErrorCode::kCorruptWindow, "pinned window index out of range");
    }
    windows[pin.window_index].pinned = true;
    windows[pin.window_index].symbol_count = pin.symbol_count;
  }
  return windows;
}

SymbolStream decompress_example(const CompressedExample& example, const MethodConfig& config,
                                const ModelPtr& model) {
  SymbolStream symbols;
  switch (config.method) {
    case Method::kAc:
    case Method::kStaticAc:
      symbols = decompress_ac(example.bits, model, example.symbol_count);
      break;
    case Method::kEqualInfo:
      symbols = decompress_equal_info(split_windows(example, config.window_bits), model,
                                      config.window_bits, config.variant);
      break;
    case Method::kGzip:
      symbols = decompress_gzip(example.bits, config.strip_framing);
      break;
  }
  if (symbols.size() != example.symbol_count) {
    throw Error(ErrorCode::kCorruptStream, "decoded " + std::to_string(symbols.size()) +
                                               " symbols, container records " +
                                               std::to_string(example.symbol_count));
  }
  return symbols;
}

void check_model(const CompressedCorpus& corpus, const ModelPtr& model) {
  if (!uses_model(corpus.config.method)) return;
  if (!model) throw Error(ErrorCode::kConfig, "decompression needs the compression model");
  if (model->params_digest() != corpus.config.params_digest ||
      model->model_id() != corpus.config.model_id) {
    throw Error(ErrorCode::kDigestMismatch,
                "model digest mismatch: container has " + corpus.config.model_id + " " +
                    to_hex(corpus.config.params_digest) + ", supplied model is " +
                    model->model_id() + " " + to_hex(model->params_digest()));
  }
}

std::vector<SymbolStream> decompress_corpus(const CompressedCorpus& corpus, const ModelPtr& model,
                                            unsigned jobs) {
  check_model(corpus, model);
  std::vector<SymbolStream> out(corpus.examples.size());
  parallel_for(corpus.examples.size(), jobs, [&](std::size_t i) {
    out[i] = decompress_example(corpus.examples[i], corpus.config, model);
  });
  return out;
}

std::vector<std::uint8_t> serialize_container(const CompressedCorpus& corpus) {
  const MethodConfig& c = corpus.config;
  ByteWriter w;
  w.magic(std::string_view(kContainerMagic, 4));
  w.u16(kContainerVersion);
  w.u8(static_cast<std::uint8_t>(c.method));
  w.u8(static_cast<std::uint8_t>(c.variant));
  w.u16(static_cast<std::uint16_t>(c.window_bits));
  w.u8(static_cast<std::uint8_t>(c.token_bits));
  w.u8(c.strip_framing ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(corpus.precision));
  w.str(c.model_id);
  w.bytes(c.params_digest);
  w.u64(corpus.document_count);
  w.u64(corpus.examples.size());
  for (const auto& ex : corpus.examples) {
    w.u64(ex.symbol_count);
    w.u8(ex.tail ? 1 : 0);
    w.u64(ex.bits.size());
    w.u32(ex.window_count);
    w.u32(static_cast<std::uint32_t>(ex.pinned.size()));
    for (const auto& pin : ex.pinned) {
      w.u32(pin.window_index);
      w.u32(pin.symbol_count);
    }
    w.bytes(ex.bits.to_bytes());
  }
  w.u32(crc32(w.data()));
  return w.take();
}

CompressedCorpus deserialize_container(std::span<const std::uint8_t> data) {
  if (data.size() < 4) throw Error(ErrorCode::kFormat, "container: too short");
  const auto body = data.first(data.size() - 4);
  ByteReader trailer(data.last(4), "container");
  if (trailer.u32() != crc32(body)) {
    throw Error(ErrorCode::kFormat, "container: checksum mismatch");
  }
  ByteReader r(body, "container");
  r.expect_magic(std::string_view(kContainerMagic, 4));
  if (const auto version = r.u16(); version != kContainerVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  CompressedCorpus corpus;
  MethodConfig& c = corpus.config;
  const auto method = r.u8();
  if (method > static_cast<std::uint8_t>(Method::kGzip)) r.fail("unknown method id");
  c.method = static_cast<Method>(method);
  const auto variant = r.u8();
  if (variant > 1) r.fail("unknown variant id");
  c.variant = static_cast<PaddingVariant>(variant);
  c.window_bits = r.u16();
  c.token_bits = r.u8();
  c.strip_framing = r.u8() != 0;
  corpus.precision = r.u8();
  c.model_id = r.str();
  const auto digest = r.bytes(32);
  std::copy(digest.begin(), digest.end(), c.params_digest.begin());
  try {
    c.validate();
  } catch (const Error& e) {
    r.fail(e.what());
  }
  corpus.document_count = r.u64();
  const std::uint64_t count = r.u64();
  for (std::uint64_t i = 0; i < count; ++i) {
    CompressedExample ex;
    ex.symbol_count = r.u64();
    ex.tail = r.u8() != 0;
    const std::uint64_t bit_length = r.u64();
    ex.window_count = r.u32();
    const std::uint32_t pins = r.u32();
    if (pins > ex.window_count) r.fail("more pinned windows than windows");
    for (std::uint32_t p = 0; p < pins; ++p) {
      PinnedCount pin;
      pin.window_index = r.u32();
      pin.symbol_count = r.u32();
      ex.pinned.push_back(pin);
    }
    if (bit_length / 8 > r.remaining()) r.fail("payload exceeds container size");
    ex.bits = BitStream::from_bytes(r.bytes((bit_length + 7) / 8), bit_length);
    corpus.examples.push_back(std::move(ex));
  }
  if (r.remaining() != 0) r.fail("trailing bytes");
  return corpus;
}

void save_container(const std::filesystem::path& path, const CompressedCorpus& corpus) {
  write_binary_file(path.string(), serialize_container(corpus));
}

CompressedCorpus load_container(const std::filesystem::path& path) {
  return deserialize_container(read_binary_file(path.string()));
}

}  // namespace eqinfo
