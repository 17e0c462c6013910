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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqinfo/bitstream.hpp"
#include "eqinfo/byte_io.hpp"
#include "eqinfo/prob_model.hpp"

namespace eqinfo {

enum class Method : std::uint8_t {
  kAc = 0,        // one arithmetic-coded stream per example
  kStaticAc = 1,  // same, with a context-free unigram model
  kEqualInfo = 2,
  kGzip = 3,
};

enum class PaddingVariant : std::uint8_t {
  // Pack the most symbols that fit; trailing zeros may belong to a symbol.
  kMaxFill = 0,
  // Never add a symbol that leaves the padded window bits unchanged.
  kZeroAvoid = 1,
};

std::string_view method_name(Method method);
Method parse_method(std::string_view name);
std::string_view variant_name(PaddingVariant variant);
PaddingVariant parse_variant(std::string_view name);

struct MethodConfig {
  Method method = Method::kAc;
  PaddingVariant variant = PaddingVariant::kMaxFill;
  unsigned window_bits = 16;  // Equal-Info only
  unsigned token_bits = 8;
  bool strip_framing = false;  // GZip only
  std::string model_id;
  Digest params_digest{};

  // Throws kConfig: window_bits must be a positive multiple of token_bits,
  // token_bits in [1, 16].
  void validate() const;
};

// One Equal-Info window: exactly W bits encoding `symbol_count` symbols.
struct Window {
  BitStream bits;
  std::uint32_t symbol_count = 0;
  // The MaxFill decoding rule alone cannot recover symbol_count from `bits`
  // (a cheaper symbol than the one that overflowed would also fit into the
  // zero padding); the count has to travel with the window.
  bool pinned = false;

  bool operator==(const Window&) const = default;
};

// Whole-example arithmetic coding; the model is reset first and never again.
BitStream compress_ac(std::span<const Symbol> example, const ModelPtr& model);
SymbolStream decompress_ac(const BitStream& bits, const ModelPtr& model, std::size_t num_symbols);

// Greedy Equal-Info windowing. Coder and model restart at every window.
// Throws kWindowTooSmall when a lone symbol needs more than `window_bits`.
std::vector<Window> compress_equal_info(std::span<const Symbol> example, const ModelPtr& model,
                                        unsigned window_bits, PaddingVariant variant);

// Recovers a single window's symbols from its bits alone: MaxFill takes the
// largest, ZeroAvoid the smallest symbol count whose padded re-encoding
// equals the window. Throws kCorruptWindow when no count matches.
SymbolStream decode_window(const BitStream& bits, const ModelPtr& model, PaddingVariant variant);

// Decodes exactly `symbol_count` symbols and checks they reproduce `bits`.
SymbolStream decode_window_with_count(const BitStream& bits, const ModelPtr& model,
                                      std::size_t symbol_count);

SymbolStream decompress_equal_info(std::span<const Window> windows, const ModelPtr& model,
                                   unsigned window_bits, PaddingVariant variant);

// Symbols to bytes: bytes pass through, except 0xFF -> FF FF and EOS -> FF 01.
std::vector<std::uint8_t> escape_symbols(std::span<const Symbol> symbols);
SymbolStream unescape_symbols(std::span<const std::uint8_t> bytes);

// zlib-framed DEFLATE at the default level; strip_framing drops the 2-byte
// header and 4-byte Adler-32 trailer.
inline constexpr std::size_t kZlibHeaderBytes = 2;
inline constexpr std::size_t kZlibTrailerBytes = 4;
BitStream compress_gzip(std::span<const Symbol> example, bool strip_framing);
SymbolStream decompress_gzip(const BitStream& bits, bool strip_framing);

}  // namespace eqinfo
