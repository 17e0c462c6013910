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

#include "eqinfo/window_codec.hpp"

#include <zlib.h>

#include "eqinfo/ac_coder.hpp"
#include "eqinfo/error.hpp"

namespace eqinfo {
namespace {

constexpr std::uint8_t kEscape = 0xFF;
constexpr std::uint8_t kEscapedEos = 0x01;

BitStream padded(BitStream bits, std::size_t window_bits) {
  bits.resize(window_bits);
  return bits;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kAc: return "ac";
    case Method::kStaticAc: return "static-ac";
    case Method::kEqualInfo: return "eqinfo";
    case Method::kGzip: return "gzip";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kAc, Method::kStaticAc, Method::kEqualInfo, Method::kGzip}) {
    if (method_name(m) == name) return m;
  }
  throw Error(ErrorCode::kConfig, "unknown method '" + std::string(name) + "'");
}

std::string_view variant_name(PaddingVariant variant) {
  return variant == PaddingVariant::kMaxFill ? "maxfill" : "zeroavoid";
}

PaddingVariant parse_variant(std::string_view name) {
  if (name == "maxfill") return PaddingVariant::kMaxFill;
  if (name == "zeroavoid") return PaddingVariant::kZeroAvoid;
  throw Error(ErrorCode::kConfig, "unknown variant '" + std::string(name) + "'");
}

void MethodConfig::validate() const {
  if (token_bits < 1 || token_bits > 16) {
    throw Error(ErrorCode::kConfig, "token bits must be in [1, 16], got " + std::to_string(token_bits));
  }
  if (method == Method::kEqualInfo &&
      (window_bits == 0 || window_bits % token_bits != 0)) {
    throw Error(ErrorCode::kConfig, "window bits (" + std::to_string(window_bits) +
                                        ") must be a positive multiple of token bits (" +
                                        std::to_string(token_bits) + ")");
  }
}

// --- Whole-stream AC ---------------------------------------------------------

BitStream compress_ac(std::span<const Symbol> example, const ModelPtr& model) {
  ModelState state(model);
  return encode(example, state);
}

SymbolStream decompress_ac(const BitStream& bits, const ModelPtr& model, std::size_t num_symbols) {
  ModelState state(model);
  return decode(bits, state, num_symbols);
}

// --- Equal-Info windows ------------------------------------------------------

std::vector<Window> compress_equal_info(std::span<const Symbol> example, const ModelPtr& model,
                                        unsigned window_bits, PaddingVariant variant) {
  if (window_bits == 0) throw Error(ErrorCode::kConfig, "window bits must be positive");
  const unsigned precision = model->precision();
  std::vector<Window> windows;
  std::size_t pos = 0;
  std::vector<BitStream> prefix_windows;
  while (pos < example.size()) {
    ModelState state(model);
    ArithmeticEncoder encoder(precision);
    std::size_t run = 0;
    prefix_windows.clear();
    while (pos + run < example.size()) {
      const Symbol s = example[pos + run];
      if (s >= model->alphabet_size()) {
        throw Error(ErrorCode::kDomain, "symbol " + std::to_string(s) + " outside alphabet");
      }
      ArithmeticEncoder trial = encoder;
      trial.encode(*state.next_cdf(), s);
      if (trial.finished_length() > window_bits) break;
      if (variant == PaddingVariant::kZeroAvoid) {
        BitStream candidate = padded(trial.finish(), window_bits);
        bool repeats = false;
        for (const auto& w : prefix_windows) {
          if (w == candidate) {
            repeats = true;
            break;
          }
        }
        if (repeats) break;
        prefix_windows.push_back(std::move(candidate));
      }
      encoder = std::move(trial);
      state.observe(s);
      ++run;
    }
    if (run == 0) {
      throw Error(ErrorCode::kWindowTooSmall,
                  "window too small: symbol " + std::to_string(example[pos]) + " at offset " +
                      std::to_string(pos) + " needs more than " + std::to_string(window_bits) +
                      " bits");
    }
    Window w;
    w.bits = padded(encoder.finish(), window_bits);
    w.symbol_count = static_cast<std::uint32_t>(run);
    const SymbolStream canonical = decode_window(w.bits, model, variant);
    w.pinned = canonical.size() != run;
    windows.push_back(std::move(w));
    pos += run;
  }
  return windows;
}

SymbolStream decode_window(const BitStream& bits, const ModelPtr& model, PaddingVariant variant) {
  const unsigned precision = model->precision();
  ArithmeticDecoder decoder(bits, precision);
  ArithmeticEncoder encoder(precision);
  ModelState state(model);
  SymbolStream decoded;
  std::size_t best = 0;
  for (;;) {
    const auto cdf = state.next_cdf();
    const Symbol s = decoder.decode(*cdf);
    encoder.encode(*cdf, s);
    if (encoder.finished_length() > bits.size()) break;
    state.observe(s);
    decoded.push_back(s);
    if (padded(encoder.finish(), bits.size()) == bits) {
      best = decoded.size();
      if (variant == PaddingVariant::kZeroAvoid) break;
    }
  }
  if (best == 0) {
    throw Error(ErrorCode::kCorruptWindow, "corrupt window: no symbol count reproduces its bits");
  }
  decoded.resize(best);
  return decoded;
}

SymbolStream decode_window_with_count(const BitStream& bits, const ModelPtr& model,
                                      std::size_t symbol_count) {
  const unsigned precision = model->precision();
  ArithmeticDecoder decoder(bits, precision);
  ArithmeticEncoder encoder(precision);
  ModelState state(model);
  SymbolStream decoded;
  for (std::size_t i = 0; i < symbol_count; ++i) {
    const auto cdf = state.next_cdf();
    const Symbol s = decoder.decode(*cdf);
    encoder.encode(*cdf, s);
    state.observe(s);
    decoded.push_back(s);
  }
  if (encoder.finished_length() > bits.size() ||
      padded(encoder.finish(), bits.size()) != bits) {
    throw Error(ErrorCode::kCorruptWindow, "corrupt window: pinned symbol count does not match bits");
  }
  return decoded;
}

SymbolStream decompress_equal_info(std::span<const Window> windows, const ModelPtr& model,
                                   unsigned window_bits, PaddingVariant variant) {
  SymbolStream out;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const Window& w = windows[i];
    if (w.bits.size() != window_bits) {
      throw Error(ErrorCode::kCorruptWindow, "corrupt window " + std::to_string(i) + ": " +
                                                 std::to_string(w.bits.size()) + " bits, expected " +
                                                 std::to_string(window_bits));
    }
    try {
      const SymbolStream symbols = w.pinned ? decode_window_with_count(w.bits, model, w.symbol_count)
                                            : decode_window(w.bits, model, variant);
      out.insert(out.end(), symbols.begin(), symbols.end());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCorruptWindow) throw;
      throw Error(ErrorCode::kCorruptWindow, "window " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

// --- GZip baseline -----------------------------------------------------------

std::vector<std::uint8_t> escape_symbols(std::span<const Symbol> symbols) {
  std::vector<std::uint8_t> out;
  out.reserve(symbols.size() + symbols.size() / 64);
  for (Symbol s : symbols) {
    if (s == kEos) {
      out.push_back(kEscape);
      out.push_back(kEscapedEos);
    } else if (s == kEscape) {
      out.push_back(kEscape);
      out.push_back(kEscape);
    } else if (s < kByteValues) {
      out.push_back(static_cast<std::uint8_t>(s));
    } else {
      throw Error(ErrorCode::kDomain, "symbol out of range: " + std::to_string(s));
    }
  }
  return out;
}

SymbolStream unescape_symbols(std::span<const std::uint8_t> bytes) {
  SymbolStream out;
  out.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    if (bytes[i] != kEscape) {
      out.push_back(bytes[i]);
      continue;
    }
    if (i + 1 >= bytes.size()) throw Error(ErrorCode::kCorruptStream, "dangling escape byte");
    const std::uint8_t next = bytes[++i];
    if (next == kEscape) {
      out.push_back(kEscape);
    } else if (next == kEscapedEos) {
      out.push_back(kEos);
    } else {
      throw Error(ErrorCode::kCorruptStream, "invalid escape sequence");
    }
  }
  return out;
}

BitStream compress_gzip(std::span<const Symbol> example, bool strip_framing) {
  const auto raw = escape_symbols(example);
  uLongf size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(size);
  if (compress2(packed.data(), &size, raw.data(), static_cast<uLong>(raw.size()),
                Z_DEFAULT_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::kCorruptStream, "zlib compression failed");
  }
  packed.resize(size);
  std::span<const std::uint8_t> body(packed);
  if (strip_framing) body = body.subspan(kZlibHeaderBytes, size - kZlibHeaderBytes - kZlibTrailerBytes);
  return BitStream::from_bytes(body, body.size() * 8);
}

SymbolStream decompress_gzip(const BitStream& bits, bool strip_framing) {
  if (bits.size() % 8 != 0) throw Error(ErrorCode::kMisalignedStream, "gzip stream is not byte aligned");
  std::vector<std::uint8_t> packed = bits.to_bytes();
  z_stream zs{};
  if (inflateInit2(&zs, strip_framing ? -MAX_WBITS : MAX_WBITS) != Z_OK) {
    throw Error(ErrorCode::kCorruptStream, "zlib inflate init failed");
  }
  zs.next_in = packed.data();
  zs.avail_in = static_cast<uInt>(packed.size());
  std::vector<std::uint8_t> raw;
  std::uint8_t chunk[1 << 14];
  int rc = Z_OK;
  while (rc == Z_OK) {
    zs.next_out = chunk;
    zs.avail_out = sizeof(chunk);
    rc = inflate(&zs, Z_NO_FLUSH);
    raw.insert(raw.end(), chunk, chunk + (sizeof(chunk) - zs.avail_out));
    if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
  }
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::kCorruptStream, "zlib stream is corrupt or truncated");
  return unescape_symbols(raw);
}

}  // namespace eqinfo
