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

#include "eqinfo/tokenizer.hpp"

#include <bit>

#include "eqinfo/error.hpp"

namespace eqinfo {
namespace {

constexpr char kTokenMagic[] = "EQIT";
constexpr std::uint16_t kTokenVersion = 1;

void check_depth(unsigned bit_depth) {
  if (bit_depth < 1 || bit_depth > kMaxTokenBits) {
    throw Error(ErrorCode::kConfig, "token bit depth must be in [1, 16], got " +
                                        std::to_string(bit_depth));
  }
}

}  // namespace

TokenSequence tokenize(const BitStream& bits, unsigned bit_depth, bool allow_padding) {
  check_depth(bit_depth);
  if (bits.size() % bit_depth != 0 && !allow_padding) {
    throw Error(ErrorCode::kMisalignedStream,
                "misaligned stream: " + std::to_string(bits.size()) +
                    " bits is not a multiple of " + std::to_string(bit_depth));
  }
  TokenSequence out;
  out.bit_depth = bit_depth;
  BitStream padded = bits;
  padded.resize((bits.size() + bit_depth - 1) / bit_depth * bit_depth);
  out.tokens.reserve(padded.size() / bit_depth);
  for (std::size_t pos = 0; pos < padded.size(); pos += bit_depth) {
    out.tokens.push_back(static_cast<std::uint32_t>(padded.read_uint(pos, bit_depth)));
  }
  return out;
}

BitStream detokenize(const TokenSequence& tokens) {
  check_depth(tokens.bit_depth);
  BitStream out;
  for (const std::uint32_t t : tokens.tokens) {
    if (t >= tokens.vocab_size()) {
      throw Error(ErrorCode::kDomain, "token " + std::to_string(t) + " outside vocabulary of " +
                                          std::to_string(tokens.vocab_size()));
    }
    for (unsigned b = tokens.bit_depth; b-- > 0;) out.push_back(((t >> b) & 1u) != 0);
  }
  return out;
}

double token_compression_ratio(std::uint64_t input_symbols, std::uint64_t tokens) {
  if (tokens == 0) throw Error(ErrorCode::kDomain, "token compression ratio of zero tokens");
  return static_cast<double>(input_symbols) / static_cast<double>(tokens);
}

double bit_compression_ratio(std::uint64_t input_bits, std::uint64_t output_bits) {
  if (output_bits == 0) throw Error(ErrorCode::kDomain, "bit compression ratio of zero bits");
  return static_cast<double>(input_bits) / static_cast<double>(output_bits);
}

unsigned bits_per_token(std::uint64_t vocab_size) {
  if (vocab_size < 2) throw Error(ErrorCode::kDomain, "vocabulary needs at least two ids");
  return static_cast<unsigned>(std::bit_width(vocab_size - 1));
}

double bit_ratio_from_tokens(std::uint64_t input_bytes, std::uint64_t tokens,
                             std::uint64_t vocab_size) {
  return bit_compression_ratio(8 * input_bytes, tokens * bits_per_token(vocab_size));
}

std::uint64_t TokenDataset::total_symbols() const {
  std::uint64_t n = 0;
  for (const auto& e : examples) n += e.symbol_count;
  return n;
}

std::uint64_t TokenDataset::total_bits() const {
  std::uint64_t n = 0;
  for (const auto& e : examples) n += e.bit_length;
  return n;
}

std::span<const std::uint32_t> TokenDataset::example_tokens(std::size_t i) const {
  const Entry& e = examples.at(i);
  return std::span<const std::uint32_t>(tokens).subspan(e.token_offset, e.token_count);
}

TokenDataset tokenize_corpus(const CompressedCorpus& corpus, unsigned bit_depth) {
  check_depth(bit_depth);
  if (corpus.config.method == Method::kEqualInfo && corpus.config.window_bits % bit_depth != 0) {
    throw Error(ErrorCode::kConfig, "window bits " + std::to_string(corpus.config.window_bits) +
                                        " is not a multiple of token bits " +
                                        std::to_string(bit_depth));
  }
  TokenDataset out;
  out.config = corpus.config;
  out.config.token_bits = bit_depth;
  out.precision = corpus.precision;
  out.document_count = corpus.document_count;
  out.bit_depth = bit_depth;
  for (const auto& ex : corpus.examples) {
    const TokenSequence seq = tokenize(ex.bits, bit_depth, /*allow_padding=*/true);
    TokenDataset::Entry e;
    e.symbol_count = ex.symbol_count;
    e.tail = ex.tail;
    e.bit_length = ex.bits.size();
    e.token_offset = out.tokens.size();
    e.token_count = seq.tokens.size();
    e.window_count = ex.window_count;
    e.pinned = ex.pinned;
    out.examples.push_back(std::move(e));
    out.tokens.insert(out.tokens.end(), seq.tokens.begin(), seq.tokens.end());
  }
  return out;
}

CompressedCorpus detokenize_corpus(const TokenDataset& dataset) {
  CompressedCorpus out;
  out.config = dataset.config;
  out.precision = dataset.precision;
  out.document_count = dataset.document_count;
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    const auto& e = dataset.examples[i];
    TokenSequence seq;
    seq.bit_depth = dataset.bit_depth;
    const auto span = dataset.example_tokens(i);
    seq.tokens.assign(span.begin(), span.end());
    CompressedExample ex;
    ex.symbol_count = e.symbol_count;
    ex.tail = e.tail;
    ex.bits = detokenize(seq);
    if (ex.bits.size() < e.bit_length || ex.bits.size() - e.bit_length >= dataset.bit_depth) {
      throw Error(ErrorCode::kFormat, "token count does not cover the recorded bit length");
    }
    ex.bits.resize(e.bit_length);
    ex.window_count = e.window_count;
    ex.pinned = e.pinned;
    out.examples.push_back(std::move(ex));
  }
  return out;
}

std::vector<std::uint8_t> serialize_tokens(const TokenDataset& d) {
  ByteWriter w;
  w.magic(std::string_view(kTokenMagic, 4));
  w.u16(kTokenVersion);
  w.u8(static_cast<std::uint8_t>(d.bit_depth));
  w.u32(static_cast<std::uint32_t>(std::uint64_t{1} << d.bit_depth));
  w.u8(static_cast<std::uint8_t>(d.config.method));
  w.u8(static_cast<std::uint8_t>(d.config.variant));
  w.u16(static_cast<std::uint16_t>(d.config.window_bits));
  w.u8(d.config.strip_framing ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(d.precision));
  w.str(d.config.model_id);
  w.bytes(d.config.params_digest);
  w.u64(d.document_count);
  w.u64(d.examples.size());
  for (const auto& e : d.examples) {
    w.u64(e.symbol_count);
    w.u8(e.tail ? 1 : 0);
    w.u64(e.bit_length);
    w.u64(e.token_count);
    w.u32(e.window_count);
    w.u32(static_cast<std::uint32_t>(e.pinned.size()));
    for (const auto& pin : e.pinned) {
      w.u32(pin.window_index);
      w.u32(pin.symbol_count);
    }
  }
  w.u64(d.tokens.size());
  for (const std::uint32_t t : d.tokens) {
    if (d.bit_depth <= 8) {
      w.u8(static_cast<std::uint8_t>(t));
    } else {
      w.u16(static_cast<std::uint16_t>(t));
    }
  }
  w.u32(crc32(w.data()));
  return w.take();
}

TokenDataset deserialize_tokens(std::span<const std::uint8_t> data) {
  if (data.size() < 4) throw Error(ErrorCode::kFormat, "token file: too short");
  const auto body = data.first(data.size() - 4);
  ByteReader trailer(data.last(4), "token file");
  if (trailer.u32() != crc32(body)) throw Error(ErrorCode::kFormat, "token file: checksum mismatch");
  ByteReader r(body, "token file");
  r.expect_magic(std::string_view(kTokenMagic, 4));
  if (const auto version = r.u16(); version != kTokenVersion) {
    r.fail("unsupported version " + std::to_string(version));
  }
  TokenDataset d;
  d.bit_depth = r.u8();
  if (d.bit_depth < 1 || d.bit_depth > kMaxTokenBits) r.fail("bad token bit depth");
  if (r.u32() != (std::uint64_t{1} << d.bit_depth)) r.fail("vocabulary size does not match bit depth");
  const auto method = r.u8();
  if (method > static_cast<std::uint8_t>(Method::kGzip)) r.fail("unknown method id");
  d.config.method = static_cast<Method>(method);
  const auto variant = r.u8();
  if (variant > 1) r.fail("unknown variant id");
  d.config.variant = static_cast<PaddingVariant>(variant);
  d.config.window_bits = r.u16();
  d.config.token_bits = d.bit_depth;
  d.config.strip_framing = r.u8() != 0;
  d.precision = r.u8();
  d.config.model_id = r.str();
  const auto digest = r.bytes(32);
  std::copy(digest.begin(), digest.end(), d.config.params_digest.begin());
  d.document_count = r.u64();
  const std::uint64_t count = r.u64();
  std::uint64_t offset = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    TokenDataset::Entry e;
    e.symbol_count = r.u64();
    e.tail = r.u8() != 0;
    e.bit_length = r.u64();
    e.token_count = r.u64();
    e.token_offset = offset;
    offset += e.token_count;
    e.window_count = r.u32();
    const std::uint32_t pins = r.u32();
    if (pins > e.window_count) r.fail("more pinned windows than windows");
    for (std::uint32_t p = 0; p < pins; ++p) {
      PinnedCount pin;
      pin.window_index = r.u32();
      pin.symbol_count = r.u32();
      e.pinned.push_back(pin);
    }
    d.examples.push_back(std::move(e));
  }
  const std::uint64_t total = r.u64();
  if (total != offset) r.fail("token count does not match example index");
  const std::size_t width = d.bit_depth <= 8 ? 1 : 2;
  if (total > r.remaining() / width) r.fail("token payload exceeds file size");
  d.tokens.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    const std::uint32_t t = width == 1 ? r.u8() : r.u16();
    if (t >= (std::uint64_t{1} << d.bit_depth)) r.fail("token outside vocabulary");
    d.tokens.push_back(t);
  }
  if (r.remaining() != 0) r.fail("trailing bytes");
  return d;
}

void save_tokens(const std::filesystem::path& path, const TokenDataset& dataset) {
  write_binary_file(path.string(), serialize_tokens(dataset));
}

TokenDataset load_tokens(const std::filesystem::path& path) {
  return deserialize_tokens(read_binary_file(path.string()));
}

}  // namespace eqinfo
