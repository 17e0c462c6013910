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
#include <filesystem>
#include <span>
#include <vector>

#include "eqinfo/bitstream.hpp"
#include "eqinfo/container.hpp"
#include "eqinfo/window_codec.hpp"

namespace eqinfo {

inline constexpr unsigned kMaxTokenBits = 16;

struct TokenSequence {
  std::vector<std::uint32_t> tokens;
  unsigned bit_depth = 8;
  MethodConfig config;

  std::uint64_t vocab_size() const { return std::uint64_t{1} << bit_depth; }
};

// Token i holds bits [iN, (i+1)N), most significant bit first. A length that
// is not a multiple of N throws kMisalignedStream unless `allow_padding`, in
// which case the stream is zero-extended to the next multiple.
TokenSequence tokenize(const BitStream& bits, unsigned bit_depth, bool allow_padding = false);
// Throws kDomain for a token >= 2^N.
BitStream detokenize(const TokenSequence& tokens);

// Input symbols per output token. Throws kDomain when tokens == 0.
double token_compression_ratio(std::uint64_t input_symbols, std::uint64_t tokens);
// Input bits per output bit. Throws kDomain when output_bits == 0.
double bit_compression_ratio(std::uint64_t input_bits, std::uint64_t output_bits);
// Bits needed per token id: ceil(log2 vocab).
unsigned bits_per_token(std::uint64_t vocab_size);
// bit_compression_ratio of a byte stream tokenized with `vocab_size` ids.
double bit_ratio_from_tokens(std::uint64_t input_bytes, std::uint64_t tokens,
                             std::uint64_t vocab_size);

// Token view of a whole compressed corpus. Each example is padded on its own
// so tokens never straddle examples; Equal-Info windows are N-aligned already.
struct TokenDataset {
  MethodConfig config;
  unsigned precision = kDefaultPrecision;
  std::uint64_t document_count = 0;
  unsigned bit_depth = 8;
  struct Entry {
    std::uint64_t symbol_count = 0;
    bool tail = false;
    std::uint64_t bit_length = 0;  // before padding
    std::uint64_t token_offset = 0;
    std::uint64_t token_count = 0;
    std::uint32_t window_count = 0;
    std::vector<PinnedCount> pinned;
  };
  std::vector<Entry> examples;
  std::vector<std::uint32_t> tokens;

  std::uint64_t total_symbols() const;
  std::uint64_t total_bits() const;
  std::span<const std::uint32_t> example_tokens(std::size_t i) const;
};

TokenDataset tokenize_corpus(const CompressedCorpus& corpus, unsigned bit_depth);
// Rebuilds exactly the container the dataset was made from.
CompressedCorpus detokenize_corpus(const TokenDataset& dataset);

// EQIT file, little-endian:
//   "EQIT" u16 version, u8 N, u32 vocab_size,
//   config echo: u8 method, u8 variant, u16 window_bits, u8 strip_framing,
//                u8 precision, str model_id, 32-byte params_digest
//   u64 document_count, u64 example_count, per example: u64 symbol_count, u8 tail, u64 bit_length,
//       u64 token_count, u32 window_count, u32 pinned_count,
//       pinned_count x (u32 window, u32 symbols)
//   u64 token_count, tokens as u8 (N <= 8) or u16 (N > 8)
//   u32 CRC-32 of all preceding bytes
std::vector<std::uint8_t> serialize_tokens(const TokenDataset& dataset);
TokenDataset deserialize_tokens(std::span<const std::uint8_t> data);
void save_tokens(const std::filesystem::path& path, const TokenDataset& dataset);
TokenDataset load_tokens(const std::filesystem::path& path);

}  // namespace eqinfo
