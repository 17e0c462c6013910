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

#include "eqinfo/corpus.hpp"
#include "eqinfo/window_codec.hpp"

namespace eqinfo {

struct PinnedCount {
  std::uint32_t window_index = 0;
  std::uint32_t symbol_count = 0;

  bool operator==(const PinnedCount&) const = default;
};

struct CompressedExample {
  std::uint64_t symbol_count = 0;
  bool tail = false;
  // Exact output bits. Equal-Info: the windows back to back.
  BitStream bits;
  // Equal-Info only.
  std::uint32_t window_count = 0;
  std::vector<PinnedCount> pinned;

  bool operator==(const CompressedExample&) const = default;
};

struct CompressedCorpus {
  MethodConfig config;
  unsigned precision = kDefaultPrecision;
  // EOS symbols across all examples; input bytes = symbols - documents.
  std::uint64_t document_count = 0;
  std::vector<CompressedExample> examples;

  std::uint64_t total_symbols() const;
  std::uint64_t total_bits() const;
};

// Compresses every example independently on up to `jobs` threads; output
// order always follows example order. `model` may be null for GZip.
CompressedCorpus compress_corpus(std::span<const Example> examples, const MethodConfig& config,
                                 const ModelPtr& model, unsigned jobs = 1);

SymbolStream decompress_example(const CompressedExample& example, const MethodConfig& config,
                                const ModelPtr& model);
std::vector<SymbolStream> decompress_corpus(const CompressedCorpus& corpus, const ModelPtr& model,
                                            unsigned jobs = 1);

// Equal-Info windows of one example, pinned counts restored.
std::vector<Window> split_windows(const CompressedExample& example, unsigned window_bits);

// Throws kDigestMismatch naming both digests when `model` is not the model
// the corpus was compressed with.
void check_model(const CompressedCorpus& corpus, const ModelPtr& model);

// EQIC container, little-endian:
//   "EQIC" u16 version
//   u8 method, u8 variant, u16 window_bits, u8 token_bits, u8 strip_framing,
//   u8 precision, str model_id, 32-byte params_digest, u64 document_count,
//   u64 example_count
//   per example: u64 symbol_count, u8 tail, u64 bit_length, u32 window_count,
//                u32 pinned_count, pinned_count x (u32 window, u32 symbols),
//                ceil(bit_length / 8) bytes of MSB-first bits (zero padded)
//   u32 CRC-32 of all preceding bytes
std::vector<std::uint8_t> serialize_container(const CompressedCorpus& corpus);
CompressedCorpus deserialize_container(std::span<const std::uint8_t> data);
void save_container(const std::filesystem::path& path, const CompressedCorpus& corpus);
CompressedCorpus load_container(const std::filesystem::path& path);

// Runs fn(i) for i in [0, count) on up to `jobs` threads and rethrows the
// first failure in index order.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn);

}  // namespace eqinfo

#include "eqinfo/detail/parallel.hpp"
