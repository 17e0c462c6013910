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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqinfo/corpus.hpp"
#include "eqinfo/prob_model.hpp"

namespace eqinfo {

inline constexpr std::size_t kDefaultSeq2SeqLength = 1024;
inline constexpr int kSeq2SeqSchemaVersion = 1;

enum class Seq2SeqDirection : std::uint8_t { kCompress = 0, kDecompress = 1, kByteLm = 2 };

std::string_view direction_name(Seq2SeqDirection direction);
Seq2SeqDirection parse_direction(std::string_view name);

struct Seq2SeqExample {
  Seq2SeqDirection direction = Seq2SeqDirection::kCompress;
  std::vector<std::uint32_t> inputs;
  std::vector<std::uint32_t> targets;
  unsigned token_bits = 8;
  std::uint64_t bit_length = 0;  // AC output bits before token padding

  bool operator==(const Seq2SeqExample&) const = default;
};

// Compress: inputs are the symbols, targets the AC tokens shifted by the
// symbol alphabet size. Decompress: inputs are the AC tokens, targets the
// symbols shifted by 2^N. The AC stream is zero-padded to a multiple of N.
Seq2SeqExample make_seq2seq(std::span<const Symbol> example, const ModelPtr& model,
                            unsigned token_bits, Seq2SeqDirection direction);

// Decompress record with the inputs dropped: a byte-level language model on
// the same targets.
Seq2SeqExample byte_lm_control(const Seq2SeqExample& decompress);

// Un-shifts the record and runs the codec back to the source symbols. Throws
// kCorruptStream if the record's two sides disagree.
SymbolStream recover_symbols(const Seq2SeqExample& record, const ModelPtr& model);

// One JSON object per line:
//   {"schema_version":1,"direction":"compress","token_bits":8,"bit_length":..,
//    "inputs":[...],"targets":[...]}
std::string seq2seq_record_json(const Seq2SeqExample& record);
Seq2SeqExample parse_seq2seq_record(std::string_view line);

}  // namespace eqinfo
