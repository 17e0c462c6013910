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
#include <vector>

#include "eqinfo/bitstream.hpp"
#include "eqinfo/prob_model.hpp"

namespace eqinfo {

// Finite-precision arithmetic encoder with registers of precision + 2 bits.
// Settled leading bits are emitted as soon as they are known; straddling
// intervals are tracked as pending bits that resolve on the next emission.
//
// finish() terminates with the shortest bit string whose dyadic interval lies
// inside the final coding interval, so a run of symbols with exact power-of-two
// cells reproduces those cells' binary digits with no extra bits.
class ArithmeticEncoder {
 public:
  explicit ArithmeticEncoder(unsigned precision = kDefaultPrecision);

  void encode(const QuantizedCdf& cdf, Symbol symbol);

  // Bits already locked in; they never change as more symbols are encoded.
  const BitStream& emitted() const { return out_; }
  std::size_t pending_bits() const { return pending_; }
  // Length of finish() without materializing it.
  std::size_t finished_length() const;
  BitStream finish() const;

 private:
  struct Termination {
    unsigned length;
    std::uint64_t value;
  };
  Termination termination() const;
  void emit(bool bit);

  unsigned precision_;
  std::uint64_t half_;
  std::uint64_t quarter_;
  std::uint64_t low_ = 0;
  std::uint64_t high_;
  std::size_t pending_ = 0;
  BitStream out_;
};

// Inverse of ArithmeticEncoder. Bits past the end of the input read as zero,
// which is exactly the value the encoder's termination points at.
class ArithmeticDecoder {
 public:
  ArithmeticDecoder(const BitStream& bits, unsigned precision = kDefaultPrecision);

  Symbol decode(const QuantizedCdf& cdf);
  // Number of input bits shifted into the value register so far, including
  // the implicit zeros past the end.
  std::size_t bits_read() const { return next_bit_; }

 private:
  bool next_bit();

  const BitStream* bits_;
  unsigned precision_;
  std::uint64_t half_;
  std::uint64_t quarter_;
  std::uint64_t low_ = 0;
  std::uint64_t high_;
  std::uint64_t value_ = 0;
  std::size_t next_bit_ = 0;
};

// Encodes `symbols` starting from `state`'s current context, advancing it.
BitStream encode(std::span<const Symbol> symbols, ModelState& state);

// Decodes `num_symbols` symbols starting from `state`'s current context. The
// input must be exactly the canonical encoding of the decoded symbols: a
// shorter stream raises kTruncatedStream, any other mismatch (for example a
// different model) raises kCorruptStream.
std::vector<Symbol> decode(const BitStream& bits, ModelState& state, std::size_t num_symbols);

}  // namespace eqinfo
