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

#include "eqinfo/ac_coder.hpp"

#include "eqinfo/error.hpp"

namespace eqinfo {
namespace {

void check_cdf(const QuantizedCdf& cdf, unsigned precision, Symbol symbol) {
  if (cdf.precision() != precision) {
    throw Error(ErrorCode::kConfig, "model precision " + std::to_string(cdf.precision()) +
                                        " differs from coder precision " +
                                        std::to_string(precision));
  }
  if (symbol >= cdf.alphabet_size()) {
    throw Error(ErrorCode::kDomain, "symbol " + std::to_string(symbol) +
                                        " outside alphabet of " +
                                        std::to_string(cdf.alphabet_size()));
  }
}

}  // namespace

ArithmeticEncoder::ArithmeticEncoder(unsigned precision)
    : precision_(precision),
      half_(std::uint64_t{1} << (precision + 1)),
      quarter_(std::uint64_t{1} << precision),
      high_((std::uint64_t{1} << (precision + 2)) - 1) {
  if (precision < kMinPrecision || precision > kMaxPrecision) {
    throw Error(ErrorCode::kConfig, "unsupported coder precision " + std::to_string(precision));
  }
}

void ArithmeticEncoder::emit(bool bit) {
  out_.push_back(bit);
  out_.append_repeated(!bit, pending_);
  pending_ = 0;
}

void ArithmeticEncoder::encode(const QuantizedCdf& cdf, Symbol symbol) {
  check_cdf(cdf, precision_, symbol);
  const std::uint64_t range = high_ - low_ + 1;
  high_ = low_ + (range * cdf.upper(symbol) >> precision_) - 1;
  low_ = low_ + (range * cdf.lower(symbol) >> precision_);
  for (;;) {
    if (high_ < half_) {
      emit(false);
    } else if (low_ >= half_) {
      emit(true);
      low_ -= half_;
      high_ -= half_;
    } else if (low_ >= quarter_ && high_ < half_ + quarter_) {
      ++pending_;
      low_ -= quarter_;
      high_ -= quarter_;
    } else {
      break;
    }
    low_ <<= 1;
    high_ = (high_ << 1) | 1;
  }
}

// Shortest aligned block [v * 2^(P-k), (v+1) * 2^(P-k)) inside [low, high].
// With pending bits the register is a zoom around one half of the real line,
// so at least one bit is needed to resolve them.
ArithmeticEncoder::Termination ArithmeticEncoder::termination() const {
  const unsigned reg_bits = precision_ + 2;
  for (unsigned k = pending_ > 0 ? 1 : 0; k <= reg_bits; ++k) {
    const std::uint64_t unit = std::uint64_t{1} << (reg_bits - k);
    const std::uint64_t v = (low_ + unit - 1) / unit;
    if (v * unit + unit - 1 <= high_) return {k, v};
  }
  // Unreachable: the interval always holds at least one register unit.
  throw Error(ErrorCode::kCorruptStream, "encoder interval collapsed");
}

std::size_t ArithmeticEncoder::finished_length() const {
  const Termination t = termination();
  return out_.size() + (t.length > 0 ? t.length + pending_ : 0);
}

BitStream ArithmeticEncoder::finish() const {
  BitStream out = out_;
  const Termination t = termination();
  for (unsigned i = 0; i < t.length; ++i) {
    const bool bit = (t.value >> (t.length - 1 - i)) & 1;
    out.push_back(bit);
    if (i == 0) out.append_repeated(!bit, pending_);
  }
  return out;
}

ArithmeticDecoder::ArithmeticDecoder(const BitStream& bits, unsigned precision)
    : bits_(&bits),
      precision_(precision),
      half_(std::uint64_t{1} << (precision + 1)),
      quarter_(std::uint64_t{1} << precision),
      high_((std::uint64_t{1} << (precision + 2)) - 1) {
  if (precision < kMinPrecision || precision > kMaxPrecision) {
    throw Error(ErrorCode::kConfig, "unsupported coder precision " + std::to_string(precision));
  }
  for (unsigned i = 0; i < precision + 2; ++i) value_ = (value_ << 1) | next_bit();
}

bool ArithmeticDecoder::next_bit() {
  const std::size_t i = next_bit_++;
  return i < bits_->size() && (*bits_)[i];
}

Symbol ArithmeticDecoder::decode(const QuantizedCdf& cdf) {
  if (cdf.precision() != precision_) {
    throw Error(ErrorCode::kConfig, "model precision differs from coder precision");
  }
  const std::uint64_t range = high_ - low_ + 1;
  // Largest cumulative count c with low + floor(range * c / total) <= value.
  const std::uint64_t target = (((value_ - low_ + 1) << precision_) - 1) / range;
  const Symbol symbol = cdf.find(static_cast<std::uint32_t>(target));
  high_ = low_ + (range * cdf.upper(symbol) >> precision_) - 1;
  low_ = low_ + (range * cdf.lower(symbol) >> precision_);
  for (;;) {
    if (high_ < half_) {
      // nothing to subtract
    } else if (low_ >= half_) {
      low_ -= half_;
      high_ -= half_;
      value_ -= half_;
    } else if (low_ >= quarter_ && high_ < half_ + quarter_) {
      low_ -= quarter_;
      high_ -= quarter_;
      value_ -= quarter_;
    } else {
      break;
    }
    low_ <<= 1;
    high_ = (high_ << 1) | 1;
    value_ = (value_ << 1) | next_bit();
  }
  return symbol;
}

BitStream encode(std::span<const Symbol> symbols, ModelState& state) {
  ArithmeticEncoder encoder(state.model().precision());
  for (Symbol s : symbols) {
    if (s >= state.model().alphabet_size()) {
      throw Error(ErrorCode::kDomain, "symbol " + std::to_string(s) + " outside alphabet of " +
                                          std::to_string(state.model().alphabet_size()));
    }
    encoder.encode(*state.next_cdf(), s);
    state.observe(s);
  }
  return encoder.finish();
}

std::vector<Symbol> decode(const BitStream& bits, ModelState& state, std::size_t num_symbols) {
  const ModelState start = state;
  ArithmeticDecoder decoder(bits, state.model().precision());
  ArithmeticEncoder check(state.model().precision());
  std::vector<Symbol> out;
  out.reserve(num_symbols);
  for (std::size_t i = 0; i < num_symbols; ++i) {
    const auto cdf = state.next_cdf();
    const Symbol s = decoder.decode(*cdf);
    check.encode(*cdf, s);
    state.observe(s);
    out.push_back(s);
  }
  // Only the canonical encoding of the decoded symbols is accepted.
  if (check.finished_length() > bits.size()) {
    state = start;
    throw Error(ErrorCode::kTruncatedStream,
                "truncated stream: " + std::to_string(num_symbols) + " symbols need " +
                    std::to_string(check.finished_length()) + " bits, got " +
                    std::to_string(bits.size()));
  }
  if (check.finish() != bits) {
    state = start;
    throw Error(ErrorCode::kCorruptStream,
                "corrupt stream: decoded symbols do not re-encode to the input bits");
  }
  return out;
}

}  // namespace eqinfo
