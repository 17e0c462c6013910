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

#include "eqinfo/bitstream.hpp"

#include <stdexcept>

#include "eqinfo/error.hpp"

namespace eqinfo {

BitStream BitStream::from_string(std::string_view bits) {
  BitStream out;
  out.bits_.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::kDomain,
                  std::string("bit string contains '") + c + "'");
    }
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

BitStream BitStream::from_bytes(std::span<const std::uint8_t> bytes,
                                std::size_t bit_length) {
  if (bit_length > bytes.size() * 8) {
    throw Error(ErrorCode::kFormat, "bit length exceeds packed byte count");
  }
  BitStream out;
  out.bits_.resize(bit_length);
  for (std::size_t i = 0; i < bit_length; ++i) {
    out.bits_[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  }
  return out;
}

void BitStream::append(const BitStream& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void BitStream::append_repeated(bool bit, std::size_t count) {
  bits_.insert(bits_.end(), count, bit ? 1 : 0);
}

std::uint64_t BitStream::read_uint(std::size_t pos, unsigned width) const {
  if (width > 64 || pos + width > bits_.size()) {
    throw std::out_of_range("BitStream::read_uint out of range");
  }
  std::uint64_t value = 0;
  for (unsigned i = 0; i < width; ++i) {
    value = (value << 1) | bits_[pos + i];
  }
  return value;
}

BitStream BitStream::slice(std::size_t pos, std::size_t length) const {
  if (pos + length > bits_.size()) {
    throw std::out_of_range("BitStream::slice out of range");
  }
  BitStream out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                   bits_.begin() + static_cast<std::ptrdiff_t>(pos + length));
  return out;
}

std::vector<std::uint8_t> BitStream::to_bytes() const {
  std::vector<std::uint8_t> out((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

std::string BitStream::to_string() const {
  std::string out(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) out[i] = '1';
  }
  return out;
}

}  // namespace eqinfo
