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

namespace eqinfo {

// Ordered bit sequence with an exact length. Bits are held one per byte; the
// streams handled here are at most a few megabits so the simplicity wins.
class BitStream {
 public:
  BitStream() = default;

  // Parses a string of '0'/'1' characters; any other character throws.
  static BitStream from_string(std::string_view bits);
  // Unpacks MSB-first bytes, keeping only the first `bit_length` bits.
  static BitStream from_bytes(std::span<const std::uint8_t> bytes,
                              std::size_t bit_length);

  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  void append(const BitStream& other);
  // Appends `count` copies of `bit`.
  void append_repeated(bool bit, std::size_t count);
  void resize(std::size_t length) { bits_.resize(length, 0); }
  void clear() { bits_.clear(); }

  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  // Value of bits [pos, pos + width) read MSB-first. width <= 64.
  std::uint64_t read_uint(std::size_t pos, unsigned width) const;
  BitStream slice(std::size_t pos, std::size_t length) const;

  // MSB-first packing; the final byte is zero-filled.
  std::vector<std::uint8_t> to_bytes() const;
  std::string to_string() const;

  bool operator==(const BitStream&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace eqinfo
