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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqinfo/bitstream.hpp"

namespace eqinfo {

enum class SegmentMode : std::uint8_t {
  kOverlappingNgram = 0,  // every bit position starts an n-gram
  kDisjointToken = 1,     // consecutive non-overlapping n-bit tokens
};

enum class Estimator : std::uint8_t { kPlugIn = 0, kMillerMadow = 1 };

std::string_view segment_mode_name(SegmentMode mode);
SegmentMode parse_segment_mode(std::string_view name);
std::string_view estimator_name(Estimator estimator);
Estimator parse_estimator(std::string_view name);

inline constexpr std::size_t kDefaultPartitions = 100;
inline constexpr std::size_t kMinSegmentsPerPartition = 100;
inline constexpr unsigned kMaxSegmentBits = 24;

struct SegmentationSpec {
  SegmentMode mode = SegmentMode::kDisjointToken;
  unsigned n = 8;
};

struct EntropyOptions {
  Estimator estimator = Estimator::kPlugIn;
  std::size_t partitions = kDefaultPartitions;
  // Miller-Madow term (2^n - 1) / (2m) taken as bits, without the 1 / ln 2
  // that converts the classical nats correction.
  bool literal_miller_madow = false;
};

struct EntropyReport {
  SegmentationSpec spec;
  EntropyOptions options;
  std::size_t segments_per_partition = 0;
  std::vector<double> entropies;  // bits, one per partition
  std::vector<double> kl;         // n - entropy, one per partition
  double kl_p5 = 0;
  double kl_p50 = 0;
  double kl_p95 = 0;
};

// Splits the stream into `partitions` contiguous equal slices (a remainder
// shorter than one slice is dropped) and estimates the n-bit segment entropy
// of each. Token mode requires a stream length divisible by n (else
// kMisalignedStream); fewer than 100 segments per partition raise
// kInsufficientData.
EntropyReport estimate_entropy(const BitStream& stream, const SegmentationSpec& spec,
                               const EntropyOptions& options = {});

// Segment counts of one slice, for count-conservation checks.
std::vector<std::uint64_t> segment_counts(const BitStream& stream, std::size_t begin,
                                          std::size_t length, const SegmentationSpec& spec);

// Linear interpolation between closest ranks; q in [0, 100].
double percentile(std::vector<double> values, double q);

struct NamedStream {
  std::string name;
  BitStream bits;
};

struct KlProfileRow {
  std::string stream;
  SegmentMode mode = SegmentMode::kDisjointToken;
  unsigned n = 0;
  Estimator estimator = Estimator::kPlugIn;
  double percentile = 0;
  double value = 0;
  bool negative = false;  // only possible under Miller-Madow
};

// Percentile KL for every (stream, n). In token mode every n must divide
// `alignment_bits` when given, so no token crosses a window boundary.
std::vector<KlProfileRow> kl_profile(const std::vector<NamedStream>& streams,
                                     const std::vector<unsigned>& n_values, SegmentMode mode,
                                     const EntropyOptions& options = {},
                                     std::optional<unsigned> alignment_bits = std::nullopt);

// Columns: stream,mode,n,estimator,percentile,value,negative
std::string kl_profile_csv(const std::vector<KlProfileRow>& rows);

// Reproducible cryptographic-quality bits: the 64-bit seed, little-endian and
// zero-extended to 32 bytes, keys libsodium's deterministic generator.
BitStream rng_bitstream(std::size_t bit_length, std::uint64_t seed);

}  // namespace eqinfo
