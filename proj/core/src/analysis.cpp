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

#include "eqinfo/analysis.hpp"

#include <sodium.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "eqinfo/error.hpp"

namespace eqinfo {

std::string_view segment_mode_name(SegmentMode mode) {
  return mode == SegmentMode::kOverlappingNgram ? "ngram" : "token";
}

SegmentMode parse_segment_mode(std::string_view name) {
  if (name == "ngram") return SegmentMode::kOverlappingNgram;
  if (name == "token") return SegmentMode::kDisjointToken;
  throw Error(ErrorCode::kConfig, "unknown segmentation mode '" + std::string(name) + "'");
}

std::string_view estimator_name(Estimator estimator) {
  return estimator == Estimator::kPlugIn ? "plugin" : "miller-madow";
}

Estimator parse_estimator(std::string_view name) {
  if (name == "plugin") return Estimator::kPlugIn;
  if (name == "miller-madow" || name == "mm") return Estimator::kMillerMadow;
  throw Error(ErrorCode::kConfig, "unknown estimator '" + std::string(name) + "'");
}

std::vector<std::uint64_t> segment_counts(const BitStream& stream, std::size_t begin,
                                          std::size_t length, const SegmentationSpec& spec) {
  const unsigned n = spec.n;
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  if (length < n) return counts;
  if (spec.mode == SegmentMode::kDisjointToken) {
    for (std::size_t pos = begin; pos + n <= begin + length; pos += n) {
      ++counts[stream.read_uint(pos, n)];
    }
  } else {
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    std::uint64_t v = stream.read_uint(begin, n);
    ++counts[v];
    for (std::size_t pos = begin + n; pos < begin + length; ++pos) {
      v = ((v << 1) | (stream[pos] ? 1u : 0u)) & mask;
      ++counts[v];
    }
  }
  return counts;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kInsufficientData, "percentile of no values");
  std::sort(values.begin(), values.end());
  const double rank = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (rank - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EntropyReport estimate_entropy(const BitStream& stream, const SegmentationSpec& spec,
                               const EntropyOptions& options) {
  const unsigned n = spec.n;
  if (n < 1 || n > kMaxSegmentBits) {
    throw Error(ErrorCode::kConfig, "segment width must be in [1, 24], got " + std::to_string(n));
  }
  if (options.partitions == 0) throw Error(ErrorCode::kConfig, "partition count must be positive");
  if (spec.mode == SegmentMode::kDisjointToken && stream.size() % n != 0) {
    throw Error(ErrorCode::kMisalignedStream, "misaligned stream: " + std::to_string(stream.size()) +
                                                  " bits is not a multiple of " + std::to_string(n));
  }
  const std::size_t parts = options.partitions;
  // Token mode slices on token boundaries.
  const std::size_t unit = spec.mode == SegmentMode::kDisjointToken ? n : 1;
  const std::size_t slice = stream.size() / unit / parts * unit;
  const std::size_t per_part =
      spec.mode == SegmentMode::kDisjointToken ? slice / n : (slice >= n ? slice - n + 1 : 0);
  if (per_part < kMinSegmentsPerPartition) {
    const std::size_t need = spec.mode == SegmentMode::kDisjointToken
                                 ? parts * kMinSegmentsPerPartition * n
                                 : parts * (kMinSegmentsPerPartition + n - 1);
    throw Error(ErrorCode::kInsufficientData,
                "insufficient data: " + std::to_string(stream.size()) + " bits, need at least " +
                    std::to_string(need) + " for " + std::to_string(parts) + " partitions of " +
                    std::to_string(kMinSegmentsPerPartition) + " segments");
  }
  EntropyReport report;
  report.spec = spec;
  report.options = options;
  report.segments_per_partition = per_part;
  const double m = static_cast<double>(per_part);
  const double vocab = std::ldexp(1.0, static_cast<int>(n));
  for (std::size_t p = 0; p < parts; ++p) {
    const auto counts = segment_counts(stream, p * slice, slice, spec);
    double h = 0;
    for (const std::uint64_t c : counts) {
      if (c == 0) continue;
      const double q = static_cast<double>(c) / m;
      h -= q * std::log2(q);
    }
    if (options.estimator == Estimator::kMillerMadow) {
      const double bias = (vocab - 1) / (2 * m);
      h += options.literal_miller_madow ? bias : bias / std::numbers::ln2;
    }
    report.entropies.push_back(h);
    report.kl.push_back(static_cast<double>(n) - h);
  }
  report.kl_p5 = percentile(report.kl, 5);
  report.kl_p50 = percentile(report.kl, 50);
  report.kl_p95 = percentile(report.kl, 95);
  return report;
}

std::vector<KlProfileRow> kl_profile(const std::vector<NamedStream>& streams,
                                     const std::vector<unsigned>& n_values, SegmentMode mode,
                                     const EntropyOptions& options,
                                     std::optional<unsigned> alignment_bits) {
  if (mode == SegmentMode::kDisjointToken && alignment_bits) {
    for (const unsigned n : n_values) {
      if (n == 0 || *alignment_bits % n != 0) {
        throw Error(ErrorCode::kConfig, "token width " + std::to_string(n) +
                                            " does not divide window size " +
                                            std::to_string(*alignment_bits));
      }
    }
  }
  std::vector<KlProfileRow> rows;
  for (const auto& s : streams) {
    for (const unsigned n : n_values) {
      const EntropyReport r = estimate_entropy(s.bits, {mode, n}, options);
      for (const auto& [q, v] : {std::pair{5.0, r.kl_p5}, {50.0, r.kl_p50}, {95.0, r.kl_p95}}) {
        rows.push_back({s.name, mode, n, options.estimator, q, v, v < 0});
      }
    }
  }
  return rows;
}

std::string kl_profile_csv(const std::vector<KlProfileRow>& rows) {
  std::ostringstream os;
  os << "stream,mode,n,estimator,percentile,value,negative\n";
  for (const auto& r : rows) {
    os << r.stream << ',' << segment_mode_name(r.mode) << ',' << r.n << ','
       << estimator_name(r.estimator) << ',' << static_cast<int>(r.percentile) << ','
       << std::setprecision(9) << std::fixed << r.value << ',' << (r.negative ? 1 : 0) << '\n';
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

BitStream rng_bitstream(std::size_t bit_length, std::uint64_t seed) {
  if (sodium_init() < 0) throw Error(ErrorCode::kIo, "libsodium failed to initialize");
  unsigned char key[randombytes_SEEDBYTES] = {};
  for (int i = 0; i < 8; ++i) key[i] = static_cast<unsigned char>(seed >> (8 * i));
  std::vector<std::uint8_t> bytes((bit_length + 7) / 8);
  randombytes_buf_deterministic(bytes.data(), bytes.size(), key);
  return BitStream::from_bytes(bytes, bit_length);
}

}  // namespace eqinfo
