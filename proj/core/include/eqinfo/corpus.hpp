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
#include <string>
#include <string_view>
#include <vector>

namespace eqinfo {

using Symbol = std::uint16_t;

inline constexpr std::size_t kByteValues = 256;
// End-of-document marker appended after every document.
inline constexpr Symbol kEos = 256;
inline constexpr std::size_t kAlphabetSize = 257;

inline constexpr std::size_t kDefaultGroupSize = 128;
inline constexpr std::size_t kDefaultExampleLength = 10240;

// Raw document bytes, never normalized. Always non-empty.
struct Document {
  std::string bytes;

  bool operator==(const Document&) const = default;
};

using SymbolStream = std::vector<Symbol>;

struct Example {
  SymbolStream symbols;
  // Index of the first symbol within the concatenated corpus stream.
  std::size_t source_offset = 0;
  // Shorter than the configured example length (end of a group).
  bool tail = false;
};

enum class CorpusFormat { kPlainText, kJsonLines };

// `.jsonl` / `.ndjson` are line-delimited records; anything else is plain text.
CorpusFormat detect_format(const std::filesystem::path& path);

// Documents are separated by runs of two or more newlines.
std::vector<Document> parse_plain_text(std::string_view text);
// One JSON object per non-blank line, document bytes taken from "text".
std::vector<Document> parse_json_lines(std::string_view text,
                                       std::string_view source_name = "");

// Loads every document from the given files. A directory contributes its
// regular files in lexicographic order.
std::vector<Document> load_corpus(std::span<const std::filesystem::path> paths);

std::string render_plain_text(std::span<const Document> docs);
std::string render_json_lines(std::span<const Document> docs);
void write_corpus(const std::filesystem::path& path,
                  std::span<const Document> docs);

// Each document's bytes followed by kEos, groups of `group_size` documents
// concatenated in order.
std::vector<SymbolStream> concatenate_groups(std::span<const Document> docs,
                                             std::size_t group_size = kDefaultGroupSize);
SymbolStream concatenate(std::span<const Document> docs,
                         std::size_t group_size = kDefaultGroupSize);

// Consecutive non-overlapping slices; a shorter final slice is kept and
// flagged as a tail. Offsets are relative to `base_offset`.
std::vector<Example> split_examples(std::span<const Symbol> stream,
                                    std::size_t example_len = kDefaultExampleLength,
                                    std::size_t base_offset = 0);

// Concatenates per group and splits each group separately, so every group
// may end in its own tail example.
std::vector<Example> build_examples(std::span<const Document> docs,
                                    std::size_t group_size = kDefaultGroupSize,
                                    std::size_t example_len = kDefaultExampleLength);

// Inverse of concatenate: cuts the stream at every kEos.
std::vector<Document> split_documents(std::span<const Symbol> stream);

struct CorpusSize {
  std::size_t documents = 0;
  std::size_t bytes = 0;    // document bytes only
  std::size_t symbols = 0;  // bytes plus one EOS per document
};

CorpusSize measure(std::span<const Document> docs);

}  // namespace eqinfo
