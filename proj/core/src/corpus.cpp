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

#include "eqinfo/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "eqinfo/error.hpp"

namespace eqinfo {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot read " + path.string());
  }
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "read failure on " + path.string());
  }
  return data;
}

std::vector<std::filesystem::path> expand(
    std::span<const std::filesystem::path> paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& path : paths) {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) {
      std::vector<std::filesystem::path> entries;
      for (const auto& entry : std::filesystem::directory_iterator(path, ec)) {
        if (entry.is_regular_file()) entries.push_back(entry.path());
      }
      if (ec) throw Error(ErrorCode::kIo, "cannot list " + path.string());
      std::sort(entries.begin(), entries.end());
      files.insert(files.end(), entries.begin(), entries.end());
    } else {
      files.push_back(path);
    }
  }
  return files;
}

}  // namespace

CorpusFormat detect_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".jsonl" || ext == ".ndjson") return CorpusFormat::kJsonLines;
  return CorpusFormat::kPlainText;
}

std::vector<Document> parse_plain_text(std::string_view text) {
  std::vector<Document> docs;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '\n') {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && text[run_end] == '\n') ++run_end;
    if (run_end - i >= 2) {
      if (i > start) docs.push_back(Document{std::string(text.substr(start, i - start))});
      start = run_end;
    }
    i = run_end;
  }
  if (text.size() > start) docs.push_back(Document{std::string(text.substr(start))});
  return docs;
}

std::vector<Document> parse_json_lines(std::string_view text,
                                       std::string_view source_name) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, std::string(source_name) + ":" +
                                          std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object() || !record.contains("text") ||
        !record["text"].is_string()) {
      throw Error(ErrorCode::kFormat, std::string(source_name) + ":" +
                                          std::to_string(line_no) +
                                          ": record has no string field \"text\"");
    }
    auto bytes = record["text"].get<std::string>();
    if (bytes.empty()) {
      throw Error(ErrorCode::kFormat, std::string(source_name) + ":" +
                                          std::to_string(line_no) + ": empty document");
    }
    docs.push_back(Document{std::move(bytes)});
  }
  return docs;
}

std::vector<Document> load_corpus(std::span<const std::filesystem::path> paths) {
  std::vector<Document> docs;
  for (const auto& file : expand(paths)) {
    const std::string data = read_file(file);
    auto parsed = detect_format(file) == CorpusFormat::kJsonLines
                      ? parse_json_lines(data, file.string())
                      : parse_plain_text(data);
    std::move(parsed.begin(), parsed.end(), std::back_inserter(docs));
  }
  if (docs.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "empty corpus");
  }
  return docs;
}

std::string render_plain_text(std::span<const Document> docs) {
  std::string out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i) out += "\n\n";
    out += docs[i].bytes;
  }
  return out;
}

std::string render_json_lines(std::span<const Document> docs) {
  std::string out;
  for (const auto& doc : docs) {
    // Invalid UTF-8 is replaced only in this rendering; the symbol stream is
    // untouched.
    out += nlohmann::json{{"text", doc.bytes}}.dump(
        -1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

void write_corpus(const std::filesystem::path& path,
                  std::span<const Document> docs) {
  const std::string data = detect_format(path) == CorpusFormat::kJsonLines
                               ? render_json_lines(docs)
                               : render_plain_text(docs);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failure on " + path.string());
}

std::vector<SymbolStream> concatenate_groups(std::span<const Document> docs,
                                             std::size_t group_size) {
  if (group_size == 0) {
    throw Error(ErrorCode::kConfig, "group size must be at least 1");
  }
  std::vector<SymbolStream> groups;
  for (std::size_t start = 0; start < docs.size(); start += group_size) {
    SymbolStream stream;
    const std::size_t stop = std::min(docs.size(), start + group_size);
    for (std::size_t i = start; i < stop; ++i) {
      for (unsigned char byte : docs[i].bytes) stream.push_back(byte);
      stream.push_back(kEos);
    }
    groups.push_back(std::move(stream));
  }
  return groups;
}

SymbolStream concatenate(std::span<const Document> docs, std::size_t group_size) {
  SymbolStream out;
  for (auto& group : concatenate_groups(docs, group_size)) {
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

std::vector<Example> split_examples(std::span<const Symbol> stream,
                                    std::size_t example_len,
                                    std::size_t base_offset) {
  if (example_len < 2) {
    throw Error(ErrorCode::kConfig, "example length must be at least 2");
  }
  std::vector<Example> out;
  for (std::size_t pos = 0; pos < stream.size(); pos += example_len) {
    const std::size_t len = std::min(example_len, stream.size() - pos);
    Example ex;
    ex.symbols.assign(stream.begin() + static_cast<std::ptrdiff_t>(pos),
                      stream.begin() + static_cast<std::ptrdiff_t>(pos + len));
    ex.source_offset = base_offset + pos;
    ex.tail = len < example_len;
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<Example> build_examples(std::span<const Document> docs,
                                    std::size_t group_size,
                                    std::size_t example_len) {
  std::vector<Example> out;
  std::size_t offset = 0;
  for (const auto& group : concatenate_groups(docs, group_size)) {
    auto examples = split_examples(group, example_len, offset);
    std::move(examples.begin(), examples.end(), std::back_inserter(out));
    offset += group.size();
  }
  return out;
}

std::vector<Document> split_documents(std::span<const Symbol> stream) {
  std::vector<Document> docs;
  std::string current;
  for (Symbol s : stream) {
    if (s == kEos) {
      docs.push_back(Document{std::move(current)});
      current.clear();
    } else if (s < kByteValues) {
      current.push_back(static_cast<char>(s));
    } else {
      throw Error(ErrorCode::kDomain, "symbol out of range: " + std::to_string(s));
    }
  }
  if (!current.empty()) {
    throw Error(ErrorCode::kFormat, "symbol stream does not end with EOS");
  }
  return docs;
}

CorpusSize measure(std::span<const Document> docs) {
  CorpusSize size;
  size.documents = docs.size();
  for (const auto& doc : docs) size.bytes += doc.bytes.size();
  size.symbols = size.bytes + size.documents;
  return size;
}

}  // namespace eqinfo
