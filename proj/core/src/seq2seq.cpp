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

#include "eqinfo/seq2seq.hpp"

#include <json.hpp>

#include "eqinfo/error.hpp"
#include "eqinfo/tokenizer.hpp"
#include "eqinfo/window_codec.hpp"

namespace eqinfo {

std::string_view direction_name(Seq2SeqDirection direction) {
  switch (direction) {
    case Seq2SeqDirection::kCompress:
      return "compress";
    case Seq2SeqDirection::kDecompress:
      return "decompress";
    case Seq2SeqDirection::kByteLm:
      return "byte-lm";
  }
  return "?";
}

Seq2SeqDirection parse_direction(std::string_view name) {
  if (name == "compress") return Seq2SeqDirection::kCompress;
  if (name == "decompress") return Seq2SeqDirection::kDecompress;
  if (name == "byte-lm") return Seq2SeqDirection::kByteLm;
  throw Error(ErrorCode::kConfig, "unknown seq2seq direction '" + std::string(name) + "'");
}

Seq2SeqExample make_seq2seq(std::span<const Symbol> example, const ModelPtr& model,
                            unsigned token_bits, Seq2SeqDirection direction) {
  if (direction == Seq2SeqDirection::kByteLm) {
    return byte_lm_control(make_seq2seq(example, model, token_bits, Seq2SeqDirection::kDecompress));
  }
  const BitStream bits = compress_ac(example, model);
  const TokenSequence tokens = tokenize(bits, token_bits, /*allow_padding=*/true);
  const std::uint32_t symbol_shift = static_cast<std::uint32_t>(model->alphabet_size());
  const std::uint32_t token_shift = std::uint32_t{1} << token_bits;

  Seq2SeqExample out;
  out.direction = direction;
  out.token_bits = token_bits;
  out.bit_length = bits.size();
  if (direction == Seq2SeqDirection::kCompress) {
    out.inputs.assign(example.begin(), example.end());
    for (const std::uint32_t t : tokens.tokens) out.targets.push_back(t + symbol_shift);
  } else {
    out.inputs = tokens.tokens;
    for (const Symbol s : example) out.targets.push_back(s + token_shift);
  }
  return out;
}

Seq2SeqExample byte_lm_control(const Seq2SeqExample& decompress) {
  if (decompress.direction != Seq2SeqDirection::kDecompress) {
    throw Error(ErrorCode::kConfig, "byte-LM control is derived from a decompress record");
  }
  Seq2SeqExample out = decompress;
  out.direction = Seq2SeqDirection::kByteLm;
  out.inputs.clear();
  return out;
}

SymbolStream recover_symbols(const Seq2SeqExample& record, const ModelPtr& model) {
  const std::uint32_t symbol_shift = static_cast<std::uint32_t>(model->alphabet_size());
  const std::uint32_t token_shift = std::uint32_t{1} << record.token_bits;
  TokenSequence tokens;
  tokens.bit_depth = record.token_bits;
  SymbolStream symbols;
  auto unshift = [](std::uint32_t v, std::uint32_t shift) {
    if (v < shift) throw Error(ErrorCode::kCorruptStream, "target id below its vocabulary shift");
    return v - shift;
  };
  switch (record.direction) {
    case Seq2SeqDirection::kCompress:
      symbols.assign(record.inputs.begin(), record.inputs.end());
      for (const std::uint32_t t : record.targets) tokens.tokens.push_back(unshift(t, symbol_shift));
      break;
    case Seq2SeqDirection::kDecompress:
      tokens.tokens = record.inputs;
      [[fallthrough]];
    case Seq2SeqDirection::kByteLm:
      for (const std::uint32_t t : record.targets) {
        symbols.push_back(static_cast<Symbol>(unshift(t, token_shift)));
      }
      break;
  }
  if (record.direction == Seq2SeqDirection::kByteLm) return symbols;

  BitStream bits = detokenize(tokens);
  if (bits.size() < record.bit_length) {
    throw Error(ErrorCode::kCorruptStream, "token side shorter than recorded bit length");
  }
  bits.resize(record.bit_length);
  const SymbolStream decoded = decompress_ac(bits, model, symbols.size());
  if (decoded != symbols) {
    throw Error(ErrorCode::kCorruptStream, "seq2seq record sides disagree");
  }
  return decoded;
}

std::string seq2seq_record_json(const Seq2SeqExample& record) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSeq2SeqSchemaVersion;
  j["direction"] = std::string(direction_name(record.direction));
  j["token_bits"] = record.token_bits;
  j["bit_length"] = record.bit_length;
  j["inputs"] = record.inputs;
  j["targets"] = record.targets;
  return j.dump();
}

Seq2SeqExample parse_seq2seq_record(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    if (j.at("schema_version").get<int>() != kSeq2SeqSchemaVersion) {
      throw Error(ErrorCode::kFormat, "unsupported seq2seq schema version");
    }
    Seq2SeqExample r;
    r.direction = parse_direction(j.at("direction").get<std::string>());
    r.token_bits = j.at("token_bits").get<unsigned>();
    r.bit_length = j.at("bit_length").get<std::uint64_t>();
    r.inputs = j.at("inputs").get<std::vector<std::uint32_t>>();
    r.targets = j.at("targets").get<std::vector<std::uint32_t>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("seq2seq record: ") + e.what());
  }
}

}  // namespace eqinfo
