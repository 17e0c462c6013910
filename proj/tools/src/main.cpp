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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eqinfo/analysis.hpp"
#include "eqinfo/container.hpp"
#include "eqinfo/corpus.hpp"
#include "eqinfo/error.hpp"
#include "eqinfo/metrics.hpp"
#include "eqinfo/prob_model.hpp"
#include "eqinfo/seq2seq.hpp"
#include "eqinfo/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace eqinfo;

namespace {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string out;
  std::string model;
  std::string method = "ac";
  std::string variant = "maxfill";
  unsigned window_bits = 16;
  unsigned token_bits = 8;
  std::optional<unsigned> token_bits_override;
  unsigned order = 2;
  unsigned precision = kDefaultPrecision;
  std::size_t example_len = kDefaultExampleLength;
  std::size_t group_size = kDefaultGroupSize;
  bool strip_framing = false;
  std::optional<double> params;
  std::optional<double> m1_params;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  // stats
  bool bytes = false;
  // entropy
  bool rng = false;
  std::size_t rng_bits = 8'000'000;
  std::vector<unsigned> n_values = {8};
  std::string mode = "token";
  std::string estimator = "plugin";
  bool literal_mm = false;
  std::size_t partitions = kDefaultPartitions;
  // seq2seq
  std::string direction = "all";
  std::size_t seq2seq_len = kDefaultSeq2SeqLength;
};

std::vector<fs::path> as_paths(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  os << text;
  if (!os) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

void require_out(const RunConfig& c) {
  if (c.out.empty()) throw Error(ErrorCode::kConfig, "--out is required");
}

std::vector<std::uint8_t> magic_of(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::vector<std::uint8_t> m(4, 0);
  is.read(reinterpret_cast<char*>(m.data()), 4);
  return m;
}

bool has_magic(const std::string& path, std::string_view tag) {
  const auto m = magic_of(path);
  return std::equal(tag.begin(), tag.end(), m.begin(),
                    [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; });
}

ModelPtr load_model_ptr(const std::string& path) {
  return std::make_shared<ContextModel>(load_model(path));
}

MethodConfig method_config(const RunConfig& c) {
  MethodConfig m;
  m.method = parse_method(c.method);
  m.variant = parse_variant(c.variant);
  m.window_bits = c.window_bits;
  m.token_bits = c.token_bits;
  m.strip_framing = c.strip_framing;
  m.validate();
  return m;
}

int cmd_fit(const RunConfig& c) {
  require_out(c);
  if (c.order > kMaxOrder) {
    throw Error(ErrorCode::kConfig, "--order must be in [0, 4], got " + std::to_string(c.order));
  }
  const auto docs = load_corpus(as_paths(c.inputs));
  const auto examples = build_examples(docs, c.group_size, c.example_len);
  const auto params = fit_context_model(examples, c.order, c.precision);
  save_model(c.out, params);
  const ContextModel model(params);
  std::cout << "model " << model.model_id() << " digest " << to_hex(model.params_digest()) << "\n"
            << "fitted on " << docs.size() << " documents, " << examples.size()
            << " examples -> " << c.out << "\n";
  return 0;
}

int cmd_compress(const RunConfig& c) {
  const MethodConfig mc = method_config(c);
  require_out(c);
  ModelPtr model;
  if (mc.method != Method::kGzip) {
    if (c.model.empty()) {
      throw Error(ErrorCode::kConfig, "--model is required for --method " + c.method);
    }
    model = load_model_ptr(c.model);
    if (mc.method == Method::kStaticAc && model->context_capacity() != 0) {
      throw Error(ErrorCode::kConfig, "--method static-ac needs an order-0 model, got " +
                                          model->model_id());
    }
  }
  const auto docs = load_corpus(as_paths(c.inputs));
  const auto examples = build_examples(docs, c.group_size, c.example_len);
  const CompressedCorpus corpus = compress_corpus(examples, mc, model, c.jobs);
  save_container(c.out, corpus);
  const std::uint64_t bits = corpus.total_bits();
  std::cout << method_name(mc.method) << ": " << examples.size() << " examples, "
            << corpus.total_symbols() << " symbols -> " << bits << " bits ("
            << std::fixed << std::setprecision(4)
            << (bits ? 8.0 * static_cast<double>(corpus.total_symbols()) / static_cast<double>(bits) : 0.0)
            << " bit ratio) -> " << c.out << "\n";
  return 0;
}

CompressedCorpus load_any_container(const std::string& path) {
  if (has_magic(path, "EQIT")) return detokenize_corpus(load_tokens(path));
  return load_container(path);
}

int cmd_decompress(const RunConfig& c) {
  require_out(c);
  if (c.inputs.size() != 1) throw Error(ErrorCode::kConfig, "decompress takes one container");
  const CompressedCorpus corpus = load_any_container(c.inputs[0]);
  ModelPtr model;
  if (corpus.config.method != Method::kGzip) {
    if (c.model.empty()) throw Error(ErrorCode::kConfig, "--model is required to decompress");
    model = load_model_ptr(c.model);
  }
  const auto streams = decompress_corpus(corpus, model, c.jobs);
  SymbolStream all;
  for (const auto& s : streams) all.insert(all.end(), s.begin(), s.end());
  const auto docs = split_documents(all);
  write_corpus(c.out, docs);
  std::cout << "decompressed " << docs.size() << " documents -> " << c.out << "\n";
  return 0;
}

int cmd_tokenize(const RunConfig& c) {
  require_out(c);
  if (c.inputs.size() != 1) throw Error(ErrorCode::kConfig, "tokenize takes one container");
  const CompressedCorpus corpus = load_container(c.inputs[0]);
  const unsigned n = c.token_bits_override.value_or(corpus.config.token_bits);
  const TokenDataset ds = tokenize_corpus(corpus, n);
  save_tokens(c.out, ds);
  std::cout << ds.tokens.size() << " tokens of " << n << " bits -> " << c.out << "\n";
  return 0;
}

int cmd_detokenize(const RunConfig& c) {
  require_out(c);
  if (c.inputs.size() != 1) throw Error(ErrorCode::kConfig, "detokenize takes one token file");
  const CompressedCorpus corpus = detokenize_corpus(load_tokens(c.inputs[0]));
  save_container(c.out, corpus);
  std::cout << corpus.examples.size() << " examples -> " << c.out << "\n";
  return 0;
}

TokenDataset load_token_view(const std::string& path, std::optional<unsigned> n) {
  if (has_magic(path, "EQIT")) {
    TokenDataset ds = load_tokens(path);
    if (n && *n != ds.bit_depth) ds = tokenize_corpus(detokenize_corpus(ds), *n);
    return ds;
  }
  const CompressedCorpus corpus = load_container(path);
  return tokenize_corpus(corpus, n.value_or(corpus.config.token_bits));
}

int cmd_stats(const RunConfig& c) {
  std::vector<CompressionStats> rows;
  if (c.bytes) {
    rows.push_back(byte_identity_stats(load_corpus(as_paths(c.inputs)), c.params));
  } else {
    if (c.inputs.empty()) throw Error(ErrorCode::kConfig, "stats needs a container or token file");
    for (const auto& path : c.inputs) {
      rows.push_back(compute_stats(load_token_view(path, c.token_bits_override), c.params, c.m1_params));
    }
  }
  for (const auto& s : rows) {
    std::cout << std::fixed << std::setprecision(3) << s.method
              << (s.window_bits ? "[" + std::to_string(s.window_bits) + "]" : std::string())
              << " v=" << s.vocab_size << "  token ratio " << s.token_ratio << "  bit ratio "
              << s.bit_ratio << "  uniform " << s.uniform_bpb << "  unigram " << s.unigram_bpb
              << "  delta " << s.delta;
    if (s.flops_per_byte) std::cout << "  flops/byte " << std::setprecision(2) << *s.flops_per_byte / 1e6 << "M";
    std::cout << "\n";
  }
  if (!c.out.empty()) {
    const bool json = fs::path(c.out).extension() == ".json";
    write_text(c.out, json ? stats_json(rows) : stats_csv(rows));
  }
  return 0;
}

BitStream analysis_stream(const std::string& path, SegmentMode mode, unsigned n) {
  if (has_magic(path, "EQIT")) {
    const TokenDataset ds = load_tokens(path);
    TokenSequence seq;
    seq.bit_depth = ds.bit_depth;
    seq.tokens = ds.tokens;
    return detokenize(seq);
  }
  const CompressedCorpus corpus = load_container(path);
  BitStream all;
  for (const auto& ex : corpus.examples) {
    BitStream bits = ex.bits;
    // Tokens never straddle examples.
    if (mode == SegmentMode::kDisjointToken) bits.resize((bits.size() + n - 1) / n * n);
    all.append(bits);
  }
  return all;
}

int cmd_entropy(const RunConfig& c) {
  const SegmentMode mode = parse_segment_mode(c.mode);
  EntropyOptions opts;
  opts.estimator = parse_estimator(c.estimator);
  opts.partitions = c.partitions;
  opts.literal_miller_madow = c.literal_mm;
  std::vector<KlProfileRow> rows;
  auto run = [&](const std::string& name, auto make_stream, std::optional<unsigned> align) {
    for (const unsigned n : c.n_values) {
      std::vector<NamedStream> s{{name, make_stream(n)}};
      const auto r = kl_profile(s, {n}, mode, opts, align);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  };
  if (c.rng) {
    const BitStream rng = rng_bitstream(c.rng_bits, c.seed);
    run("rng", [&](unsigned) { return rng; }, std::nullopt);
  }
  for (const auto& path : c.inputs) {
    std::optional<unsigned> align;
    if (!has_magic(path, "EQIT")) {
      const CompressedCorpus corpus = load_container(path);
      if (corpus.config.method == Method::kEqualInfo) align = corpus.config.window_bits;
    }
    run(fs::path(path).filename().string(), [&](unsigned n) { return analysis_stream(path, mode, n); }, align);
  }
  if (rows.empty()) throw Error(ErrorCode::kConfig, "entropy needs --rng or input files");
  for (const auto& r : rows) {
    if (r.percentile != 50) continue;
    std::cout << r.stream << " n=" << r.n << " " << estimator_name(r.estimator) << " KL median "
              << std::fixed << std::setprecision(6) << r.value;
    const auto lo = std::find_if(rows.begin(), rows.end(), [&](const KlProfileRow& x) {
      return x.stream == r.stream && x.n == r.n && x.percentile == 5;
    });
    const auto hi = std::find_if(rows.begin(), rows.end(), [&](const KlProfileRow& x) {
      return x.stream == r.stream && x.n == r.n && x.percentile == 95;
    });
    std::cout << "  90% interval [" << lo->value << ", " << hi->value << "]"
              << (lo->value <= 0 && hi->value >= 0 ? " contains 0" : "") << "\n";
  }
  if (!c.out.empty()) write_text(c.out, kl_profile_csv(rows));
  return 0;
}

int cmd_seq2seq(const RunConfig& c) {
  require_out(c);
  if (c.model.empty()) throw Error(ErrorCode::kConfig, "--model is required for seq2seq");
  if (c.token_bits < 1 || c.token_bits > kMaxTokenBits) {
    throw Error(ErrorCode::kConfig, "--token-bits must be in [1, 16]");
  }
  std::vector<Seq2SeqDirection> directions;
  if (c.direction == "all") {
    directions = {Seq2SeqDirection::kCompress, Seq2SeqDirection::kDecompress, Seq2SeqDirection::kByteLm};
  } else {
    directions = {parse_direction(c.direction)};
  }
  const ModelPtr model = load_model_ptr(c.model);
  const auto docs = load_corpus(as_paths(c.inputs));
  const auto examples = build_examples(docs, c.group_size, c.seq2seq_len);
  std::vector<std::string> lines(examples.size());
  parallel_for(examples.size(), c.jobs, [&](std::size_t i) {
    std::string block;
    for (const auto d : directions) {
      block += seq2seq_record_json(make_seq2seq(examples[i].symbols, model, c.token_bits, d));
      block += '\n';
    }
    lines[i] = std::move(block);
  });
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot write '" + c.out + "'");
  for (const auto& l : lines) os << l;
  std::cout << examples.size() * directions.size() << " records -> " << c.out << "\n";
  return 0;
}

int report(const Error& e) {
  const bool config = e.code() == ErrorCode::kConfig;
  std::cerr << (config ? "config-error: " : "error: ") << e.what() << "\n";
  return config ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eqinfo: arithmetic-coding compression as tokenization"};
  app.require_subcommand(1);
  RunConfig c;

  auto corpus_opts = [&](CLI::App* sub) {
    sub->add_option("--example-len", c.example_len, "Symbols per example")->check(CLI::Range(2, 1 << 30));
    sub->add_option("--group-size", c.group_size, "Documents per concatenation group")->check(CLI::PositiveNumber);
  };
  auto jobs_opt = [&](CLI::App* sub) {
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  auto* fit = app.add_subcommand("fit", "Fit an order-k context model");
  fit->add_option("inputs", c.inputs, "Corpus files or directories")->required();
  fit->add_option("--order", c.order, "Context order (0..4)");
  fit->add_option("--precision", c.precision, "CDF precision in bits")->check(CLI::Range(kMinPrecision, kMaxPrecision));
  fit->add_option("--out", c.out, "Model file");
  corpus_opts(fit);

  auto* compress = app.add_subcommand("compress", "Compress a corpus into a container");
  compress->add_option("inputs", c.inputs, "Corpus files or directories")->required();
  compress->add_option("--model", c.model, "Model file");
  compress->add_option("--method", c.method, "ac, static-ac, eqinfo or gzip");
  compress->add_option("--window-bits", c.window_bits, "Equal-Info window size W");
  compress->add_option("--token-bits", c.token_bits, "Token bit depth N");
  compress->add_option("--variant", c.variant, "maxfill or zeroavoid");
  compress->add_flag("--strip-framing", c.strip_framing, "Drop the zlib header and trailer");
  compress->add_option("--out", c.out, "Container file");
  corpus_opts(compress);
  jobs_opt(compress);

  auto* decompress = app.add_subcommand("decompress", "Restore a corpus from a container");
  decompress->add_option("inputs", c.inputs, "Container or token file")->required();
  decompress->add_option("--model", c.model, "Model file");
  decompress->add_option("--out", c.out, "Output corpus (.txt or .jsonl)");
  jobs_opt(decompress);

  auto* tokenize_cmd = app.add_subcommand("tokenize", "Chunk a container into N-bit tokens");
  tokenize_cmd->add_option("inputs", c.inputs, "Container file")->required();
  tokenize_cmd->add_option("--token-bits", c.token_bits_override, "Token bit depth N");
  tokenize_cmd->add_option("--out", c.out, "Token file");

  auto* detokenize_cmd = app.add_subcommand("detokenize", "Rebuild a container from tokens");
  detokenize_cmd->add_option("inputs", c.inputs, "Token file")->required();
  detokenize_cmd->add_option("--out", c.out, "Container file");

  auto* stats = app.add_subcommand("stats", "Compression ratios, bits/byte and FLOPs/byte");
  stats->add_option("inputs", c.inputs, "Containers or token files (corpus with --bytes)")->required();
  stats->add_flag("--bytes", c.bytes, "Treat inputs as a corpus under the byte identity tokenizer");
  stats->add_option("--token-bits", c.token_bits_override, "Re-chunk at this bit depth");
  stats->add_option("--params", c.params, "Non-embedding parameters of the downstream model");
  stats->add_option("--m1-params", c.m1_params, "Parameters of the compressor model");
  stats->add_option("--out", c.out, "Report file (.csv or .json)");

  auto* entropy = app.add_subcommand("entropy", "KL-from-uniform profile of bitstreams");
  entropy->add_option("inputs", c.inputs, "Containers or token files");
  entropy->add_flag("--rng", c.rng, "Include a seeded random baseline");
  entropy->add_option("--rng-bits", c.rng_bits, "Length of the random baseline");
  entropy->add_option("--n", c.n_values, "Segment widths")->delimiter(',')->check(CLI::Range(1u, kMaxSegmentBits));
  entropy->add_option("--mode", c.mode, "token or ngram");
  entropy->add_option("--estimator", c.estimator, "plugin or miller-madow");
  entropy->add_flag("--literal-mm", c.literal_mm, "Miller-Madow term without the 1/ln 2 factor");
  entropy->add_option("--partitions", c.partitions, "Disjoint partitions");
  entropy->add_option("--seed", c.seed, "Random baseline seed");
  entropy->add_option("--out", c.out, "KL profile CSV");

  auto* seq2seq = app.add_subcommand("seq2seq", "Emit compression/decompression seq2seq records");
  seq2seq->add_option("inputs", c.inputs, "Corpus files or directories")->required();
  seq2seq->add_option("--model", c.model, "Model file");
  seq2seq->add_option("--token-bits", c.token_bits, "Token bit depth N");
  seq2seq->add_option("--direction", c.direction, "compress, decompress, byte-lm or all");
  seq2seq->add_option("--out", c.out, "JSON-lines output");
  seq2seq->add_option("--example-len", c.seq2seq_len, "Symbols per example")->check(CLI::Range(2, 1 << 30));
  seq2seq->add_option("--group-size", c.group_size, "Documents per concatenation group")->check(CLI::PositiveNumber);
  jobs_opt(seq2seq);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config-error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*fit) return cmd_fit(c);
    if (*compress) return cmd_compress(c);
    if (*decompress) return cmd_decompress(c);
    if (*tokenize_cmd) return cmd_tokenize(c);
    if (*detokenize_cmd) return cmd_detokenize(c);
    if (*stats) return cmd_stats(c);
    if (*entropy) return cmd_entropy(c);
    if (*seq2seq) return cmd_seq2seq(c);
  } catch (const Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
