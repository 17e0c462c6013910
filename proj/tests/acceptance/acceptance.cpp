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

#include <unistd.h>

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "eqinfo/analysis.hpp"
#include "eqinfo/container.hpp"
#include "eqinfo/metrics.hpp"
#include "eqinfo/tokenizer.hpp"

namespace fs = std::filesystem;
using boost::multiprecision::cpp_int;

namespace eqinfo {
namespace {

constexpr unsigned kOrder = 4;
constexpr std::size_t kJobs = 8;

struct Context {
  fs::path cli;
  fs::path data;
  std::vector<Example> train;
  std::vector<Example> eval;
  ModelPtr model;
  ModelPtr unigram;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double bit_ratio(const CompressedCorpus& c) {
  return 8.0 * static_cast<double>(c.total_symbols()) / static_cast<double>(c.total_bits());
}

MethodConfig config(Method m, unsigned w = 16, PaddingVariant v = PaddingVariant::kMaxFill) {
  MethodConfig c;
  c.method = m;
  c.window_bits = w;
  c.variant = v;
  return c;
}

bool same_symbols(const std::vector<SymbolStream>& got, std::span<const Example> want) {
  if (got.size() != want.size()) return false;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i] != want[i].symbols) return false;
  }
  return true;
}

Outcome roundtrip(const Context& ctx) {
  std::mt19937_64 rng(1);
  std::vector<Example> random(1000);
  for (auto& e : random) {
    e.symbols.resize(1 + rng() % 512);
    for (auto& s : e.symbols) s = static_cast<Symbol>(rng() % kAlphabetSize);
  }
  const std::span<const Example> real(ctx.eval.data(), std::min<std::size_t>(100, ctx.eval.size()));
  std::vector<std::pair<MethodConfig, ModelPtr>> settings{{config(Method::kAc), ctx.model},
                                                          {config(Method::kStaticAc), ctx.unigram}};
  for (const unsigned w : {16u, 32u, 64u, 128u}) {
    for (const auto v : {PaddingVariant::kMaxFill, PaddingVariant::kZeroAvoid}) {
      settings.push_back({config(Method::kEqualInfo, w, v), ctx.model});
    }
  }
  std::size_t checked = 0;
  for (const auto& [c, m] : settings) {
    for (const std::span<const Example> set : {std::span<const Example>(random), real}) {
      const auto corpus = compress_corpus(set, c, m, kJobs);
      if (!same_symbols(decompress_corpus(corpus, m, kJobs), set)) {
        return {false, fmt("mismatch for %s W=%u", std::string(method_name(c.method)).c_str(), c.window_bits)};
      }
      checked += set.size();
    }
  }
  return {real.size() == 100, fmt("%zu sequences over %zu settings, %zu real-text examples", checked,
                                  settings.size(), real.size())};
}

Outcome dyadic(const Context&) {
  auto model = std::make_shared<UniformModel>(256);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> raw(2 * (1 + rng() % 300));
    for (auto& b : raw) b = static_cast<std::uint8_t>(rng());
    const SymbolStream x(raw.begin(), raw.end());
    if (compress_ac(x, model) != BitStream::from_bytes(raw, 8 * raw.size())) return {false, "AC bits differ from bytes"};
    const auto windows = compress_equal_info(x, model, 16, PaddingVariant::kMaxFill);
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (windows[i].symbol_count != 2) return {false, "window without exactly 2 bytes"};
      if (windows[i].bits != BitStream::from_bytes(std::span(raw).subspan(2 * i, 2), 16)) {
        return {false, "window bits differ from bytes"};
      }
    }
  }
  return {true, "200 random byte strings"};
}

Outcome near_optimal(const Context&) {
  // Exhaustive up to length 8, 20000 samples per length above.
  const std::vector<std::vector<std::uint64_t>> panel{{4, 3, 2, 1}, {10, 5, 2, 1}};
  std::mt19937_64 rng(3);
  std::size_t checked = 0;
  long worst = -1000;
  for (const auto& freq : panel) {
    auto model = std::make_shared<StaticModel>(freq);
    const auto cdf = model->cdf({});
    auto check = [&](const SymbolStream& x) {
      cpp_int width = 1;
      for (const Symbol s : x) width *= cdf->width(s);
      const std::size_t len = compress_ac(x, model).size();
      const std::size_t shift = model->precision() * x.size();
      // len - 2 <= -log2(width / 2^shift), exactly.
      unsigned info = 0;
      while ((width << info) < (cpp_int(1) << shift)) ++info;
      worst = std::max(worst, static_cast<long>(len) - static_cast<long>(info));
      ++checked;
      return len < 2 || (width << (len - 2)) <= (cpp_int(1) << shift);
    };
    for (std::size_t n = 1; n <= 32; ++n) {
      SymbolStream x(n, 0);
      if (n <= 8) {
        for (std::size_t code = 0; code < (std::size_t{1} << (2 * n)); ++code) {
          for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<Symbol>((code >> (2 * i)) & 3);
          if (!check(x)) return {false, fmt("bound exceeded at length %zu", n)};
        }
      } else {
        for (int t = 0; t < 20000; ++t) {
          for (auto& s : x) s = static_cast<Symbol>(rng() % 4);
          if (!check(x)) return {false, fmt("bound exceeded at length %zu", n)};
        }
      }
    }
  }
  return {true, fmt("%zu sequences, worst length - ceil(info) = %+ld", checked, worst)};
}

Outcome flops_table(const Context&) {
  struct Row {
    double params, ratio, m1, want;
  };
  const Row rows[] = {{25e6, 1.0, 0, 50.00}, {25e6, 5.49, 3e6, 15.11}, {25e6, 2.66, 3e6, 24.80}, {25e6, 5.31, 3e6, 15.42}};
  std::string detail;
  bool ok = true;
  for (const auto& r : rows) {
    const double got = (r.m1 > 0 ? flops_per_byte(r.params, r.ratio, r.m1) : flops_per_byte(r.params, r.ratio)) / 1e6;
    ok = ok && std::fabs(std::round(got * 100) / 100 - r.want) < 1e-9;
    detail += fmt("%.2fM ", got);
  }
  return {ok, detail};
}

Outcome uniform_column(const Context&) {
  const double ratios[] = {1.0, 5.49, 2.66, 3.49, 4.16, 4.61};
  const double want[] = {8.000, 1.457, 3.008, 2.292, 1.923, 1.735};
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < 6; ++i) {
    const double got = bits_per_byte(std::log(256.0), ratios[i]);
    ok = ok && std::fabs(got - want[i]) <= 0.001;
    detail += fmt("%.3f ", got);
  }
  return {ok, detail};
}

struct DeskRuns {
  CompressedCorpus ac, static_ac, gzip, eq16_zero_avoid;
  std::vector<CompressedCorpus> eq;  // W = 16, 32, 64, 128
};

const DeskRuns& desk_runs(const Context& ctx) {
  static const DeskRuns runs = [&] {
    DeskRuns r;
    r.ac = compress_corpus(ctx.eval, config(Method::kAc), ctx.model, kJobs);
    r.static_ac = compress_corpus(ctx.eval, config(Method::kStaticAc), ctx.unigram, kJobs);
    r.gzip = compress_corpus(ctx.eval, config(Method::kGzip), nullptr, kJobs);
    for (const unsigned w : {16u, 32u, 64u, 128u}) {
      r.eq.push_back(compress_corpus(ctx.eval, config(Method::kEqualInfo, w), ctx.model, kJobs));
    }
    r.eq16_zero_avoid =
        compress_corpus(ctx.eval, config(Method::kEqualInfo, 16, PaddingVariant::kZeroAvoid), ctx.model, kJobs);
    return r;
  }();
  return runs;
}

Outcome ordering(const Context& ctx) {
  const auto& r = desk_runs(ctx);
  const double chain[] = {bit_ratio(r.static_ac), bit_ratio(r.eq[0]), bit_ratio(r.eq[1]),
                          bit_ratio(r.eq[2]),     bit_ratio(r.eq[3]), bit_ratio(r.ac)};
  bool ok = bit_ratio(r.eq16_zero_avoid) < bit_ratio(r.eq[0]);
  for (std::size_t i = 0; i + 1 < 6; ++i) ok = ok && chain[i] < chain[i + 1];
  return {ok, fmt("StaticAC %.3f < EqI16 %.3f < EqI32 %.3f < EqI64 %.3f < EqI128 %.3f < AC %.3f; "
                  "ZeroAvoid16 %.3f < MaxFill16 %.3f",
                  chain[0], chain[1], chain[2], chain[3], chain[4], chain[5], bit_ratio(r.eq16_zero_avoid),
                  chain[1])};
}

Outcome static_consistency(const Context& ctx) {
  std::vector<double> counts(kAlphabetSize, 0);
  double total = 0;
  for (const auto& e : ctx.eval) {
    for (const Symbol s : e.symbols) ++counts[s];
    total += static_cast<double>(e.symbols.size());
  }
  double h = 0;
  for (const double c : counts) {
    if (c > 0) h -= c / total * std::log2(c / total);
  }
  const double predicted = 8.0 / h;
  const double got = bit_ratio(desk_runs(ctx).static_ac);
  const double rel = std::fabs(got - predicted) / predicted;
  return {rel <= 0.02, fmt("ratio %.4f vs 8/H = %.4f (H = %.4f bits), off by %.2f%%", got, predicted, h, 100 * rel)};
}

Outcome near_uniform(const Context& ctx) {
  const auto stats = compute_stats(tokenize_corpus(desk_runs(ctx).ac, 8));
  return {stats.delta <= 0.05, fmt("delta %.5f bits/byte at token ratio %.3f", stats.delta, stats.token_ratio)};
}

BitStream token_stream(const CompressedCorpus& c, unsigned n) {
  const auto d = tokenize_corpus(c, n);
  TokenSequence t;
  t.bit_depth = n;
  t.tokens = d.tokens;
  return detokenize(t);
}

Outcome kl_suite(const Context& ctx) {
  const auto& r = desk_runs(ctx);
  EntropyOptions mm;
  mm.estimator = Estimator::kMillerMadow;
  const auto rng = estimate_entropy(rng_bitstream(8'000'000, 0), {SegmentMode::kDisjointToken, 8}, mm);
  const bool a = rng.kl_p5 <= 0 && 0 <= rng.kl_p95;

  // Equal sample size for every stream.
  std::vector<BitStream> streams{token_stream(r.gzip, 8), token_stream(r.eq[0], 8), token_stream(r.ac, 8)};
  std::size_t shortest = SIZE_MAX;
  for (const auto& s : streams) shortest = std::min(shortest, s.size());
  double kl[3];
  for (std::size_t i = 0; i < 3; ++i) {
    kl[i] = estimate_entropy(streams[i].slice(0, shortest), {SegmentMode::kDisjointToken, 8}).kl_p50;
  }
  const bool b = kl[0] > kl[1] && kl[1] > kl[2];

  const BitStream eq16 = streams[1].slice(0, shortest / 16 * 16);
  const double kl16 = estimate_entropy(eq16, {SegmentMode::kDisjointToken, 16}).kl_p50;
  const bool c = kl16 > kl[1];
  return {a && b && c,
          fmt("(a) %s RNG MM 90%% interval [%.4f, %.4f]; (b) %s GZip %.4f > EqI16 %.4f > AC %.4f; "
              "(c) %s EqI16 n=16 %.3f > n=8 %.3f",
              a ? "ok" : "FAIL", rng.kl_p5, rng.kl_p95, b ? "ok" : "FAIL", kl[0], kl[1], kl[2], c ? "ok" : "FAIL",
              kl16, kl[1])};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

Outcome integrity(const Context& ctx) {
  const fs::path work = fs::temp_directory_path() / fmt("eqinfo_acceptance_%d", static_cast<int>(::getpid()));
  fs::create_directories(work);
  const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  auto docs = load_corpus(std::vector<fs::path>{ctx.data / "desk_eval.txt"});
  docs.resize(std::min<std::size_t>(docs.size(), 600));
  const fs::path input = work / "input.txt";
  write_corpus(input, docs);
  const std::string cli = q(ctx.cli);
  std::string detail;
  bool ok = run(cli + " fit --order 2 --out " + q(work / "m.eqim") + " " + q(ctx.data / "desk_train.txt")) == 0;
  for (const std::string method : {"ac", "eqinfo", "gzip"}) {
    const std::string base = cli + " compress --method " + method + " --model " + q(work / "m.eqim") + " " +
                             q(input) + " --out ";
    ok = ok && run(base + q(work / (method + "1.eqic")) + " --jobs 1") == 0;
    ok = ok && run(base + q(work / (method + "8.eqic")) + " --jobs 8") == 0;
    const bool same = slurp(work / (method + "1.eqic")) == slurp(work / (method + "8.eqic"));
    ok = ok && run(cli + " tokenize --token-bits 8 --out " + q(work / (method + ".eqit")) + " " +
                   q(work / (method + "1.eqic"))) == 0;
    ok = ok && run(cli + " detokenize --out " + q(work / (method + "_back.eqic")) + " " +
                   q(work / (method + ".eqit"))) == 0;
    ok = ok && run(cli + " decompress --model " + q(work / "m.eqim") + " --out " + q(work / (method + ".txt")) +
                   " " + q(work / (method + "_back.eqic"))) == 0;
    const bool exact = slurp(work / (method + ".txt")) == slurp(input);
    ok = ok && same && exact;
    detail += method + (same ? " jobs-identical" : " jobs-DIFFER") + (exact ? " exact; " : " MISMATCH; ");
  }
  fs::remove_all(work);
  return {ok, fmt("%zu documents: ", docs.size()) + detail};
}

}  // namespace
}  // namespace eqinfo

int main(int argc, char** argv) {
  using namespace eqinfo;
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <eqinfo-cli> <data-dir>\n", argv[0]);
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  ctx.cli = argv[1];
  ctx.data = argv[2];
  ctx.train = build_examples(load_corpus(std::vector<fs::path>{ctx.data / "desk_train.txt"}));
  ctx.eval = build_examples(load_corpus(std::vector<fs::path>{ctx.data / "desk_eval.txt"}));
  ctx.model = std::make_shared<ContextModel>(fit_context_model(ctx.train, kOrder));
  ctx.unigram = std::make_shared<ContextModel>(fit_unigram(ctx.train));

  const std::pair<const char*, std::function<Outcome(const Context&)>> criteria[] = {
      {"lossless roundtrip", roundtrip},
      {"dyadic identity", dyadic},
      {"coder near-optimality", near_optimal},
      {"flops/byte table", flops_table},
      {"uniform bits/byte column", uniform_column},
      {"ratio ordering", ordering},
      {"static unigram consistency", static_consistency},
      {"token near-uniformity", near_uniform},
      {"entropy/KL suite", kl_suite},
      {"container/tokenizer integrity", integrity},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/10 criteria passed in %.1fs\n", 10 - failed, secs);
  return failed == 0 ? 0 : 1;
}
