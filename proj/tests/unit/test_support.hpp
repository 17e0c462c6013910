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

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "eqinfo/corpus.hpp"
#include "eqinfo/prob_model.hpp"

namespace eqinfo::testing {

inline std::filesystem::path data_dir() { return EQINFO_TEST_DATA_DIR; }

inline const std::vector<Document>& train_docs() {
  static const auto docs = [] {
    const std::vector<std::filesystem::path> p{data_dir() / "desk_train.txt"};
    return load_corpus(p);
  }();
  return docs;
}

inline const std::vector<Document>& eval_docs() {
  static const auto docs = [] {
    const std::vector<std::filesystem::path> p{data_dir() / "desk_eval.txt"};
    return load_corpus(p);
  }();
  return docs;
}

// Order-k model fitted once per process on the training split.
inline ModelPtr trained_model(unsigned order) {
  static std::vector<ModelPtr> cache(kMaxOrder + 1);
  if (!cache[order]) {
    const auto examples = build_examples(train_docs());
    cache[order] = std::make_shared<ContextModel>(fit_context_model(examples, order));
  }
  return cache[order];
}

// Eval-split examples of `length` symbols, at most `count` of them.
inline std::vector<Example> eval_examples(std::size_t count, std::size_t length) {
  auto ex = build_examples(eval_docs(), kDefaultGroupSize, length);
  std::erase_if(ex, [](const Example& e) { return e.tail; });
  if (ex.size() > count) ex.resize(count);
  return ex;
}

inline std::vector<Symbol> random_symbols(std::mt19937_64& rng, std::size_t n,
                                          std::size_t alphabet = kAlphabetSize) {
  std::vector<Symbol> x(n);
  for (auto& s : x) s = static_cast<Symbol>(rng() % alphabet);
  return x;
}

}  // namespace eqinfo::testing
