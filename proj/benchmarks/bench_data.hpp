// Copyright 2026 The Refresh Authors.
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

#include <random>
#include <string>
#include <vector>

#include "refresh/corpus.hpp"

namespace bench {

// News-sized random document: `n` sentences of ~25 tokens, 4 highlights
// drawing on the same vocabulary.
inline refresh::Document random_document(std::size_t n, unsigned seed, std::size_t vocab = 400) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> length(15, 35);
  auto sentence = [&](std::size_t index) {
    refresh::Sentence s;
    s.index = index;
    const std::size_t len = length(gen);
    for (std::size_t i = 0; i < len; ++i) {
      s.tokens.push_back("w" + std::to_string(word(gen)));
      s.raw += (i ? " " : "") + s.tokens.back();
    }
    return s;
  };
  refresh::Document doc;
  doc.id = "bench-" + std::to_string(seed);
  for (std::size_t i = 0; i < n; ++i) doc.sentences.push_back(sentence(i));
  for (std::size_t i = 0; i < 4; ++i) doc.highlights.push_back(sentence(i));
  return doc;
}

}  // namespace bench
