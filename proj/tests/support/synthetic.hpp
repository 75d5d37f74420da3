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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "refresh/corpus.hpp"
#include "refresh/model.hpp"
#include "refresh/nn/random.hpp"

namespace synth {

refresh::Sentence make_sentence(std::size_t index, std::vector<std::string> tokens);

// Tokens "t0".."t<vocab-1>" drawn uniformly.
std::vector<std::string> random_tokens(refresh::nn::Rng& rng, std::size_t length,
                                       std::size_t vocab);

refresh::Document random_document(refresh::nn::Rng& rng, std::string id,
                                  std::size_t sentences, std::size_t min_len,
                                  std::size_t max_len, std::size_t vocab,
                                  std::size_t highlights);

// Planted-signal corpus: every document has `sentences` sentences, of which
// `markers` (at random positions) carry words from a marker vocabulary that
// the highlights repeat. Other sentences draw only from a filler
// vocabulary that never reaches the highlights.
struct PlantedCorpus {
  std::vector<refresh::Document> train;
  std::vector<refresh::Document> validation;
};
PlantedCorpus planted_corpus(std::uint64_t seed, std::size_t train, std::size_t validation,
                             std::size_t sentences = 8, std::size_t markers = 3);

// Embedding 8, widths {1,2,3}, 4 channels, LSTM 16, up to 5 x 10.
refresh::ModelConfig tiny_config(std::uint64_t seed);

}  // namespace synth
