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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "refresh/corpus.hpp"

namespace refresh::rouge {

enum class LcsMode {
  kUnion,         // summary-level: union of LCS hits per reference sentence
  kConcatenated,  // plain LCS between the concatenated summaries
};

struct RougeConfig {
  bool stemming = true;
  LcsMode lcs_mode = LcsMode::kUnion;

  friend bool operator==(const RougeConfig&, const RougeConfig&) = default;
};

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  // Zero denominators give zero scores.
  static RougeScore from_counts(double hits, double candidate_total,
                                double reference_total);
};

// Mean of ROUGE-1, ROUGE-2 and ROUGE-L F1.
struct Reward {
  double value = 0.0;
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rouge_l;
};

using TokenSeq = std::vector<std::string>;
using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

// Exact sliding-window multiset. Throws ConfigError for n < 1.
NgramCounts count_ngrams(std::span<const std::string> tokens, int n);

// Clipped n-gram overlap on already-normalised tokens.
RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n);

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// Reference positions of one longest common subsequence of `reference` and
// `candidate`, ascending. Backtracking from the end prefers a match, then a
// step in the candidate when that keeps a strictly longer LCS, else a step
// in the reference.
std::vector<std::size_t> lcs_positions(std::span<const std::string> reference,
                                       std::span<const std::string> candidate);

// ROUGE-L over already-normalised sentences. In union mode each reference
// sentence contributes the union of its LCS hits against every candidate
// sentence; hits are clipped by token counts so a token is never credited
// more often than it occurs in either summary.
RougeScore rouge_l_tokens(const std::vector<TokenSeq>& candidate_sentences,
                          const std::vector<TokenSeq>& reference_sentences,
                          LcsMode mode = LcsMode::kUnion);

// Porter stem per token when config.stemming is on; identity otherwise.
// Tokens of three characters or fewer are never stemmed.
TokenSeq apply_stemming(std::span<const std::string> tokens, const RougeConfig& config);

// Scorer-side normalisation: lower-case, split on non-alphanumeric
// characters, drop empties, then apply_stemming.
TokenSeq normalize_tokens(std::span<const Token> tokens, const RougeConfig& config);

RougeScore rouge_l(std::span<const Sentence> candidate_sentences,
                   std::span<const Sentence> reference_sentences,
                   const RougeConfig& config);

// R1/R2 over concatenated tokens, RL per rouge_l. Throws DataError when
// `highlights` is empty. Sentences are used in the order given.
Reward mean_rouge_reward(std::span<const Sentence> extract_sentences,
                         std::span<const Sentence> highlights, const RougeConfig& config);

// Normalises and interns one document's sentences and highlights once so
// that many extracts can be scored cheaply. Produces bit-identical results
// to mean_rouge_reward.
class DocumentScorer {
 public:
  DocumentScorer(const Document& doc, const RougeConfig& config);

  // Sentences are concatenated in the order of `sentence_indices`.
  Reward score(std::span<const std::size_t> sentence_indices) const;
  std::size_t sentence_count() const noexcept { return sentences_.size(); }

 private:
  using Seq = std::vector<std::uint32_t>;
  std::uint32_t intern(const std::string& token);

  std::map<std::string, std::uint32_t> ids_;
  std::vector<Seq> sentences_;
  std::vector<Seq> highlights_;
  Seq highlight_concat_;
  LcsMode mode_;
};

}  // namespace refresh::rouge
