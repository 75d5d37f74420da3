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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "brute_rouge.hpp"
#include "refresh/corpus.hpp"
#include "refresh/error.hpp"
#include "refresh/nn/random.hpp"
#include "refresh/rouge.hpp"
#include "synthetic.hpp"

namespace refresh::rouge {
namespace {

const std::filesystem::path kData = REFRESH_TEST_DATA_DIR;

TokenSeq words(std::string_view s) {
  TokenSeq out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<TokenSeq> random_sentences(nn::Rng& rng, std::size_t n, std::size_t max_len,
                                       std::size_t vocab) {
  std::vector<TokenSeq> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(synth::random_tokens(rng, 1 + rng.below(max_len), vocab));
  }
  return out;
}

TokenSeq concat(const std::vector<TokenSeq>& sents) {
  TokenSeq out;
  for (const auto& s : sents) out.insert(out.end(), s.begin(), s.end());
  return out;
}

TEST(Ngrams, SlidingWindowMultiset) {
  const auto counts = count_ngrams(words("a b a b"), 2);
  ASSERT_EQ(counts.size(), 2u);
  EXPECT_EQ(counts.at({"a", "b"}), 2u);
  EXPECT_EQ(counts.at({"b", "a"}), 1u);
  EXPECT_TRUE(count_ngrams(words("a"), 2).empty());
  EXPECT_THROW(count_ngrams(words("a"), 0), ConfigError);
}

TEST(Ngrams, TotalCountIsLengthMinusNPlusOne) {
  nn::Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const auto toks = synth::random_tokens(rng, rng.below(15), 5);
    for (int n = 1; n <= 3; ++n) {
      std::size_t total = 0;
      for (const auto& [_, c] : count_ngrams(toks, n)) total += c;
      EXPECT_EQ(total, toks.size() >= static_cast<std::size_t>(n) ? toks.size() - n + 1 : 0u);
    }
  }
}

TEST(RougeN, ClippedOverlap) {
  const auto s = rouge_n(words("the cat the cat"), words("the cat sat"), 1);
  EXPECT_DOUBLE_EQ(s.precision, 2.0 / 4.0);
  EXPECT_DOUBLE_EQ(s.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.f1, 2 * 0.5 * (2.0 / 3.0) / (0.5 + 2.0 / 3.0));
}

TEST(RougeN, IdenticalIsOneDisjointIsZero) {
  const auto same = rouge_n(words("a b c"), words("a b c"), 2);
  EXPECT_EQ(same.f1, 1.0);
  EXPECT_EQ(rouge_n(words("a b"), words("c d"), 1).f1, 0.0);
  EXPECT_EQ(rouge_n({}, words("c d"), 1).f1, 0.0);
  EXPECT_EQ(rouge_n(words("a"), words("a"), 2).f1, 0.0);
}

TEST(RougeN, EmptySequencesScoreZero) {
  for (int n : {1, 2, 4}) {
    const auto a = rouge_n({}, words("a b c"), n);
    const auto b = rouge_n(words("a b c"), {}, n);
    EXPECT_EQ(a.f1, 0.0);
    EXPECT_EQ(b.f1, 0.0);
    EXPECT_EQ(rouge_n(words("a"), words("a"), 2).f1, 0.0);  // no bigrams at all
  }
  EXPECT_EQ(rouge_l_tokens({{}}, {words("a b")}).f1, 0.0);
}

TEST(RougeN, MatchesBruteForce) {
  nn::Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    const auto a = synth::random_tokens(rng, rng.below(20), 6);
    const auto b = synth::random_tokens(rng, rng.below(20), 6);
    for (int n = 1; n <= 2; ++n) {
      const auto got = rouge_n(a, b, n);
      const auto want = brute::rouge_n(a, b, n);
      EXPECT_NEAR(got.precision, want.p, 1e-12);
      EXPECT_NEAR(got.recall, want.r, 1e-12);
      EXPECT_NEAR(got.f1, want.f, 1e-12);
    }
  }
}

TEST(RougeN, SymmetricF1AndBounded) {
  nn::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto a = synth::random_tokens(rng, rng.below(12), 5);
    const auto b = synth::random_tokens(rng, rng.below(12), 5);
    const auto ab = rouge_n(a, b, 1);
    const auto ba = rouge_n(b, a, 1);
    EXPECT_DOUBLE_EQ(ab.f1, ba.f1);
    EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
    EXPECT_GE(ab.f1, 0.0);
    EXPECT_LE(ab.f1, 1.0);
  }
}

TEST(Lcs, Examples) {
  EXPECT_EQ(lcs_length(words("a b c d"), words("a c d")), 3u);
  EXPECT_EQ(lcs_length(words("a b"), {}), 0u);
  EXPECT_EQ(lcs_positions(words("a b c d"), words("b d")), (std::vector<std::size_t>{1, 3}));
}

TEST(Lcs, MatchesBruteForceAndPositionsAreACommonSubsequence) {
  nn::Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    const auto a = synth::random_tokens(rng, rng.below(11), 4);
    const auto b = synth::random_tokens(rng, rng.below(11), 4);
    const auto len = lcs_length(a, b);
    EXPECT_EQ(len, brute::lcs(a, b));
    EXPECT_EQ(len, brute::lcs_exhaustive(a, b));
    const auto pos = lcs_positions(a, b);
    ASSERT_EQ(pos.size(), len);
    TokenSeq picked;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (k > 0) EXPECT_LT(pos[k - 1], pos[k]);
      picked.push_back(a[pos[k]]);
    }
    EXPECT_EQ(brute::lcs(picked, b), picked.size());
  }
}

TEST(RougeL, SingleSentenceMatchesPlainLcs) {
  nn::Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto a = synth::random_tokens(rng, 1 + rng.below(10), 5);
    const auto b = synth::random_tokens(rng, 1 + rng.below(10), 5);
    const auto got = rouge_l_tokens({a}, {b});
    const auto want = brute::rouge_l(a, b);
    EXPECT_NEAR(got.f1, want.f, 1e-12);
  }
}

TEST(RougeL, UnionLcsMatchesExhaustiveOracle) {
  nn::Rng rng(6);
  for (int t = 0; t < 400; ++t) {
    const auto cands = random_sentences(rng, 1 + rng.below(3), 7, 5);
    const auto refs = random_sentences(rng, 1 + rng.below(3), 7, 5);
    const auto got = rouge_l_tokens(cands, refs, LcsMode::kUnion);
    const auto want = brute::union_rouge_l(cands, refs);
    EXPECT_NEAR(got.precision, want.p, 1e-12);
    EXPECT_NEAR(got.recall, want.r, 1e-12);
    EXPECT_NEAR(got.f1, want.f, 1e-12);
  }
}

TEST(RougeL, ConcatenatedModeUsesJoinedSequences) {
  nn::Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto cands = random_sentences(rng, 1 + rng.below(3), 6, 5);
    const auto refs = random_sentences(rng, 1 + rng.below(3), 6, 5);
    const auto got = rouge_l_tokens(cands, refs, LcsMode::kConcatenated);
    EXPECT_NEAR(got.f1, brute::rouge_l(concat(cands), concat(refs)).f, 1e-12);
  }
}

TEST(RougeL, HitsNeverExceedTokenCounts) {
  // A reference token repeated in several candidate sentences is credited
  // once per occurrence in the reference.
  const auto s = rouge_l_tokens({words("x a"), words("x b")}, {words("x")});
  EXPECT_DOUBLE_EQ(s.recall, 1.0);
  EXPECT_DOUBLE_EQ(s.precision, 1.0 / 4.0);
}

TEST(Normalize, LowercaseSplitAndStem) {
  RougeConfig cfg;
  const std::vector<Token> toks{"Chikungunya", "U.S.", "painful,", "The"};
  EXPECT_EQ(normalize_tokens(toks, cfg), (TokenSeq{"chikungunya", "u", "s", "pain", "the"}));
  cfg.stemming = false;
  EXPECT_EQ(normalize_tokens(toks, cfg), (TokenSeq{"chikungunya", "u", "s", "painful", "the"}));
}

TEST(Reward, MeanOfThreeF1AndErrors) {
  const Document doc = read_story_file(kData / "chikungunya.story");
  const RougeConfig cfg;
  const std::vector<Sentence> extract{doc.sentences[13]};
  const Reward r = mean_rouge_reward(extract, doc.highlights, cfg);
  EXPECT_DOUBLE_EQ(r.value, (r.rouge1.f1 + r.rouge2.f1 + r.rouge_l.f1) / 3.0);
  EXPECT_THROW(mean_rouge_reward(extract, {}, cfg), DataError);
  EXPECT_EQ(mean_rouge_reward({}, doc.highlights, cfg).value, 0.0);
}

TEST(Reward, HighlightsScoreOne) {
  const Document doc = read_story_file(kData / "chikungunya.story");
  const Reward r = mean_rouge_reward(doc.highlights, doc.highlights, RougeConfig{});
  EXPECT_DOUBLE_EQ(r.value, 1.0);
}

struct ReferenceRow {
  std::vector<std::size_t> indices;
  double r1, r2, rl;
};

std::vector<ReferenceRow> load_reference_scores() {
  std::ifstream in(kData / "chikungunya_reference_scores.tsv");
  std::vector<ReferenceRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    std::string idx;
    ReferenceRow row;
    ls >> idx >> row.r1 >> row.r2 >> row.rl;
    std::istringstream is(idx);
    for (std::string part; std::getline(is, part, ',');) row.indices.push_back(std::stoul(part));
    rows.push_back(row);
  }
  return rows;
}

TEST(Reward, GoldenArticleMatchesReferenceScorer) {
  const Document doc = read_story_file(kData / "chikungunya.story");
  const auto rows = load_reference_scores();
  ASSERT_EQ(rows.size(), 15u + 105u + 455u);
  for (const auto& row : rows) {
    std::vector<Sentence> extract;
    for (auto i : row.indices) extract.push_back(doc.sentences[i]);
    const Reward r = mean_rouge_reward(extract, doc.highlights, RougeConfig{});
    std::string label;
    for (auto i : row.indices) label += std::to_string(i) + " ";
    EXPECT_NEAR(r.rouge1.f1, row.r1, 1e-12) << label;
    EXPECT_NEAR(r.rouge2.f1, row.r2, 1e-12) << label;
    EXPECT_NEAR(r.rouge_l.f1, row.rl, 1e-12) << label;
  }
}

TEST(DocumentScorer, BitIdenticalToDirectScoring) {
  nn::Rng rng(8);
  std::vector<Document> docs{read_story_file(kData / "chikungunya.story")};
  for (int i = 0; i < 5; ++i) docs.push_back(synth::random_document(rng, "r", 8, 1, 9, 12, 3));
  for (const bool stem : {true, false}) {
    for (const auto mode : {LcsMode::kUnion, LcsMode::kConcatenated}) {
      const RougeConfig cfg{stem, mode};
      for (const auto& doc : docs) {
        const DocumentScorer scorer(doc, cfg);
        EXPECT_EQ(scorer.sentence_count(), doc.size());
        for (int t = 0; t < 30; ++t) {
          std::vector<std::size_t> idx;
          for (std::size_t k = 0, m = 1 + rng.below(3); k < m; ++k) idx.push_back(rng.below(doc.size()));
          std::vector<Sentence> extract;
          for (auto i : idx) extract.push_back(doc.sentences[i]);
          const Reward a = scorer.score(idx);
          const Reward b = mean_rouge_reward(extract, doc.highlights, cfg);
          EXPECT_EQ(a.value, b.value);
          EXPECT_EQ(a.rouge1.f1, b.rouge1.f1);
          EXPECT_EQ(a.rouge2.f1, b.rouge2.f1);
          EXPECT_EQ(a.rouge_l.f1, b.rouge_l.f1);
        }
      }
    }
  }
}

}  // namespace
}  // namespace refresh::rouge
