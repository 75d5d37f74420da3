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

#include "refresh/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "refresh/error.hpp"
#include "refresh/parallel.hpp"

namespace refresh::oracle {

Extract::Extract(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw DataError("an extract needs at least one sentence");
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw DataError("extract indices must be distinct");
  }
}

bool Extract::contains(std::size_t i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::vector<int> Extract::labels(std::size_t n) const {
  std::vector<int> y(n, 0);
  for (auto i : indices_) {
    if (i >= n) {
      throw DataError("extract index " + std::to_string(i) + " out of range for " +
                      std::to_string(n) + " sentences");
    }
    y[i] = 1;
  }
  return y;
}

void OracleConfig::validate() const {
  if (m < 1 || m > p) throw ConfigError("oracle config requires 1 <= m <= p");
  if (k < 1) throw ConfigError("oracle config requires k >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("oracle config requires 0 <= tau <= 1");
}

rouge::Reward extract_reward(const Document& doc, const Extract& extract,
                             const rouge::RougeConfig& config) {
  std::vector<Sentence> chosen;
  chosen.reserve(extract.size());
  for (std::size_t i : extract.indices()) {
    if (i >= doc.size()) {
      throw DataError("extract index " + std::to_string(i) + " outside document " + doc.id);
    }
    chosen.push_back(doc.sentences[i]);
  }
  return rouge::mean_rouge_reward(chosen, doc.highlights, config);
}

bool ranks_before(const ScoredExtract& a, const ScoredExtract& b) {
  if (a.reward != b.reward) return a.reward > b.reward;
  return a.extract.indices() < b.extract.indices();
}

std::vector<double> sentence_individual_scores(const Document& doc,
                                               const rouge::RougeConfig& config) {
  const rouge::DocumentScorer scorer(doc, config);
  std::vector<double> scores(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::size_t one[] = {i};
    scores[i] = scorer.score(one).value;
  }
  return scores;
}

std::vector<int> threshold_labels(std::span<const double> scores, double tau) {
  std::vector<int> y(scores.size());
  std::transform(scores.begin(), scores.end(), y.begin(),
                 [tau](double s) { return s >= tau ? 1 : 0; });
  return y;
}

std::vector<int> individual_labels(const Document& doc, const OracleConfig& config,
                                   const rouge::RougeConfig& rouge_config) {
  return threshold_labels(sentence_individual_scores(doc, rouge_config), config.tau);
}

namespace {

std::size_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  std::size_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

// Calls fn(subset) for every size-`size` subset of `pool` in lexicographic order.
template <class Fn>
void for_each_combination(const std::vector<std::size_t>& pool, std::size_t size, Fn&& fn) {
  if (size == 0 || size > pool.size()) return;
  std::vector<std::size_t> pick(size);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<std::size_t> subset(size);
  while (true) {
    for (std::size_t i = 0; i < size; ++i) subset[i] = pool[pick[i]];
    fn(subset);
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == pool.size() - size + (i - 1)) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace

std::size_t enumerated_extract_count(std::size_t n, const OracleConfig& config) {
  const std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(config.p), n);
  const std::size_t longest = std::min<std::size_t>(static_cast<std::size_t>(config.m), pool);
  std::size_t total = 0;
  for (std::size_t s = 1; s <= longest; ++s) total += binomial(pool, s);
  return total;
}

CandidateSet candidate_set(const Document& doc, const OracleConfig& config,
                           const rouge::RougeConfig& rouge_config) {
  config.validate();
  if (doc.sentences.empty()) throw DataError("document " + doc.id + " has no sentences");
  const rouge::DocumentScorer scorer(doc, rouge_config);

  std::vector<double> individual(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::size_t one[] = {i};
    individual[i] = scorer.score(one).value;
  }
  std::vector<std::size_t> order(doc.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return individual[a] > individual[b]; });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(config.p)));
  std::sort(order.begin(), order.end());

  std::vector<ScoredExtract> scored;
  scored.reserve(enumerated_extract_count(doc.size(), config));
  const std::size_t longest = std::min<std::size_t>(static_cast<std::size_t>(config.m), order.size());
  for (std::size_t size = 1; size <= longest; ++size) {
    for_each_combination(order, size, [&](const std::vector<std::size_t>& subset) {
      scored.push_back({Extract(subset), scorer.score(subset).value});
    });
  }
  std::sort(scored.begin(), scored.end(), ranks_before);
  scored.resize(std::min<std::size_t>(scored.size(), static_cast<std::size_t>(config.k)));
  return CandidateSet{doc.id, std::move(scored)};
}

std::vector<int> collective_labels(const Document& doc, const OracleConfig& config,
                                   const rouge::RougeConfig& rouge_config) {
  const auto set = candidate_set(doc, config, rouge_config);
  return set.ranked.front().extract.labels(doc.size());
}

PrecomputeReport precompute_candidates(std::span<const Document> corpus,
                                       const OracleConfig& config,
                                       const rouge::RougeConfig& rouge_config,
                                       unsigned threads) {
  config.validate();
  std::vector<std::optional<CandidateSet>> slots(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    if (corpus[i].highlights.empty()) return;
    slots[i] = candidate_set(corpus[i], config, rouge_config);
  });
  PrecomputeReport report;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!slots[i]) {
      report.skipped.push_back(corpus[i].id);
      continue;
    }
    if (!report.store.emplace(corpus[i].id, std::move(*slots[i])).second) {
      throw DataError("duplicate document id " + corpus[i].id);
    }
  }
  return report;
}

}  // namespace refresh::oracle
