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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "refresh/corpus.hpp"
#include "refresh/rouge.hpp"

namespace refresh::oracle {

// A non-empty, strictly increasing set of sentence indices.
class Extract {
 public:
  Extract() = default;
  // Sorts and validates; throws DataError on duplicates or an empty set.
  explicit Extract(std::vector<std::size_t> indices);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool contains(std::size_t i) const;
  // y_i = 1 iff i is in the extract. Throws when an index is >= n.
  std::vector<int> labels(std::size_t n) const;

  friend bool operator==(const Extract&, const Extract&) = default;
  friend auto operator<=>(const Extract&, const Extract&) = default;

 private:
  std::vector<std::size_t> indices_;
};

struct ScoredExtract {
  Extract extract;
  double reward = 0.0;  // mean_rouge_reward value against the highlights

  friend bool operator==(const ScoredExtract&, const ScoredExtract&) = default;
};

// Ranked top-k extracts for one document, rewards non-increasing.
struct CandidateSet {
  std::string document_id;
  std::vector<ScoredExtract> ranked;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

struct OracleConfig {
  int p = 10;        // pool of individually best sentences
  int m = 3;         // maximum extract length
  int k = 5;         // candidate-set size
  double tau = 0.15; // individual-label threshold

  // Throws ConfigError unless 1 <= m <= p, k >= 1, 0 <= tau <= 1.
  void validate() const;
};

// Descending reward, then lexicographically smaller index sequence.
bool ranks_before(const ScoredExtract& a, const ScoredExtract& b);

// mean_rouge_reward of the extract's sentences (document order) against the
// highlights. Throws DataError for an index outside the document.
rouge::Reward extract_reward(const Document& doc, const Extract& extract,
                             const rouge::RougeConfig& config);

// Each sentence scored alone with mean_rouge_reward.
std::vector<double> sentence_individual_scores(const Document& doc,
                                               const rouge::RougeConfig& config);

// y_i = 1 iff scores[i] >= tau.
std::vector<int> threshold_labels(std::span<const double> scores, double tau);

std::vector<int> individual_labels(const Document& doc, const OracleConfig& config,
                                   const rouge::RougeConfig& rouge_config);

// Top-p pool by individual score (ties to the lower index), every subset of
// the pool of size 1..min(m, pool), scored with sentences in document order,
// top-k by ranks_before.
CandidateSet candidate_set(const Document& doc, const OracleConfig& config,
                           const rouge::RougeConfig& rouge_config);

// Number of subsets candidate_set scores before the top-k cut.
std::size_t enumerated_extract_count(std::size_t n, const OracleConfig& config);

// Labels of the top-ranked extract of candidate_set.
std::vector<int> collective_labels(const Document& doc, const OracleConfig& config,
                                   const rouge::RougeConfig& rouge_config);

// --- Candidate store -------------------------------------------------------
//
// JSON-lines, version 1:
//   line 1: {"format":"refresh-candidates","version":1}
//   line k: {"candidates":[{"indices":[0,11,13],"reward":0.593...},...],"id":"..."}
// Rewards are written with round-trip precision.

using CandidateStore = std::map<std::string, CandidateSet>;

inline constexpr int kCandidateStoreVersion = 1;

struct PrecomputeReport {
  CandidateStore store;
  std::vector<std::string> skipped;  // ids of documents without highlights
};

// Computes one CandidateSet per document with highlights, optionally fanning
// out over `threads` workers. Output does not depend on the thread count.
PrecomputeReport precompute_candidates(std::span<const Document> corpus,
                                       const OracleConfig& config,
                                       const rouge::RougeConfig& rouge_config,
                                       unsigned threads = 1);

void write_candidate_store(const CandidateStore& store, std::ostream& out);
CandidateStore read_candidate_store(std::istream& in, const std::string& source);
void save_candidate_store(const CandidateStore& store, const std::filesystem::path& path);
CandidateStore load_candidate_store(const std::filesystem::path& path);

// Label files: one line per document, space-separated 0/1. An empty line
// marks a document that has no labels.
void write_label_file(std::span<const std::vector<int>> labels, std::ostream& out);
std::vector<std::vector<int>> read_label_file(std::istream& in, const std::string& source);

}  // namespace refresh::oracle
