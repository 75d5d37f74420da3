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

#include "refresh/rouge.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "refresh/error.hpp"
#include "refresh/porter_stemmer.hpp"

namespace refresh::rouge {
namespace {

struct OverlapCounts {
  std::size_t hits = 0;
  std::size_t candidate_total = 0;
  std::size_t reference_total = 0;
};

// Start offsets of every n-gram window, sorted lexicographically by content.
template <class T>
std::vector<std::size_t> sorted_windows(std::span<const T> tokens, std::size_t n) {
  std::vector<std::size_t> starts;
  if (tokens.size() < n) return starts;
  starts.resize(tokens.size() - n + 1);
  for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = i;
  std::sort(starts.begin(), starts.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(tokens.begin() + a, tokens.begin() + a + n,
                                        tokens.begin() + b, tokens.begin() + b + n);
  });
  return starts;
}

// Clipped match count: sum over distinct n-grams of min(count_cand, count_ref).
template <class T>
OverlapCounts ngram_overlap(std::span<const T> cand, std::span<const T> ref, std::size_t n) {
  OverlapCounts out;
  const auto cw = sorted_windows(cand, n);
  const auto rw = sorted_windows(ref, n);
  out.candidate_total = cw.size();
  out.reference_total = rw.size();
  auto gram = [n](std::span<const T> s, std::size_t at) { return s.subspan(at, n); };
  auto less = [](std::span<const T> a, std::span<const T> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  };
  std::size_t i = 0, j = 0;
  while (i < cw.size() && j < rw.size()) {
    const auto a = gram(cand, cw[i]);
    const auto b = gram(ref, rw[j]);
    if (less(a, b)) {
      ++i;
    } else if (less(b, a)) {
      ++j;
    } else {
      std::size_t ci = i, rj = j;
      while (ci < cw.size() && std::ranges::equal(gram(cand, cw[ci]), a)) ++ci;
      while (rj < rw.size() && std::ranges::equal(gram(ref, rw[rj]), a)) ++rj;
      out.hits += std::min(ci - i, rj - j);
      i = ci;
      j = rj;
    }
  }
  return out;
}

// (|a|+1) x (|b|+1) table of LCS lengths of prefixes.
template <class T>
std::vector<std::uint32_t> lcs_table(std::span<const T> a, std::span<const T> b) {
  const std::size_t cols = b.size() + 1;
  std::vector<std::uint32_t> t((a.size() + 1) * cols, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      t[i * cols + j] = a[i - 1] == b[j - 1]
                            ? t[(i - 1) * cols + j - 1] + 1
                            : std::max(t[(i - 1) * cols + j], t[i * cols + j - 1]);
    }
  }
  return t;
}

template <class T>
std::vector<std::size_t> lcs_ref_positions(std::span<const T> ref, std::span<const T> cand) {
  const auto t = lcs_table(ref, cand);
  const std::size_t cols = cand.size() + 1;
  std::vector<std::size_t> pos;
  std::size_t i = ref.size(), j = cand.size();
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      pos.push_back(i - 1);
      --i;
      --j;
    } else if (t[i * cols + j - 1] > t[(i - 1) * cols + j]) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(pos.begin(), pos.end());
  return pos;
}

template <class T>
std::vector<T> concat(const std::vector<std::vector<T>>& parts) {
  std::vector<T> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

template <class T>
RougeScore lcs_score(const std::vector<std::vector<T>>& cand,
                     const std::vector<std::vector<T>>& ref, LcsMode mode) {
  if (mode == LcsMode::kConcatenated) {
    const auto c = concat(cand);
    const auto r = concat(ref);
    const auto t = lcs_table<T>(r, c);
    return RougeScore::from_counts(t.back(), c.size(), r.size());
  }
  std::size_t cand_total = 0, ref_total = 0;
  std::map<T, long> cand_counts, ref_counts;
  for (const auto& s : cand) {
    cand_total += s.size();
    for (const auto& t : s) ++cand_counts[t];
  }
  for (const auto& s : ref) {
    ref_total += s.size();
    for (const auto& t : s) ++ref_counts[t];
  }
  if (cand_total == 0 || ref_total == 0) return {};
  std::size_t hits = 0;
  for (const auto& r : ref) {
    std::set<std::size_t> hit_positions;
    for (const auto& c : cand) {
      for (auto p : lcs_ref_positions<T>(r, c)) hit_positions.insert(p);
    }
    for (auto p : hit_positions) {
      long& cc = cand_counts[r[p]];
      long& rc = ref_counts[r[p]];
      if (cc > 0 && rc > 0) {
        ++hits;
        --cc;
        --rc;
      }
    }
  }
  return RougeScore::from_counts(static_cast<double>(hits), cand_total, ref_total);
}

RougeScore from_overlap(const OverlapCounts& o) {
  return RougeScore::from_counts(static_cast<double>(o.hits),
                                 static_cast<double>(o.candidate_total),
                                 static_cast<double>(o.reference_total));
}

template <class T>
Reward reward_from(const std::vector<std::vector<T>>& cand,
                   const std::vector<std::vector<T>>& ref, const std::vector<T>& ref_concat,
                   LcsMode mode) {
  const auto cand_concat = concat(cand);
  Reward r;
  r.rouge1 = from_overlap(ngram_overlap<T>(cand_concat, ref_concat, 1));
  r.rouge2 = from_overlap(ngram_overlap<T>(cand_concat, ref_concat, 2));
  r.rouge_l = lcs_score(cand, ref, mode);
  r.value = (r.rouge1.f1 + r.rouge2.f1 + r.rouge_l.f1) / 3.0;
  return r;
}

std::vector<TokenSeq> normalize_sentences(std::span<const Sentence> sentences,
                                          const RougeConfig& config) {
  std::vector<TokenSeq> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back(normalize_tokens(s.tokens, config));
  return out;
}

}  // namespace

RougeScore RougeScore::from_counts(double hits, double candidate_total,
                                   double reference_total) {
  RougeScore s;
  s.precision = candidate_total > 0 ? hits / candidate_total : 0.0;
  s.recall = reference_total > 0 ? hits / reference_total : 0.0;
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

NgramCounts count_ngrams(std::span<const std::string> tokens, int n) {
  if (n < 1) throw ConfigError("n-gram order must be >= 1");
  NgramCounts counts;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + un)];
  }
  return counts;
}

RougeScore rouge_n(std::span<const std::string> candidate,
                   std::span<const std::string> reference, int n) {
  if (n < 1) throw ConfigError("n-gram order must be >= 1");
  return from_overlap(ngram_overlap(candidate, reference, static_cast<std::size_t>(n)));
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  return lcs_table(a, b).back();
}

std::vector<std::size_t> lcs_positions(std::span<const std::string> reference,
                                       std::span<const std::string> candidate) {
  return lcs_ref_positions(reference, candidate);
}

RougeScore rouge_l_tokens(const std::vector<TokenSeq>& candidate_sentences,
                          const std::vector<TokenSeq>& reference_sentences, LcsMode mode) {
  return lcs_score(candidate_sentences, reference_sentences, mode);
}

TokenSeq apply_stemming(std::span<const std::string> tokens, const RougeConfig& config) {
  TokenSeq out(tokens.begin(), tokens.end());
  if (!config.stemming) return out;
  for (auto& t : out) {
    if (t.size() > 3) t = porter_stem(t);
  }
  return out;
}

TokenSeq normalize_tokens(std::span<const Token> tokens, const RougeConfig& config) {
  TokenSeq pieces;
  for (const auto& token : tokens) {
    std::string cur;
    for (char ch : token) {
      const auto u = static_cast<unsigned char>(ch);
      if (u < 0x80 && std::isalnum(u)) {
        cur.push_back(static_cast<char>(std::tolower(u)));
      } else if (!cur.empty()) {
        pieces.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) pieces.push_back(std::move(cur));
  }
  return apply_stemming(pieces, config);
}

RougeScore rouge_l(std::span<const Sentence> candidate_sentences,
                   std::span<const Sentence> reference_sentences, const RougeConfig& config) {
  return lcs_score(normalize_sentences(candidate_sentences, config),
                   normalize_sentences(reference_sentences, config), config.lcs_mode);
}

Reward mean_rouge_reward(std::span<const Sentence> extract_sentences,
                         std::span<const Sentence> highlights, const RougeConfig& config) {
  if (highlights.empty()) throw DataError("cannot score against empty highlights");
  const auto cand = normalize_sentences(extract_sentences, config);
  const auto ref = normalize_sentences(highlights, config);
  return reward_from(cand, ref, concat(ref), config.lcs_mode);
}

DocumentScorer::DocumentScorer(const Document& doc, const RougeConfig& config)
    : mode_(config.lcs_mode) {
  if (doc.highlights.empty()) {
    throw DataError("document " + doc.id + " has no highlights to score against");
  }
  auto intern_all = [&](const std::vector<Sentence>& sentences, std::vector<Seq>& out) {
    for (const auto& s : sentences) {
      Seq seq;
      for (const auto& t : normalize_tokens(s.tokens, config)) seq.push_back(intern(t));
      out.push_back(std::move(seq));
    }
  };
  intern_all(doc.sentences, sentences_);
  intern_all(doc.highlights, highlights_);
  highlight_concat_ = concat(highlights_);
}

std::uint32_t DocumentScorer::intern(const std::string& token) {
  return ids_.emplace(token, static_cast<std::uint32_t>(ids_.size())).first->second;
}

Reward DocumentScorer::score(std::span<const std::size_t> sentence_indices) const {
  std::vector<Seq> cand;
  cand.reserve(sentence_indices.size());
  for (auto i : sentence_indices) cand.push_back(sentences_.at(i));
  return reward_from(cand, highlights_, highlight_concat_, mode_);
}

}  // namespace refresh::rouge
