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
#include <string>
#include <vector>

// Deliberately naive ROUGE used as a test oracle. Shares no code with the
// library: n-gram overlap by merging sorted n-gram lists, LCS by memoised
// recursion over suffixes or by exhaustive subset enumeration.
namespace brute {

using Seq = std::vector<std::string>;

struct Prf {
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
};

Prf prf(double hits, double cand_total, double ref_total);

Prf rouge_n(const Seq& cand, const Seq& ref, int n);

// Top-down LCS over suffixes.
std::size_t lcs(const Seq& a, const Seq& b);
// Longest subset of `a` (as a bitmask walk) that is a subsequence of `b`.
// Exponential in |a|; keep |a| <= 12.
std::size_t lcs_exhaustive(const Seq& a, const Seq& b);

Prf rouge_l(const Seq& cand, const Seq& ref);

// Summary-level union LCS with count clipping. Hits for a (reference,
// candidate) sentence pair are chosen by walking back from both ends: take
// a match, else drop the last candidate token if that keeps a strictly
// longer LCS, else drop the last reference token. LCS lengths come from
// lcs_exhaustive, so sentences must be short.
Prf union_rouge_l(const std::vector<Seq>& cands, const std::vector<Seq>& refs);

}  // namespace brute
