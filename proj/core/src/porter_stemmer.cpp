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

#include "refresh/porter_stemmer.hpp"

#include <array>
#include <utility>

namespace refresh {
namespace {

class Stemmer {
 public:
  explicit Stemmer(std::string_view w) : b_(w) {}

  std::string run() && {
    if (b_.size() <= 2) return std::move(b_);
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return std::move(b_);
  }

 private:
  // True when b_[i] is a consonant. 'y' is a consonant at the start of the
  // word or after a vowel.
  bool cons(std::size_t i) const {
    switch (b_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, len).
  int measure(std::size_t len) const {
    int m = 0;
    std::size_t i = 0;
    while (i < len && cons(i)) ++i;
    while (i < len) {
      while (i < len && !cons(i)) ++i;
      if (i >= len) break;
      while (i < len && cons(i)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && b_[len - 1] == b_[len - 2] && cons(len - 1);
  }

  // consonant-vowel-consonant ending, last consonant not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3 || !cons(len - 1) || cons(len - 2) || !cons(len - 3)) return false;
    const char c = b_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const { return std::string_view(b_).ends_with(s); }

  std::size_t stem_len(std::string_view suffix) const { return b_.size() - suffix.size(); }

  void replace(std::string_view suffix, std::string_view with) {
    b_.resize(stem_len(suffix));
    b_.append(with);
  }

  void step1a() {
    if (ends("sses")) {
      replace("sses", "ss");
    } else if (ends("ies")) {
      replace("ies", "i");
    } else if (ends("ss")) {
      // unchanged
    } else if (ends("s")) {
      replace("s", "");
    }
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) replace("eed", "ee");
      return;
    }
    std::string_view suffix;
    if (ends("ed")) {
      suffix = "ed";
    } else if (ends("ing")) {
      suffix = "ing";
    } else {
      return;
    }
    if (!has_vowel(stem_len(suffix))) return;
    replace(suffix, "");
    if (ends("at")) {
      replace("at", "ate");
    } else if (ends("bl")) {
      replace("bl", "ble");
    } else if (ends("iz")) {
      replace("iz", "ize");
    } else if (double_cons(b_.size())) {
      const char c = b_.back();
      if (c != 'l' && c != 's' && c != 'z') b_.pop_back();
    } else if (measure(b_.size()) == 1 && cvc(b_.size())) {
      b_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(stem_len("y"))) b_.back() = 'i';
  }

  using Rule = std::pair<std::string_view, std::string_view>;

  // Applies the first rule whose suffix matches, if the remaining stem has
  // measure > min_measure. Later rules are never tried once a suffix matched.
  template <std::size_t N>
  void apply(const std::array<Rule, N>& rules, int min_measure) {
    for (const auto& [suffix, with] : rules) {
      if (!ends(suffix)) continue;
      if (measure(stem_len(suffix)) > min_measure) replace(suffix, with);
      return;
    }
  }

  void step2() {
    static constexpr std::array<Rule, 20> kRules = {{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply(longest_first(kRules), 0);
  }

  void step3() {
    static constexpr std::array<Rule, 7> kRules = {{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply(kRules, 0);
  }

  void step4() {
    static constexpr std::array<std::string_view, 19> kSuffixes = {
        "al",  "ance", "ence", "er", "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    // Longest matching suffix decides; "ion" additionally needs s/t before it.
    std::string_view best;
    for (auto s : kSuffixes) {
      if (ends(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    const std::size_t len = stem_len(best);
    if (measure(len) <= 1) return;
    if (best == "ion" && (len == 0 || (b_[len - 1] != 's' && b_[len - 1] != 't'))) return;
    b_.resize(len);
  }

  void step5a() {
    if (!ends("e")) return;
    const std::size_t len = stem_len("e");
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc(len))) b_.pop_back();
  }

  void step5b() {
    if (measure(b_.size()) > 1 && double_cons(b_.size()) && b_.back() == 'l') {
      b_.pop_back();
    }
  }

  // Step 2's table is listed in the classic order; matching must prefer the
  // longest suffix (ational before tional, ization before ation, ...).
  template <std::size_t N>
  static std::array<Rule, N> longest_first(std::array<Rule, N> rules) {
    for (std::size_t i = 1; i < N; ++i) {
      for (std::size_t j = i; j > 0 && rules[j].first.size() > rules[j - 1].first.size(); --j) {
        std::swap(rules[j], rules[j - 1]);
      }
    }
    return rules;
  }

  std::string b_;
};

}  // namespace

std::string porter_stem(std::string_view word) { return Stemmer(word).run(); }

}  // namespace refresh
