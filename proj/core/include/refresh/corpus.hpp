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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace refresh {

// A case-preserved, non-empty, whitespace-free unit of text.
using Token = std::string;
using TokenId = std::uint32_t;

struct Sentence {
  std::size_t index = 0;
  std::vector<Token> tokens;
  std::string raw;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// An article (ordered sentences, indices 0..n-1) plus its story highlights.
struct Document {
  std::string id;
  std::vector<Sentence> sentences;
  std::vector<Sentence> highlights;

  std::size_t size() const noexcept { return sentences.size(); }

  friend bool operator==(const Document&, const Document&) = default;
};

// Rule-based, case-preserving tokenizer. Punctuation is split from word
// boundaries; internal punctuation (mosquito-borne, 100,000, U.S.) is kept;
// English clitics ('s, n't, 're, ...) become separate tokens.
std::vector<Token> tokenize(std::string_view raw_text);

// Splits one line of running text at sentence boundaries ('.', '?', '!'
// followed by whitespace and a capitalised or quoted continuation).
// Common abbreviations and single-letter initials never end a sentence.
std::vector<std::string> split_sentences(std::string_view line);

// Parses a CNN/DailyMail ".story" file: article text, then blocks each
// introduced by an `@highlight` line. `source` names the file in errors and
// becomes the document id.
Document parse_story_file(std::string_view contents, std::string source);

// Reads and parses a story file from disk; the id is the file stem.
Document read_story_file(const std::filesystem::path& path);

class Vocabulary {
 public:
  static constexpr TokenId kPadId = 0;
  static constexpr TokenId kUnkId = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();

  // `tokens` are the non-reserved entries in id order (first gets id 2).
  // `counts` is either empty or parallel to `tokens`.
  Vocabulary(std::vector<std::string> tokens, std::vector<std::size_t> counts,
             int min_freq);

  TokenId lookup(std::string_view token) const;
  const std::string& token(TokenId id) const;
  // Corpus frequency for a non-reserved id; 0 when unknown.
  std::size_t count(TokenId id) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  int min_freq() const noexcept { return min_freq_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.counts_ == b.counts_ &&
           a.min_freq_ == b.min_freq_;
  }

 private:
  std::vector<std::string> tokens_;  // includes the two reserved entries
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, TokenId> ids_;
  int min_freq_ = 1;
};

// Ids are assigned by descending frequency, ties broken lexicographically.
// Only article sentences contribute counts.
Vocabulary build_vocabulary(std::span<const Document> corpus, int min_freq = 1);

void write_vocabulary(const Vocabulary& vocab, std::ostream& out);
Vocabulary read_vocabulary(std::istream& in, const std::string& source);
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

struct PaddingLimits {
  std::size_t max_sent_len = 100;
  std::size_t max_doc_len = 120;
};

// Fixed-size token-id matrix (max_doc_len x max_sent_len) for one document.
// Entries beyond the effective lengths are kPadId.
struct PaddedDocView {
  PaddingLimits limits;
  std::vector<TokenId> ids;
  std::size_t sentence_count = 0;
  std::vector<std::size_t> sentence_lengths;  // one per effective sentence

  TokenId at(std::size_t sentence, std::size_t position) const {
    return ids[sentence * limits.max_sent_len + position];
  }
  std::span<const TokenId> row(std::size_t sentence) const {
    return {ids.data() + sentence * limits.max_sent_len, limits.max_sent_len};
  }
};

PaddedDocView pad_document(const Document& doc, const Vocabulary& vocab,
                           const PaddingLimits& limits);

// Row-major (vocab.size() x dim) table of initial embedding values.
struct EmbeddingTable {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::vector<bool> found;  // per row: copied from the file

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * dim, dim};
  }
};

// Text format: one token per line followed by `dim` decimals. A leading
// "<count> <dim>" header line is accepted. Rows absent from the file, the
// unknown row and the padding row are zero.
EmbeddingTable load_pretrained_embeddings(std::istream& in,
                                          const std::string& source,
                                          const Vocabulary& vocab,
                                          std::size_t dim);
EmbeddingTable load_pretrained_embeddings(const std::filesystem::path& path,
                                          const Vocabulary& vocab,
                                          std::size_t dim);

}  // namespace refresh
