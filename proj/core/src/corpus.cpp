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

#include "refresh/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "refresh/error.hpp"

namespace refresh {
namespace {

// Multi-byte punctuation that is split off like its ASCII counterparts.
constexpr std::array<std::string_view, 9> kUnicodePunct = {
    "\xE2\x80\x9C",  // left double quote
    "\xE2\x80\x9D",  // right double quote
    "\xE2\x80\x98",  // left single quote
    "\xE2\x80\x99",  // right single quote
    "\xE2\x80\x94",  // em dash
    "\xE2\x80\x93",  // en dash
    "\xE2\x80\xA6",  // ellipsis
    "\xC2\xAB",      // left guillemet
    "\xC2\xBB",      // right guillemet
};

constexpr std::array<std::string_view, 7> kClitics = {"n't", "'s",  "'re", "'ve",
                                                      "'ll", "'d", "'m"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && !std::isalnum(u) && !is_space(c);
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_clitic(std::string_view s) {
  return std::any_of(kClitics.begin(), kClitics.end(),
                     [&](std::string_view c) { return iequals(s, c); });
}

// Letter-period pairs, at least two of them: U.S., e.g.
bool is_acronym(std::string_view s) {
  if (s.size() < 4 || s.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    if (!std::isalpha(static_cast<unsigned char>(s[i])) || s[i + 1] != '.') {
      return false;
    }
  }
  return true;
}

// Byte length of the punctuation unit that starts `s`, 0 for a word char.
std::size_t leading_punct(std::string_view s) {
  if (s.empty()) return 0;
  if (s.starts_with("...")) return 3;
  if (s.starts_with("--")) return 2;
  for (auto u : kUnicodePunct) {
    if (s.starts_with(u)) return u.size();
  }
  return is_ascii_punct(s.front()) ? 1 : 0;
}

std::size_t trailing_punct(std::string_view s) {
  if (s.empty()) return 0;
  if (s.ends_with("...")) return 3;
  if (s.ends_with("--")) return 2;
  for (auto u : kUnicodePunct) {
    if (s.ends_with(u)) return u.size();
  }
  return is_ascii_punct(s.back()) ? 1 : 0;
}

void tokenize_chunk(std::string_view chunk, std::vector<Token>& out) {
  if (is_clitic(chunk) || chunk == "--" || chunk == "..." || is_acronym(chunk)) {
    out.emplace_back(chunk);
    return;
  }
  while (std::size_t n = leading_punct(chunk)) {
    out.emplace_back(chunk.substr(0, n));
    chunk.remove_prefix(n);
  }
  std::vector<std::string_view> trailing;
  while (!chunk.empty() && !is_acronym(chunk)) {
    const std::size_t n = trailing_punct(chunk);
    if (n == 0) break;
    trailing.push_back(chunk.substr(chunk.size() - n));
    chunk.remove_suffix(n);
  }
  std::vector<std::string_view> clitics;
  for (bool split = true; split;) {
    split = false;
    for (auto c : kClitics) {
      if (chunk.size() > c.size() &&
          iequals(chunk.substr(chunk.size() - c.size()), c)) {
        clitics.push_back(chunk.substr(chunk.size() - c.size()));
        chunk.remove_suffix(c.size());
        split = true;
        break;
      }
    }
  }
  if (!chunk.empty()) out.emplace_back(chunk);
  for (auto it = clitics.rbegin(); it != clitics.rend(); ++it) out.emplace_back(*it);
  for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.emplace_back(*it);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

constexpr std::array<std::string_view, 24> kAbbreviations = {
    "Mr",  "Mrs",  "Ms",  "Dr",   "St",   "Jr",  "Sr",   "Gen",
    "Sen", "Rep",  "Gov", "Lt",   "Col",  "Sgt", "Capt", "Prof",
    "Inc", "Co",   "Corp", "vs",  "No",   "Mt",  "Ft",   "Rev"};

bool opens_sentence(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'' ||
         c == '(' || c == '[' || u >= 0x80;
}

bool closes_quote(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// Word immediately preceding position `end` (exclusive), trimmed of leading
// punctuation.
std::string_view word_before(std::string_view line, std::size_t end) {
  std::size_t begin = end;
  while (begin > 0 && !is_space(line[begin - 1])) --begin;
  std::string_view w = line.substr(begin, end - begin);
  while (!w.empty() && is_ascii_punct(w.front())) w.remove_prefix(1);
  return w;
}

std::string read_whole_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Sentence make_sentence(std::size_t index, std::string_view raw) {
  Sentence s;
  s.index = index;
  s.raw = std::string(raw);
  s.tokens = tokenize(raw);
  return s;
}

}  // namespace

std::vector<Token> tokenize(std::string_view raw_text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < raw_text.size()) {
    while (i < raw_text.size() && is_space(raw_text[i])) ++i;
    std::size_t j = i;
    while (j < raw_text.size() && !is_space(raw_text[j])) ++j;
    if (j > i) tokenize_chunk(raw_text.substr(i, j - i), out);
    i = j;
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c != '.' && c != '?' && c != '!') continue;
    std::size_t end = i + 1;
    while (end < line.size() && (closes_quote(line[end]) || line[end] == '.')) ++end;
    if (end >= line.size() || !is_space(line[end])) continue;
    std::size_t next = end;
    while (next < line.size() && is_space(line[next])) ++next;
    if (next >= line.size() || !opens_sentence(line[next])) continue;
    if (c == '.') {
      const std::string_view w = word_before(line, i);
      const bool abbreviation =
          std::find(kAbbreviations.begin(), kAbbreviations.end(), w) !=
          kAbbreviations.end();
      const bool initial =
          w.size() == 1 && std::isupper(static_cast<unsigned char>(w.front()));
      if (abbreviation || initial) continue;
    }
    const auto sentence = trim(line.substr(start, end - start));
    if (!sentence.empty()) out.emplace_back(sentence);
    start = next;
    i = next - 1;
  }
  const auto tail = trim(line.substr(std::min(start, line.size())));
  if (!tail.empty()) out.emplace_back(tail);
  return out;
}

Document parse_story_file(std::string_view contents, std::string source) {
  Document doc;
  doc.id = source;
  bool in_highlights = false;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    const std::string_view line = trim(contents.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (line == "@highlight") {
      in_highlights = true;
      continue;
    }
    if (in_highlights) {
      Sentence h = make_sentence(doc.highlights.size(), line);
      if (!h.tokens.empty()) doc.highlights.push_back(std::move(h));
      continue;
    }
    for (const auto& text : split_sentences(line)) {
      Sentence s = make_sentence(doc.sentences.size(), text);
      if (!s.tokens.empty()) doc.sentences.push_back(std::move(s));
    }
  }
  if (doc.sentences.empty()) {
    throw IngestError(std::move(source), "story file has no article body");
  }
  return doc;
}

Document read_story_file(const std::filesystem::path& path) {
  return parse_story_file(read_whole_file(path), path.stem().string());
}

// --- Vocabulary ------------------------------------------------------------

Vocabulary::Vocabulary() : Vocabulary({}, {}, 1) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<std::size_t> counts, int min_freq)
    : min_freq_(min_freq) {
  if (!counts.empty() && counts.size() != tokens.size()) {
    throw DataError("vocabulary counts do not match tokens");
  }
  tokens_.reserve(tokens.size() + 2);
  tokens_.emplace_back(kPadToken);
  tokens_.emplace_back(kUnkToken);
  counts_.assign(2, 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto id = static_cast<TokenId>(tokens_.size());
    if (!ids_.emplace(tokens[i], id).second) {
      throw DataError("duplicate vocabulary token: " + tokens[i]);
    }
    tokens_.push_back(std::move(tokens[i]));
    counts_.push_back(counts.empty() ? 0 : counts[i]);
  }
}

TokenId Vocabulary::lookup(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token(TokenId id) const { return tokens_.at(id); }

std::size_t Vocabulary::count(TokenId id) const { return counts_.at(id); }

Vocabulary build_vocabulary(std::span<const Document> corpus, int min_freq) {
  if (min_freq < 1) throw ConfigError("min_freq must be >= 1");
  if (corpus.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus) {
    for (const auto& s : doc.sentences) {
      for (const auto& t : s.tokens) ++freq[t];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= static_cast<std::size_t>(min_freq)) kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  std::vector<std::size_t> counts;
  for (auto& [tok, n] : kept) {
    tokens.push_back(tok);
    counts.push_back(n);
  }
  return Vocabulary(std::move(tokens), std::move(counts), min_freq);
}

void write_vocabulary(const Vocabulary& vocab, std::ostream& out) {
  out << "#refresh-vocab\t1\t" << vocab.min_freq() << '\n';
  for (TokenId id = 2; id < vocab.size(); ++id) {
    out << vocab.token(id) << '\t' << vocab.count(id) << '\n';
  }
}

Vocabulary read_vocabulary(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("#refresh-vocab\t1\t")) {
    throw DataError(source + ": not a version-1 vocabulary file");
  }
  const int min_freq = std::stoi(line.substr(std::string_view("#refresh-vocab\t1\t").size()));
  std::vector<std::string> tokens;
  std::vector<std::size_t> counts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(source + ":" + std::to_string(lineno) + ": malformed vocabulary line");
    }
    tokens.push_back(line.substr(0, tab));
    counts.push_back(std::stoull(line.substr(tab + 1)));
  }
  return Vocabulary(std::move(tokens), std::move(counts), min_freq);
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_vocabulary(vocab, out);
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_vocabulary(in, path.string());
}

// --- Padding ---------------------------------------------------------------

PaddedDocView pad_document(const Document& doc, const Vocabulary& vocab,
                           const PaddingLimits& limits) {
  PaddedDocView view;
  view.limits = limits;
  view.ids.assign(limits.max_doc_len * limits.max_sent_len, Vocabulary::kPadId);
  view.sentence_count = std::min(doc.sentences.size(), limits.max_doc_len);
  view.sentence_lengths.resize(view.sentence_count);
  for (std::size_t i = 0; i < view.sentence_count; ++i) {
    const auto& tokens = doc.sentences[i].tokens;
    const std::size_t len = std::min(tokens.size(), limits.max_sent_len);
    view.sentence_lengths[i] = len;
    for (std::size_t j = 0; j < len; ++j) {
      view.ids[i * limits.max_sent_len + j] = vocab.lookup(tokens[j]);
    }
  }
  return view;
}

// --- Embeddings --------------------------------------------------------------

EmbeddingTable load_pretrained_embeddings(std::istream& in, const std::string& source,
                                          const Vocabulary& vocab, std::size_t dim) {
  EmbeddingTable table;
  table.rows = vocab.size();
  table.dim = dim;
  table.values.assign(table.rows * dim, 0.0);
  table.found.assign(table.rows, false);

  std::string line;
  std::size_t lineno = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    row.clear();
    std::string field;
    while (fields >> field) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw DataError(source + ":" + std::to_string(lineno) +
                        ": non-numeric embedding value '" + field + "'");
      }
      row.push_back(v);
    }
    // word2vec-style "<count> <dim>" header.
    if (lineno == 1 && row.size() == 1 &&
        std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      continue;
    }
    if (row.size() != dim) {
      throw DataError(source + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(dim) + " values for '" + token + "', found " +
                      std::to_string(row.size()));
    }
    const TokenId id = vocab.lookup(token);
    if (id == Vocabulary::kUnkId || id == Vocabulary::kPadId) continue;
    std::copy(row.begin(), row.end(), table.values.begin() + static_cast<std::ptrdiff_t>(id * dim));
    table.found[id] = true;
  }
  return table;
}

EmbeddingTable load_pretrained_embeddings(const std::filesystem::path& path,
                                          const Vocabulary& vocab, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path.string());
  return load_pretrained_embeddings(in, path.string(), vocab, dim);
}

}  // namespace refresh
