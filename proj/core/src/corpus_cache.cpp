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

#include "refresh/corpus_cache.hpp"

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "refresh/error.hpp"

namespace refresh {
namespace {

using nlohmann::json;

json sentence_to_json(const Sentence& s) {
  return json{{"index", s.index}, {"raw", s.raw}, {"tokens", s.tokens}};
}

Sentence sentence_from_json(const json& j) {
  Sentence s;
  s.index = j.at("index").get<std::size_t>();
  s.raw = j.at("raw").get<std::string>();
  s.tokens = j.at("tokens").get<std::vector<Token>>();
  return s;
}

json sentences_to_json(const std::vector<Sentence>& v) {
  json arr = json::array();
  for (const auto& s : v) arr.push_back(sentence_to_json(s));
  return arr;
}

std::vector<Sentence> sentences_from_json(const json& j) {
  std::vector<Sentence> out;
  for (const auto& s : j) out.push_back(sentence_from_json(s));
  return out;
}

}  // namespace

void write_corpus_cache(std::span<const Document> docs, std::ostream& out) {
  out << json{{"format", "refresh-corpus"}, {"version", kCorpusCacheVersion}}.dump()
      << '\n';
  for (const auto& doc : docs) {
    const json record{{"id", doc.id},
                      {"sentences", sentences_to_json(doc.sentences)},
                      {"highlights", sentences_to_json(doc.highlights)}};
    out << record.dump() << '\n';
  }
}

std::vector<Document> read_corpus_cache(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty corpus cache");
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "refresh-corpus" ||
        header.value("version", 0) != kCorpusCacheVersion) {
      throw DataError(source + ": unsupported corpus cache header");
    }
  } catch (const json::exception& e) {
    throw DataError(source + ": bad corpus cache header: " + e.what());
  }
  std::vector<Document> docs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      Document doc;
      doc.id = j.at("id").get<std::string>();
      doc.sentences = sentences_from_json(j.at("sentences"));
      doc.highlights = sentences_from_json(j.at("highlights"));
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw DataError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return docs;
}

void save_corpus_cache(std::span<const Document> docs, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_corpus_cache(docs, out);
}

std::vector<Document> load_corpus_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_corpus_cache(in, path.string());
}

}  // namespace refresh
