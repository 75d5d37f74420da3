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

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "refresh/cli/cli.hpp"
#include "refresh/error.hpp"

namespace refresh::cli {

using nlohmann::json;

oracle::Extract lead_baseline(const Document& doc, std::size_t m) {
  if (m == 0) throw ConfigError("lead: m must be >= 1");
  if (doc.size() == 0) throw DataError("lead: document " + doc.id + " has no sentences");
  std::vector<std::size_t> idx(std::min(m, doc.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return oracle::Extract(std::move(idx));
}

Summary make_summary(const Document& doc, const oracle::Extract& extract) {
  Summary s;
  s.id = doc.id;
  s.indices = extract.indices();
  for (std::size_t i : s.indices) {
    if (i >= doc.size()) throw DataError("summary of " + doc.id + " refers to a missing sentence");
    s.sentences.push_back(doc.sentences[i].raw);
  }
  return s;
}

void write_summaries(const std::vector<Summary>& summaries, std::ostream& out) {
  for (const auto& s : summaries) {
    out << json{{"id", s.id}, {"indices", s.indices}, {"sentences", s.sentences}}.dump() << '\n';
  }
}

std::vector<Summary> read_summaries(std::istream& in, const std::string& source) {
  std::vector<Summary> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      Summary s;
      s.id = j.at("id").get<std::string>();
      s.indices = j.value("indices", std::vector<std::size_t>{});
      s.sentences = j.at("sentences").get<std::vector<std::string>>();
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw DataError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_summaries_text(const std::vector<Summary>& summaries, std::ostream& out) {
  for (const auto& s : summaries) {
    out << "# " << s.id << '\n';
    for (const auto& sentence : s.sentences) out << sentence << '\n';
    out << '\n';
  }
}

EvaluationReport evaluate_summaries(const std::vector<Summary>& summaries,
                                    const std::vector<Document>& corpus,
                                    const rouge::RougeConfig& config) {
  if (summaries.empty()) throw DataError("no summaries to evaluate");
  std::map<std::string, const Document*> by_id;
  for (const auto& doc : corpus) by_id.emplace(doc.id, &doc);
  std::vector<std::string> missing;
  for (const auto& s : summaries) {
    if (!by_id.contains(s.id)) missing.push_back(s.id);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw DataError("summaries refer to documents not in the corpus: " + list);
  }

  EvaluationReport report;
  for (const auto& s : summaries) {
    const Document& doc = *by_id.at(s.id);
    if (doc.highlights.empty()) {
      report.skipped.push_back(s.id);
      continue;
    }
    std::vector<Sentence> sentences;
    for (const auto& text : s.sentences) {
      Sentence sent;
      sent.index = sentences.size();
      sent.raw = text;
      sent.tokens = tokenize(text);
      sentences.push_back(std::move(sent));
    }
    const rouge::Reward r = rouge::mean_rouge_reward(sentences, doc.highlights, config);
    report.rouge1 += r.rouge1.f1;
    report.rouge2 += r.rouge2.f1;
    report.rouge_l += r.rouge_l.f1;
    report.reward += r.value;
    report.per_document.push_back({s.id, r});
  }
  if (report.per_document.empty()) throw DataError("no summarized document has highlights");
  const double n = static_cast<double>(report.per_document.size());
  report.documents = report.per_document.size();
  report.rouge1 /= n;
  report.rouge2 /= n;
  report.rouge_l /= n;
  report.reward /= n;
  return report;
}

std::vector<Document> read_stories(const std::vector<std::filesystem::path>& inputs,
                                   std::vector<std::string>& errors) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      fs::recursive_directory_iterator it(input, ec), end;
      if (ec) throw DataError("cannot read directory " + input.string() + ": " + ec.message());
      for (; it != end; it.increment(ec)) {
        if (ec) throw DataError("cannot read directory " + input.string() + ": " + ec.message());
        if (it->is_regular_file() && it->path().extension() == ".story") files.push_back(it->path());
      }
    } else if (fs::is_regular_file(input, ec)) {
      files.push_back(input);
    } else {
      throw DataError("input does not exist: " + input.string());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  for (const auto& f : files) {
    try {
      docs.push_back(read_story_file(f));
    } catch (const IngestError& e) {
      std::string what = e.what();
      const std::string prefix = e.source() + ": ";
      if (what.starts_with(prefix)) what.erase(0, prefix.size());
      errors.push_back(f.string() + ": " + what);
    } catch (const DataError& e) {
      errors.push_back(f.string() + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace refresh::cli
