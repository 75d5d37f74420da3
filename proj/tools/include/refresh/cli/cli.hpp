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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "refresh/config.hpp"
#include "refresh/corpus.hpp"
#include "refresh/oracle.hpp"
#include "refresh/rouge.hpp"

namespace refresh::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;     // bad flags or configuration
inline constexpr int kExitData = 2;      // unreadable or inconsistent input
inline constexpr int kExitInternal = 3;  // anything else

// Parses `args` (without the program name) and runs one subcommand.
// Normal output goes to `out`, progress and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main_entry(int argc, char** argv);

// The first min(m, n) sentences. Throws ConfigError if m == 0 and
// DataError for an empty document.
oracle::Extract lead_baseline(const Document& doc, std::size_t m);

// One emitted summary. `sentences` holds the raw text of the selected
// sentences in document order.
struct Summary {
  std::string id;
  std::vector<std::size_t> indices;
  std::vector<std::string> sentences;

  friend bool operator==(const Summary&, const Summary&) = default;
};

Summary make_summary(const Document& doc, const oracle::Extract& extract);

// JSON-lines, one {"id","indices","sentences"} object per line.
void write_summaries(const std::vector<Summary>& summaries, std::ostream& out);
std::vector<Summary> read_summaries(std::istream& in, const std::string& source);
// Plain text: a "# <id>" header, one sentence per line, blank separator.
void write_summaries_text(const std::vector<Summary>& summaries, std::ostream& out);

struct DocumentScore {
  std::string id;
  rouge::Reward reward;
};

struct EvaluationReport {
  std::size_t documents = 0;
  double rouge1 = 0.0;  // mean F1, as fractions
  double rouge2 = 0.0;
  double rouge_l = 0.0;
  double reward = 0.0;  // mean of the three
  std::vector<DocumentScore> per_document;
  std::vector<std::string> skipped;  // documents without highlights
};

// Scores each summary's sentence text against its document's highlights.
// Documents without highlights are skipped and listed. Throws DataError on
// an empty summary list, when nothing is left to score, or on ids missing
// from `corpus` (all of them listed).
EvaluationReport evaluate_summaries(const std::vector<Summary>& summaries,
                                    const std::vector<Document>& corpus,
                                    const rouge::RougeConfig& config);

// Story files from each input (directories are scanned recursively for
// *.story, sorted by path). Unparsable files are reported in `errors` as
// "path: message" and skipped. Throws DataError if an input does not exist.
std::vector<Document> read_stories(const std::vector<std::filesystem::path>& inputs,
                                   std::vector<std::string>& errors);

}  // namespace refresh::cli
