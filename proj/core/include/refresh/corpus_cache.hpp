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

#include "refresh/corpus.hpp"

namespace refresh {

// Preprocessed corpus cache, JSON-lines, version 1.
//
//   line 1:  {"format":"refresh-corpus","version":1}
//   line k:  {"highlights":[S...],"id":"...","sentences":[S...]}
//            where S = {"index":i,"raw":"...","tokens":["...",...]}
//
// Keys are written in sorted order so identical corpora produce identical
// bytes.
inline constexpr int kCorpusCacheVersion = 1;

void write_corpus_cache(std::span<const Document> docs, std::ostream& out);
std::vector<Document> read_corpus_cache(std::istream& in, const std::string& source);

void save_corpus_cache(std::span<const Document> docs, const std::filesystem::path& path);
std::vector<Document> load_corpus_cache(const std::filesystem::path& path);

}  // namespace refresh
