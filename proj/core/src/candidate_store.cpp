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

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "refresh/error.hpp"
#include "refresh/oracle.hpp"

namespace refresh::oracle {

using nlohmann::json;

void write_candidate_store(const CandidateStore& store, std::ostream& out) {
  out << json{{"format", "refresh-candidates"}, {"version", kCandidateStoreVersion}}.dump()
      << '\n';
  for (const auto& [id, set] : store) {
    json candidates = json::array();
    for (const auto& c : set.ranked) {
      candidates.push_back({{"indices", c.extract.indices()}, {"reward", c.reward}});
    }
    out << json{{"id", id}, {"candidates", std::move(candidates)}}.dump() << '\n';
  }
}

CandidateStore read_candidate_store(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty candidate store");
  try {
    const json header = json::parse(line);
    if (header.value("format", "") != "refresh-candidates" ||
        header.value("version", 0) != kCandidateStoreVersion) {
      throw DataError(source + ": unsupported candidate store header");
    }
  } catch (const json::exception& e) {
    throw DataError(source + ": bad candidate store header: " + e.what());
  }
  CandidateStore store;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      CandidateSet set;
      set.document_id = j.at("id").get<std::string>();
      for (const auto& c : j.at("candidates")) {
        set.ranked.push_back({Extract(c.at("indices").get<std::vector<std::size_t>>()),
                              c.at("reward").get<double>()});
      }
      const std::string id = set.document_id;
      if (!store.emplace(id, std::move(set)).second) {
        throw DataError(source + ":" + std::to_string(lineno) + ": duplicate id " + id);
      }
    } catch (const json::exception& e) {
      throw DataError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return store;
}

void save_candidate_store(const CandidateStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_candidate_store(store, out);
  if (!out) throw DataError("write failed for " + path.string());
}

CandidateStore load_candidate_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_candidate_store(in, path.string());
}

void write_label_file(std::span<const std::vector<int>> labels, std::ostream& out) {
  for (const auto& y : labels) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i) out << ' ';
      out << y[i];
    }
    out << '\n';
  }
}

std::vector<std::vector<int>> read_label_file(std::istream& in, const std::string& source) {
  std::vector<std::vector<int>> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<int> y;
    for (std::string f; fields >> f;) {
      if (f != "0" && f != "1") {
        throw DataError(source + ":" + std::to_string(lineno) + ": labels must be 0 or 1");
      }
      y.push_back(f == "1");
    }
    labels.push_back(std::move(y));
  }
  return labels;
}

}  // namespace refresh::oracle
