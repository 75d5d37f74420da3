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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "refresh/model.hpp"
#include "refresh/oracle.hpp"
#include "refresh/rouge.hpp"
#include "refresh/trainer.hpp"

namespace refresh {

// Every tunable of a run. `corpus` selects defaults for m and k
// (cnn: 3 and 5, dailymail: 4 and 15); explicit keys override them.
struct RunSettings {
  std::string corpus = "cnn";
  ModelConfig model;
  TrainConfig train;
  oracle::OracleConfig oracle;
  int min_freq = 1;

  const rouge::RougeConfig& rouge() const { return train.rouge; }

  // Validates every section; throws ConfigError.
  void validate() const;
};

using SettingMap = std::map<std::string, std::string>;

// All recognised keys, sorted.
const std::vector<std::string>& known_setting_keys();

// Flat "key = value" lines; blank lines and lines starting with '#' are
// ignored. Throws ConfigError (with source:line) on a malformed line or a
// repeated key.
SettingMap parse_settings(std::string_view text, const std::string& source);
SettingMap load_settings_file(const std::filesystem::path& path);

// Applies the corpus key first, then every other key. Throws ConfigError on
// an unknown key or an unparsable value.
RunSettings make_settings(const SettingMap& values);
void apply_setting(RunSettings& settings, const std::string& key, const std::string& value);
void apply_corpus_defaults(RunSettings& settings, const std::string& corpus);

// Every key with its effective value, one "key = value" line each, sorted.
// parse_settings + make_settings on the result reproduces `settings`.
std::string settings_snapshot(const RunSettings& settings);

}  // namespace refresh
