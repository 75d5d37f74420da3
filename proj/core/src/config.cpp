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

#include "refresh/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "refresh/error.hpp"

namespace refresh {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw ConfigError("invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) bad_value(key, value, "a number");
  return out;
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  if (!value.empty() && value.front() == '-') bad_value(key, value, "a non-negative integer");
  return parse_number<std::size_t>(key, value);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "true or false");
}

std::vector<std::size_t> parse_widths(const std::string& key, const std::string& value) {
  std::vector<std::size_t> out;
  std::string_view rest = value;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_size(key, std::string(trim(rest.substr(0, comma)))));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

using Setter = std::function<void(RunSettings&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const RunSettings&)>;

struct KeySpec {
  Setter set;
  Getter get;
};

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = [] {
    std::map<std::string, KeySpec> t;
    auto size_key = [&](const char* name, auto member) {
      t[name] = {[member](RunSettings& s, const std::string& k, const std::string& v) {
                   member(s) = parse_size(k, v);
                 },
                 [member](const RunSettings& s) {
                   return std::to_string(member(const_cast<RunSettings&>(s)));
                 }};
    };
    auto double_key = [&](const char* name, auto member) {
      t[name] = {[member](RunSettings& s, const std::string& k, const std::string& v) {
                   member(s) = parse_number<double>(k, v);
                 },
                 [member](const RunSettings& s) {
                   return fmt_double(member(const_cast<RunSettings&>(s)));
                 }};
    };
    auto bool_key = [&](const char* name, auto member) {
      t[name] = {[member](RunSettings& s, const std::string& k, const std::string& v) {
                   member(s) = parse_bool(k, v);
                 },
                 [member](const RunSettings& s) {
                   return std::string(member(const_cast<RunSettings&>(s)) ? "true" : "false");
                 }};
    };

    size_key("embedding_dim", [](RunSettings& s) -> std::size_t& { return s.model.embedding_dim; });
    size_key("channels_per_kernel",
             [](RunSettings& s) -> std::size_t& { return s.model.channels_per_kernel; });
    size_key("lstm_size", [](RunSettings& s) -> std::size_t& { return s.model.lstm_size; });
    size_key("max_sent_len", [](RunSettings& s) -> std::size_t& { return s.model.max_sent_len; });
    size_key("max_doc_len", [](RunSettings& s) -> std::size_t& { return s.model.max_doc_len; });
    size_key("batch_size", [](RunSettings& s) -> std::size_t& { return s.train.batch_size; });
    size_key("epochs", [](RunSettings& s) -> std::size_t& { return s.train.epochs; });
    size_key("warm_start_epochs",
             [](RunSettings& s) -> std::size_t& { return s.train.warm_start_epochs; });
    double_key("init_range", [](RunSettings& s) -> double& { return s.model.init_range; });
    double_key("forget_bias", [](RunSettings& s) -> double& { return s.model.forget_bias; });
    double_key("lr", [](RunSettings& s) -> double& { return s.train.adam.lr; });
    double_key("beta1", [](RunSettings& s) -> double& { return s.train.adam.beta1; });
    double_key("beta2", [](RunSettings& s) -> double& { return s.train.adam.beta2; });
    double_key("eps", [](RunSettings& s) -> double& { return s.train.adam.eps; });
    double_key("clip_norm", [](RunSettings& s) -> double& { return s.train.clip_norm; });
    double_key("tau", [](RunSettings& s) -> double& { return s.oracle.tau; });
    bool_key("baseline", [](RunSettings& s) -> bool& { return s.train.baseline; });
    bool_key("stemming", [](RunSettings& s) -> bool& { return s.train.rouge.stemming; });

    t["kernel_widths"] = {
        [](RunSettings& s, const std::string& k, const std::string& v) {
          s.model.kernel_widths = parse_widths(k, v);
        },
        [](const RunSettings& s) {
          std::string out;
          for (std::size_t w : s.model.kernel_widths) {
            if (!out.empty()) out += ',';
            out += std::to_string(w);
          }
          return out;
        }};
    // One m governs both the summary length and the maximum extract size
    // in the candidate set.
    t["m"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                s.model.m_select = parse_size(k, v);
                s.oracle.m = static_cast<int>(s.model.m_select);
              },
              [](const RunSettings& s) { return std::to_string(s.model.m_select); }};
    t["p"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                s.oracle.p = parse_number<int>(k, v);
              },
              [](const RunSettings& s) { return std::to_string(s.oracle.p); }};
    t["k"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                s.oracle.k = parse_number<int>(k, v);
              },
              [](const RunSettings& s) { return std::to_string(s.oracle.k); }};
    t["min_freq"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                       s.min_freq = parse_number<int>(k, v);
                     },
                     [](const RunSettings& s) { return std::to_string(s.min_freq); }};
    t["seed"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                   s.train.seed = parse_number<std::uint64_t>(k, v);
                   s.model.seed = s.train.seed;
                 },
                 [](const RunSettings& s) { return std::to_string(s.train.seed); }};
    t["threads"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                      s.train.threads = parse_number<unsigned>(k, v);
                    },
                    [](const RunSettings& s) { return std::to_string(s.train.threads); }};
    t["mode"] = {[](RunSettings& s, const std::string&, const std::string& v) {
                   s.train.mode = parse_train_mode(v);
                 },
                 [](const RunSettings& s) { return to_string(s.train.mode); }};
    t["sampling"] = {[](RunSettings& s, const std::string&, const std::string& v) {
                       s.train.sampling = parse_sampling_mode(v);
                     },
                     [](const RunSettings& s) { return to_string(s.train.sampling); }};
    t["lcs_mode"] = {[](RunSettings& s, const std::string& k, const std::string& v) {
                       if (v == "union") {
                         s.train.rouge.lcs_mode = rouge::LcsMode::kUnion;
                       } else if (v == "concatenated") {
                         s.train.rouge.lcs_mode = rouge::LcsMode::kConcatenated;
                       } else {
                         bad_value(k, v, "union or concatenated");
                       }
                     },
                     [](const RunSettings& s) {
                       return std::string(s.train.rouge.lcs_mode == rouge::LcsMode::kUnion
                                              ? "union"
                                              : "concatenated");
                     }};
    t["corpus"] = {[](RunSettings& s, const std::string&, const std::string& v) {
                     apply_corpus_defaults(s, v);
                   },
                   [](const RunSettings& s) { return s.corpus; }};
    return t;
  }();
  return table;
}

}  // namespace

void RunSettings::validate() const {
  model.validate();
  train.validate();
  oracle.validate();
  if (min_freq < 1) throw ConfigError("min_freq must be >= 1");
}

const std::vector<std::string>& known_setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : key_table()) out.push_back(k);
    return out;
  }();
  return keys;
}

SettingMap parse_settings(std::string_view text, const std::string& source) {
  SettingMap out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto where = source + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!out.emplace(key, value).second) throw ConfigError(where + ": duplicate key " + key);
  }
  return out;
}

SettingMap load_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str(), path.string());
}

void apply_corpus_defaults(RunSettings& settings, const std::string& corpus) {
  if (corpus == "cnn") {
    settings.model.m_select = 3;
    settings.oracle.m = 3;
    settings.oracle.k = 5;
  } else if (corpus == "dailymail") {
    settings.model.m_select = 4;
    settings.oracle.m = 4;
    settings.oracle.k = 15;
  } else {
    throw ConfigError("unknown corpus tag '" + corpus + "' (expected cnn or dailymail)");
  }
  settings.corpus = corpus;
}

void apply_setting(RunSettings& settings, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second.set(settings, key, value);
}

RunSettings make_settings(const SettingMap& values) {
  RunSettings settings;
  if (const auto it = values.find("corpus"); it != values.end()) {
    apply_setting(settings, it->first, it->second);
  }
  for (const auto& [key, value] : values) {
    if (key != "corpus") apply_setting(settings, key, value);
  }
  settings.validate();
  return settings;
}

std::string settings_snapshot(const RunSettings& settings) {
  std::string out;
  for (const auto& [key, spec] : key_table()) {
    out += key + " = " + spec.get(settings) + "\n";
  }
  return out;
}

}  // namespace refresh
