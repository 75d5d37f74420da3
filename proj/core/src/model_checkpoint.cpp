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

#include <nlohmann/json.hpp>
#include <sstream>

#include "refresh/error.hpp"
#include "refresh/model.hpp"
#include "refresh/nn/checkpoint.hpp"

namespace refresh {

using nlohmann::json;

namespace {

constexpr const char* kModelFormat = "refresh-model";

json config_json(const ModelConfig& c) {
  return {{"embedding_dim", c.embedding_dim},
          {"kernel_widths", c.kernel_widths},
          {"channels_per_kernel", c.channels_per_kernel},
          {"lstm_size", c.lstm_size},
          {"max_sent_len", c.max_sent_len},
          {"max_doc_len", c.max_doc_len},
          {"m_select", c.m_select},
          {"seed", c.seed},
          {"init_range", c.init_range},
          {"forget_bias", c.forget_bias}};
}

ModelConfig config_from(const json& j) {
  ModelConfig c;
  c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  c.kernel_widths = j.at("kernel_widths").get<std::vector<std::size_t>>();
  c.channels_per_kernel = j.at("channels_per_kernel").get<std::size_t>();
  c.lstm_size = j.at("lstm_size").get<std::size_t>();
  c.max_sent_len = j.at("max_sent_len").get<std::size_t>();
  c.max_doc_len = j.at("max_doc_len").get<std::size_t>();
  c.m_select = j.at("m_select").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.init_range = j.at("init_range").get<double>();
  c.forget_bias = j.at("forget_bias").get<double>();
  return c;
}

}  // namespace

std::string model_config_to_json(const ModelConfig& config) {
  return config_json(config).dump();
}

ModelConfig model_config_from_json(const std::string& json_text) {
  try {
    return config_from(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid model config JSON: ") + e.what());
  }
}

void save_model_checkpoint(const std::filesystem::path& path, const RefreshModel& model,
                           const Vocabulary& vocab, const std::string& extra_json) {
  if (vocab.size() != model.vocab_size()) {
    throw ShapeError("vocabulary size does not match the embedding matrix");
  }
  std::ostringstream vocab_text;
  write_vocabulary(vocab, vocab_text);
  json meta;
  meta["format"] = kModelFormat;
  meta["model_config"] = config_json(model.config());
  meta["vocabulary"] = vocab_text.str();
  try {
    meta["extra"] = json::parse(extra_json);
  } catch (const json::exception& e) {
    throw Error(std::string("checkpoint extra state is not valid JSON: ") + e.what());
  }
  nn::save_checkpoint_file(path, model.params(), meta.dump());
}

ModelCheckpoint load_model_checkpoint(const std::filesystem::path& path) {
  nn::CheckpointContents contents = nn::load_checkpoint_file(path);
  ModelCheckpoint out;
  try {
    const json meta = json::parse(contents.metadata_json);
    if (meta.at("format").get<std::string>() != kModelFormat) {
      throw CheckpointError(path.string() + ": not a model checkpoint");
    }
    out.config = config_from(meta.at("model_config"));
    std::istringstream vocab_text(meta.at("vocabulary").get<std::string>());
    out.vocab = read_vocabulary(vocab_text, path.string() + "#vocabulary");
    out.extra_json = meta.at("extra").dump();
  } catch (const json::exception& e) {
    throw CheckpointError(path.string() + ": bad model metadata: " + e.what());
  }
  out.params = std::move(contents.params);
  try {
    // Validates every parameter shape against the stored config.
    RefreshModel probe(out.config, out.params);
    if (probe.vocab_size() != out.vocab.size()) {
      throw CheckpointError(path.string() + ": vocabulary does not match the embedding");
    }
  } catch (const ShapeError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace refresh
