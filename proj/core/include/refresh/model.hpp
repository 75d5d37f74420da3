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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "refresh/corpus.hpp"
#include "refresh/nn/layers.hpp"
#include "refresh/nn/parameter.hpp"
#include "refresh/oracle.hpp"

namespace refresh {

struct ModelConfig {
  std::size_t embedding_dim = 200;
  std::vector<std::size_t> kernel_widths{1, 2, 3, 4, 5, 6, 7};
  std::size_t channels_per_kernel = 50;
  std::size_t lstm_size = 600;
  std::size_t max_sent_len = 100;
  std::size_t max_doc_len = 120;
  std::size_t m_select = 3;
  std::uint64_t seed = 0;
  // Uniform initialisation range and LSTM forget-gate bias.
  double init_range = 0.1;
  double forget_bias = 1.0;

  std::size_t sentence_embedding_dim() const {
    return kernel_widths.size() * channels_per_kernel;
  }
  std::size_t max_kernel_width() const;
  PaddingLimits padding() const { return {max_sent_len, max_doc_len}; }

  // Throws ConfigError on empty/zero/duplicate widths, zero sizes, or
  // max_sent_len smaller than the widest kernel.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// p_i = p(y_i = 1 | s_i, D, theta), one per effective sentence.
struct SentenceScores {
  std::vector<double> probabilities;

  std::size_t size() const noexcept { return probabilities.size(); }
  double operator[](std::size_t i) const { return probabilities[i]; }
};

// Everything recorded by a forward pass that backward() needs.
struct ForwardPass {
  struct SentenceTrace {
    std::vector<TokenId> ids;  // effective tokens only
    nn::Array input;           // embedded tokens followed by zero padding rows
    std::vector<nn::MaxPoolResult> pooled;  // one per kernel width
  };

  bool recorded = false;
  std::vector<SentenceTrace> sentences;
  std::vector<nn::Array> embeddings;             // s_i
  std::vector<nn::LstmStepCache> doc_steps;      // step t reads s_{n-1-t}
  std::vector<nn::LstmStepCache> extract_steps;  // step i reads s_i
  std::vector<nn::Array> log_probs;              // per step: [log p(0), log p(1)]
  std::vector<double> p;                         // p_i

  std::size_t size() const noexcept { return p.size(); }
  const nn::Array& document_representation() const { return doc_steps.back().next.h; }
  SentenceScores scores() const { return {p}; }
};

// Convolutional sentence encoder, reversed-order LSTM document encoder and
// LSTM sentence extractor with a two-way softmax.
//
// Parameters: "embedding" (vocab x E, row 0 is the frozen zero padding row),
// "conv.w<h>" (C x h x E) and "conv.b<h>" (C) per kernel width h,
// "doc_lstm.W" (4H x (S + H)), "doc_lstm.b", "ext_lstm.W" (4H x (2S + H)),
// "ext_lstm.b", "out.W" (2 x H), "out.b" (2), where S is the sentence
// embedding size.
class RefreshModel {
 public:
  // Seeded random initialisation.
  RefreshModel(ModelConfig config, std::size_t vocab_size);
  // Adopts existing parameters; throws ShapeError unless they match `config`.
  RefreshModel(ModelConfig config, nn::ParameterStore params);

  const ModelConfig& config() const noexcept { return config_; }
  nn::ParameterStore& params() noexcept { return params_; }
  const nn::ParameterStore& params() const noexcept { return params_; }
  std::size_t vocab_size() const;

  // Copies the rows found in the file; other rows keep their values. The
  // padding row stays zero.
  void load_embeddings(const EmbeddingTable& table);

  PaddedDocView pad(const Document& doc, const Vocabulary& vocab) const {
    return pad_document(doc, vocab, config_.padding());
  }

  // Positions at or beyond `length` are treated as zero padding whatever
  // ids they hold.
  nn::Array encode_sentence(std::span<const TokenId> ids, std::size_t length) const;
  nn::Array encode_document(const PaddedDocView& doc) const;
  SentenceScores extract_scores(const PaddedDocView& doc) const;

  // Full forward pass with everything recorded for backward(). Throws
  // DataError for a document with no sentences.
  ForwardPass forward(const PaddedDocView& doc) const;
  // Accumulates parameter gradients given d loss / d log p(y_i = c) for
  // each step i and class c. Throws Error if `pass` was not recorded.
  void backward(const ForwardPass& pass, std::span<const std::array<double, 2>> dlog_probs);

 private:
  nn::Array encode_sentence(std::span<const TokenId> ids, std::size_t length,
                            ForwardPass::SentenceTrace* trace) const;

  struct Ids {
    nn::ParamId embedding = 0;
    std::vector<nn::ParamId> conv_w, conv_b;
    nn::ParamId doc_w = 0, doc_b = 0, ext_w = 0, ext_b = 0, out_w = 0, out_b = 0;
  };
  void resolve_ids();

  ModelConfig config_;
  nn::ParameterStore params_;
  Ids ids_;
};

// Indices by descending score; ties by ascending index.
std::vector<std::size_t> rank_sentences(std::span<const double> scores);
inline std::vector<std::size_t> rank_sentences(const SentenceScores& scores) {
  return rank_sentences(scores.probabilities);
}

// Top-min(m, n) ranked sentences in document order. Throws ConfigError if
// m == 0 or there are no scores.
oracle::Extract assemble_summary(const SentenceScores& scores, std::size_t m);
// As above; also throws DataError if there are more scores than sentences.
oracle::Extract assemble_summary(const Document& doc, const SentenceScores& scores,
                                 std::size_t m);

// Checkpoint = parameters with optimiser state + model config + vocabulary
// + free-form JSON (training state), in the nn::checkpoint container.
struct ModelCheckpoint {
  ModelConfig config;
  Vocabulary vocab;
  nn::ParameterStore params;
  std::string extra_json = "{}";
};

void save_model_checkpoint(const std::filesystem::path& path, const RefreshModel& model,
                           const Vocabulary& vocab, const std::string& extra_json = "{}");
ModelCheckpoint load_model_checkpoint(const std::filesystem::path& path);

// JSON text of a ModelConfig and back (used by checkpoints and snapshots).
std::string model_config_to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const std::string& json_text);

}  // namespace refresh
