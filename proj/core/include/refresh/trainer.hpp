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
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refresh/corpus.hpp"
#include "refresh/model.hpp"
#include "refresh/nn/adam.hpp"
#include "refresh/nn/random.hpp"
#include "refresh/oracle.hpp"
#include "refresh/rouge.hpp"

namespace refresh {

enum class TrainMode { kCeIndividual, kCeCollective, kReinforce };
// How reinforce draws y-hat from the candidate set.
enum class SamplingMode { kUniform, kRewardProportional };

std::string to_string(TrainMode mode);
TrainMode parse_train_mode(std::string_view text);  // throws ConfigError
std::string to_string(SamplingMode mode);
SamplingMode parse_sampling_mode(std::string_view text);

struct TrainConfig {
  TrainMode mode = TrainMode::kReinforce;
  std::size_t batch_size = 20;
  std::size_t epochs = 20;
  nn::AdamConfig adam;
  std::uint64_t seed = 0;
  SamplingMode sampling = SamplingMode::kUniform;
  // Subtract the candidate set's mean reward from the sampled reward.
  bool baseline = false;
  // Reinforce only: leading epochs trained with cross-entropy on the
  // top-ranked candidate.
  std::size_t warm_start_epochs = 0;
  // Joint gradient-norm clipping; 0 disables.
  double clip_norm = 0.0;
  // Workers for validation scoring (read-only); training itself is serial.
  unsigned threads = 1;
  rouge::RougeConfig rouge;

  void validate() const;  // throws ConfigError

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// One training document with whatever its mode needs. Padded views are
// built on demand so large corpora stay compact in memory.
struct TrainingExample {
  const Document* document = nullptr;
  std::size_t sentence_count = 0;                    // after max_doc_len
  std::vector<int> labels;                           // cross-entropy modes
  const oracle::CandidateSet* candidates = nullptr;  // reinforce
};

// Builds examples for `mode`. Documents without highlights, without labels
// (empty label line) or with an empty candidate set are skipped and their
// ids appended to `skipped`. Throws DataError naming the document when a
// reinforce document has no entry in the store, or when the label count
// differs from the sentence count. Labels and candidates of documents
// longer than max_doc_len must refer only to the kept sentences.
std::vector<TrainingExample> prepare_examples(std::span<const Document> documents,
                                              const Vocabulary& vocab,
                                              const ModelConfig& model_config, TrainMode mode,
                                              std::span<const std::vector<int>> labels,
                                              const oracle::CandidateStore* candidates,
                                              std::vector<std::string>* skipped = nullptr);

// -sum_i log p(y_i | s_i, D, theta); gradients (times `scale`) accumulate
// into the model's parameters. Throws DataError if labels.size() differs
// from the effective sentence count or a label is not 0/1.
double ce_loss_and_grads(RefreshModel& model, const PaddedDocView& doc,
                         std::span<const int> labels, double scale = 1.0);

// Draws from the stored extracts. Throws DataError on an empty set.
oracle::ScoredExtract sample_extract(const oracle::CandidateSet& candidates, nn::Rng& rng,
                                     SamplingMode mode = SamplingMode::kUniform);

// Single-sample policy gradient: r times the cross-entropy gradient on the
// sampled labels; returns -r * sum_i log p(yhat_i). `baseline` is
// subtracted from the reward. Throws DataError if an index is out of range.
double reinforce_loss_and_grads(RefreshModel& model, const PaddedDocView& doc,
                                const oracle::ScoredExtract& sampled, double baseline = 0.0);

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // mean per-document loss
  double sampled_reward = 0.0;  // mean reward of the sampled extracts (reinforce)
  std::size_t documents = 0;
  std::size_t batches = 0;
};

// Visits `examples` in a shuffle drawn from `rng`, one Adam step per batch
// on the summed gradients. `epoch` is 1-based and selects warm start.
EpochStats train_epoch(RefreshModel& model, const Vocabulary& vocab,
                       std::span<const TrainingExample> examples,
                       const TrainConfig& config, nn::Rng& rng, std::size_t epoch);

// Greedy extract (top m_select scores) per document, scored against the
// highlights. Throws DataError on an empty set.
struct ValidationResult {
  rouge::Reward mean;
  std::vector<oracle::Extract> extracts;
};
ValidationResult validate(const RefreshModel& model, std::span<const Document> documents,
                          const Vocabulary& vocab, const TrainConfig& config);

struct TrainState {
  std::size_t epoch = 0;  // completed epochs
  std::vector<double> train_loss;
  std::vector<double> train_reward;
  std::vector<double> validation_reward;
  std::size_t best_epoch = 0;  // 1-based, 0 before the first epoch
  double best_reward = -std::numeric_limits<double>::infinity();
  std::string rng_state;

  // File name (relative to the run directory) of the best checkpoint.
  std::string best_checkpoint() const;

  friend bool operator==(const TrainState&, const TrainState&) = default;
};

// Appends one epoch to the state; the best epoch is the first one with the
// highest validation reward.
void record_epoch(TrainState& state, const EpochStats& stats, double validation_reward);

std::string checkpoint_name(std::size_t epoch);  // "epoch-003.ckpt"

struct FitOptions {
  std::filesystem::path out_dir;
  // Checkpoint of an earlier run with the same data and config to resume.
  std::optional<std::filesystem::path> resume_from;
  // Stop after this many completed epochs (0 = run to config.epochs).
  std::size_t stop_after = 0;
  std::function<void(const EpochStats&, double validation_reward)> on_epoch;
};

struct FitResult {
  TrainState state;
  std::filesystem::path best_checkpoint;
  std::filesystem::path log_path;
};

// Runs epochs, writes epoch-NNN.ckpt after each, copies the checkpoint with
// the highest validation reward (first wins ties) to best.ckpt, and writes
// train_log.jsonl, one line per epoch: {"epoch", "loss", "train_reward",
// "validation_reward", "best"}. The model is left at the last epoch's parameters.
FitResult fit(RefreshModel& model, const Vocabulary& vocab,
              std::span<const TrainingExample> train, std::span<const Document> validation,
              const TrainConfig& config, const FitOptions& options);

std::string train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const std::string& json_text);
std::string train_state_to_json(const TrainState& state);
TrainState train_state_from_json(const std::string& json_text);

}  // namespace refresh
