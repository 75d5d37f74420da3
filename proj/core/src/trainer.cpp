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

#include "refresh/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <unordered_set>

#include "refresh/error.hpp"
#include "refresh/nn/adam.hpp"
#include "refresh/parallel.hpp"

namespace refresh {

using nlohmann::json;

std::string to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::kCeIndividual: return "ce_individual";
    case TrainMode::kCeCollective: return "ce_collective";
    case TrainMode::kReinforce: return "reinforce";
  }
  return "?";
}

TrainMode parse_train_mode(std::string_view text) {
  if (text == "ce_individual") return TrainMode::kCeIndividual;
  if (text == "ce_collective") return TrainMode::kCeCollective;
  if (text == "reinforce") return TrainMode::kReinforce;
  throw ConfigError("unknown training mode '" + std::string(text) +
                    "' (expected ce_individual, ce_collective or reinforce)");
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::kUniform ? "uniform" : "reward";
}

SamplingMode parse_sampling_mode(std::string_view text) {
  if (text == "uniform") return SamplingMode::kUniform;
  if (text == "reward") return SamplingMode::kRewardProportional;
  throw ConfigError("unknown sampling mode '" + std::string(text) +
                    "' (expected uniform or reward)");
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (!(adam.lr >= 0.0) || !std::isfinite(adam.lr)) throw ConfigError("lr must be >= 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0)) throw ConfigError("beta1 must be in [0, 1)");
  if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) throw ConfigError("beta2 must be in [0, 1)");
  if (!(adam.eps > 0.0)) throw ConfigError("eps must be > 0");
  if (!(clip_norm >= 0.0) || !std::isfinite(clip_norm)) {
    throw ConfigError("clip_norm must be >= 0");
  }
  if (threads == 0) throw ConfigError("threads must be >= 1");
  if (warm_start_epochs > 0 && mode != TrainMode::kReinforce) {
    throw ConfigError("warm_start_epochs applies to reinforce mode only");
  }
}

std::vector<TrainingExample> prepare_examples(std::span<const Document> documents,
                                              const Vocabulary& vocab,
                                              const ModelConfig& model_config, TrainMode mode,
                                              std::span<const std::vector<int>> labels,
                                              const oracle::CandidateStore* candidates,
                                              std::vector<std::string>* skipped) {
  (void)vocab;
  const bool reinforce = mode == TrainMode::kReinforce;
  if (reinforce && !candidates) {
    throw DataError("reinforce mode needs a candidate store");
  }
  if (!reinforce && labels.size() != documents.size()) {
    throw DataError("label file has " + std::to_string(labels.size()) + " lines for " +
                    std::to_string(documents.size()) + " documents");
  }
  auto skip = [&](const Document& doc) {
    if (skipped) skipped->push_back(doc.id);
  };
  std::vector<TrainingExample> out;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    const Document& doc = documents[d];
    TrainingExample ex;
    ex.document = &doc;
    ex.sentence_count = std::min(doc.size(), model_config.max_doc_len);
    if (ex.sentence_count == 0) {
      skip(doc);
      continue;
    }
    if (reinforce) {
      if (doc.highlights.empty()) {
        skip(doc);
        continue;
      }
      const auto it = candidates->find(doc.id);
      if (it == candidates->end()) {
        throw DataError("no candidate set for document " + doc.id);
      }
      if (it->second.ranked.empty()) {
        skip(doc);
        continue;
      }
      for (const auto& c : it->second.ranked) {
        if (c.extract.indices().back() >= ex.sentence_count) {
          throw DataError("candidate extract of document " + doc.id +
                          " refers to a sentence beyond max_doc_len");
        }
      }
      ex.candidates = &it->second;
    } else {
      const auto& y = labels[d];
      if (y.empty()) {
        skip(doc);
        continue;
      }
      if (y.size() != doc.size()) {
        throw DataError("document " + doc.id + " has " + std::to_string(doc.size()) +
                        " sentences but " + std::to_string(y.size()) + " labels");
      }
      ex.labels.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(ex.sentence_count));
    }
    out.push_back(std::move(ex));
  }
  return out;
}

double ce_loss_and_grads(RefreshModel& model, const PaddedDocView& doc,
                         std::span<const int> labels, double scale) {
  const ForwardPass pass = model.forward(doc);
  if (labels.size() != pass.size()) {
    throw DataError("expected " + std::to_string(pass.size()) + " labels, got " +
                    std::to_string(labels.size()));
  }
  std::vector<std::array<double, 2>> dlogp(pass.size(), {0.0, 0.0});
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0 or 1");
    const auto y = static_cast<std::size_t>(labels[i]);
    loss -= pass.log_probs[i][y];
    dlogp[i][y] = -scale;
  }
  if (scale != 0.0) model.backward(pass, dlogp);
  return loss;
}

oracle::ScoredExtract sample_extract(const oracle::CandidateSet& candidates, nn::Rng& rng,
                                     SamplingMode mode) {
  const auto& ranked = candidates.ranked;
  if (ranked.empty()) {
    throw DataError("cannot sample from the empty candidate set of " + candidates.document_id);
  }
  if (mode == SamplingMode::kRewardProportional) {
    double total = 0.0;
    for (const auto& c : ranked) total += std::max(c.reward, 0.0);
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (const auto& c : ranked) {
        acc += std::max(c.reward, 0.0);
        if (u < acc) return c;
      }
      return ranked.back();
    }
  }
  return ranked[rng.below(ranked.size())];
}

double reinforce_loss_and_grads(RefreshModel& model, const PaddedDocView& doc,
                                const oracle::ScoredExtract& sampled, double baseline) {
  const std::size_t n = std::min(doc.sentence_count, model.config().max_doc_len);
  if (sampled.extract.size() == 0 || sampled.extract.indices().back() >= n) {
    throw DataError("sampled extract refers to a sentence outside the document");
  }
  const double r = sampled.reward - baseline;
  const std::vector<int> y = sampled.extract.labels(n);
  return r * ce_loss_and_grads(model, doc, y, r);
}

EpochStats train_epoch(RefreshModel& model, const Vocabulary& vocab,
                       std::span<const TrainingExample> examples, const TrainConfig& config,
                       nn::Rng& rng, std::size_t epoch) {
  config.validate();
  if (examples.empty()) throw DataError("no training documents");
  const bool reinforce = config.mode == TrainMode::kReinforce;
  const bool warm = reinforce && epoch <= config.warm_start_epochs;

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  EpochStats stats;
  stats.epoch = epoch;
  auto& params = model.params();
  double loss_sum = 0.0, reward_sum = 0.0;
  for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
    const std::size_t end = std::min(order.size(), start + config.batch_size);
    params.zero_grad();
    for (std::size_t b = start; b < end; ++b) {
      const TrainingExample& ex = examples[order[b]];
      const PaddedDocView padded = model.pad(*ex.document, vocab);
      if (!reinforce) {
        loss_sum += ce_loss_and_grads(model, padded, ex.labels);
      } else if (warm) {
        const auto& top = ex.candidates->ranked.front();
        loss_sum += ce_loss_and_grads(model, padded, top.extract.labels(ex.sentence_count));
        reward_sum += top.reward;
      } else {
        const oracle::ScoredExtract sampled = sample_extract(*ex.candidates, rng, config.sampling);
        double baseline = 0.0;
        if (config.baseline) {
          for (const auto& c : ex.candidates->ranked) baseline += c.reward;
          baseline /= static_cast<double>(ex.candidates->ranked.size());
        }
        loss_sum += reinforce_loss_and_grads(model, padded, sampled, baseline);
        reward_sum += sampled.reward;
      }
    }
    if (config.clip_norm > 0.0) params.clip_grad_norm(config.clip_norm);
    nn::adam_update(params, config.adam);
    ++stats.batches;
  }
  stats.documents = examples.size();
  stats.loss = loss_sum / static_cast<double>(stats.documents);
  stats.sampled_reward = reward_sum / static_cast<double>(stats.documents);
  return stats;
}

ValidationResult validate(const RefreshModel& model, std::span<const Document> documents,
                          const Vocabulary& vocab, const TrainConfig& config) {
  if (documents.empty()) throw DataError("empty validation set");
  std::vector<rouge::Reward> rewards(documents.size());
  ValidationResult out;
  out.extracts.resize(documents.size());
  parallel_for(documents.size(), config.threads, [&](std::size_t i) {
    const Document& doc = documents[i];
    const SentenceScores scores = model.extract_scores(model.pad(doc, vocab));
    out.extracts[i] = assemble_summary(doc, scores, model.config().m_select);
    rewards[i] = oracle::extract_reward(doc, out.extracts[i], config.rouge);
  });
  rouge::Reward sum;
  for (const auto& r : rewards) {
    sum.value += r.value;
    sum.rouge1.f1 += r.rouge1.f1;
    sum.rouge2.f1 += r.rouge2.f1;
    sum.rouge_l.f1 += r.rouge_l.f1;
  }
  const double n = static_cast<double>(documents.size());
  out.mean.value = sum.value / n;
  out.mean.rouge1.f1 = sum.rouge1.f1 / n;
  out.mean.rouge2.f1 = sum.rouge2.f1 / n;
  out.mean.rouge_l.f1 = sum.rouge_l.f1 / n;
  return out;
}

void record_epoch(TrainState& state, const EpochStats& stats, double validation_reward) {
  state.epoch = stats.epoch;
  state.train_loss.push_back(stats.loss);
  state.train_reward.push_back(stats.sampled_reward);
  state.validation_reward.push_back(validation_reward);
  if (state.best_epoch == 0 || validation_reward > state.best_reward) {
    state.best_epoch = stats.epoch;
    state.best_reward = validation_reward;
  }
}

std::string checkpoint_name(std::size_t epoch) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch-%03zu.ckpt", epoch);
  return buf;
}

std::string TrainState::best_checkpoint() const {
  return best_epoch == 0 ? std::string() : checkpoint_name(best_epoch);
}

namespace {

json train_config_json(const TrainConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"lr", c.adam.lr},
          {"beta1", c.adam.beta1},
          {"beta2", c.adam.beta2},
          {"eps", c.adam.eps},
          {"seed", c.seed},
          {"sampling", to_string(c.sampling)},
          {"baseline", c.baseline},
          {"warm_start_epochs", c.warm_start_epochs},
          {"clip_norm", c.clip_norm},
          {"threads", c.threads},
          {"stemming", c.rouge.stemming},
          {"lcs_mode", c.rouge.lcs_mode == rouge::LcsMode::kUnion ? "union" : "concatenated"}};
}

// Fields that must agree between a checkpoint and a resumed run.
json resume_key(const TrainConfig& c) {
  json j = train_config_json(c);
  j.erase("epochs");
  j.erase("threads");
  return j;
}

json train_state_json(const TrainState& s) {
  return {{"epoch", s.epoch},
          {"train_loss", s.train_loss},
          {"train_reward", s.train_reward},
          {"validation_reward", s.validation_reward},
          {"best_epoch", s.best_epoch},
          {"best_reward", s.best_epoch == 0 ? json(nullptr) : json(s.best_reward)},
          {"rng_state", s.rng_state}};
}

void write_log(const std::filesystem::path& path, const TrainState& state) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write training log " + path.string());
  for (std::size_t e = 0; e < state.epoch; ++e) {
    out << json{{"epoch", e + 1},
                {"loss", state.train_loss[e]},
                {"train_reward", state.train_reward[e]},
                {"validation_reward", state.validation_reward[e]},
                {"best", state.best_epoch == e + 1}}
               .dump()
        << '\n';
  }
}

}  // namespace

std::string train_config_to_json(const TrainConfig& config) {
  return train_config_json(config).dump();
}

TrainConfig train_config_from_json(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    TrainConfig c;
    c.mode = parse_train_mode(j.at("mode").get<std::string>());
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.adam.lr = j.at("lr").get<double>();
    c.adam.beta1 = j.at("beta1").get<double>();
    c.adam.beta2 = j.at("beta2").get<double>();
    c.adam.eps = j.at("eps").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.sampling = parse_sampling_mode(j.at("sampling").get<std::string>());
    c.baseline = j.at("baseline").get<bool>();
    c.warm_start_epochs = j.at("warm_start_epochs").get<std::size_t>();
    c.clip_norm = j.at("clip_norm").get<double>();
    c.threads = j.at("threads").get<unsigned>();
    c.rouge.stemming = j.at("stemming").get<bool>();
    c.rouge.lcs_mode = j.at("lcs_mode").get<std::string>() == "union"
                           ? rouge::LcsMode::kUnion
                           : rouge::LcsMode::kConcatenated;
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid training config JSON: ") + e.what());
  }
}

std::string train_state_to_json(const TrainState& state) {
  return train_state_json(state).dump();
}

TrainState train_state_from_json(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    TrainState s;
    s.epoch = j.at("epoch").get<std::size_t>();
    s.train_loss = j.at("train_loss").get<std::vector<double>>();
    s.train_reward = j.at("train_reward").get<std::vector<double>>();
    s.validation_reward = j.at("validation_reward").get<std::vector<double>>();
    s.best_epoch = j.at("best_epoch").get<std::size_t>();
    if (!j.at("best_reward").is_null()) s.best_reward = j.at("best_reward").get<double>();
    s.rng_state = j.at("rng_state").get<std::string>();
    if (s.train_loss.size() != s.epoch || s.train_reward.size() != s.epoch ||
        s.validation_reward.size() != s.epoch || s.best_epoch > s.epoch) {
      throw DataError("inconsistent training state");
    }
    return s;
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid training state: ") + e.what());
  }
}

FitResult fit(RefreshModel& model, const Vocabulary& vocab,
              std::span<const TrainingExample> train, std::span<const Document> validation,
              const TrainConfig& config, const FitOptions& options) {
  config.validate();
  if (validation.empty()) throw DataError("empty validation set");
  {
    std::unordered_set<std::string_view> train_ids;
    for (const auto& ex : train) train_ids.insert(ex.document->id);
    for (const auto& doc : validation) {
      if (train_ids.contains(doc.id)) {
        throw DataError("document " + doc.id + " is in both the training and validation sets");
      }
    }
  }
  std::filesystem::create_directories(options.out_dir);

  nn::Rng rng(config.seed);
  TrainState state;
  if (options.resume_from) {
    ModelCheckpoint ckpt = load_model_checkpoint(*options.resume_from);
    if (!(ckpt.config == model.config())) {
      throw ConfigError("resume checkpoint was trained with a different model config");
    }
    if (!(ckpt.vocab == vocab)) {
      throw ConfigError("resume checkpoint was trained with a different vocabulary");
    }
    const json extra = json::parse(ckpt.extra_json);
    if (!extra.contains("train_state") || !extra.contains("train_config")) {
      throw DataError(options.resume_from->string() + " carries no training state");
    }
    if (resume_key(train_config_from_json(extra.at("train_config").dump())) !=
        resume_key(config)) {
      throw ConfigError("resume checkpoint was trained with a different training config");
    }
    state = train_state_from_json(extra.at("train_state").dump());
    rng.set_state(state.rng_state);
    model = RefreshModel(ckpt.config, std::move(ckpt.params));
  }

  FitResult result;
  result.log_path = options.out_dir / "train_log.jsonl";
  const auto best_path = options.out_dir / "best.ckpt";
  const std::size_t last =
      options.stop_after ? std::min(config.epochs, options.stop_after) : config.epochs;
  for (std::size_t epoch = state.epoch + 1; epoch <= last; ++epoch) {
    const EpochStats stats = train_epoch(model, vocab, train, config, rng, epoch);
    const double reward = validate(model, validation, vocab, config).mean.value;
    record_epoch(state, stats, reward);
    state.rng_state = rng.state();
    const json extra = {{"train_state", train_state_json(state)},
                        {"train_config", train_config_json(config)}};
    const auto ckpt_path = options.out_dir / checkpoint_name(epoch);
    save_model_checkpoint(ckpt_path, model, vocab, extra.dump());
    if (state.best_epoch == epoch) {
      std::filesystem::copy_file(ckpt_path, best_path,
                                 std::filesystem::copy_options::overwrite_existing);
    }
    write_log(result.log_path, state);
    if (options.on_epoch) options.on_epoch(stats, reward);
  }
  if (!std::filesystem::exists(best_path) && state.best_epoch > 0) {
    // Resumed into a fresh directory after the best epoch had passed.
    const auto source = options.resume_from
                            ? options.resume_from->parent_path() / state.best_checkpoint()
                            : options.out_dir / state.best_checkpoint();
    if (std::filesystem::exists(source)) std::filesystem::copy_file(source, best_path);
  }
  if (!std::filesystem::exists(result.log_path)) write_log(result.log_path, state);
  result.state = state;
  result.best_checkpoint = best_path;
  return result;
}

}  // namespace refresh
