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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "refresh/cli/cli.hpp"
#include "refresh/corpus_cache.hpp"
#include "refresh/error.hpp"
#include "refresh/model.hpp"
#include "refresh/parallel.hpp"
#include "refresh/trainer.hpp"

namespace refresh::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
  return buf;
}

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw DataError("cannot write " + path.string());
}

template <class Fn>
void write_stream(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  fn(out);
  if (!out) throw DataError("cannot write " + path.string());
}

void make_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Flags shared by every subcommand: --config FILE, --set key=value and one
// --<key> option per configuration key.
struct SettingFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config_file, "Configuration file (key = value lines)");
    sub->add_option("--set", sets, "Override one configuration key (key=value)");
    for (const auto& key : known_setting_keys()) {
      options[key] = sub->add_option("--" + dashed(key), values[key], "Configuration key " + key);
    }
  }

  // File, then --set, then the dedicated flags.
  SettingMap collect() const {
    SettingMap m;
    if (!config_file.empty()) m = load_settings_file(config_file);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      m[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) m[key] = values.at(key);
    }
    return m;
  }
};

void write_snapshot(const fs::path& dir, const std::string& command, const RunSettings& settings) {
  write_file(dir / "config.txt", "# refresh " + command + "\n" + settings_snapshot(settings));
}

std::vector<Document> load_documents(const std::vector<std::string>& inputs, std::ostream& err) {
  if (inputs.size() == 1 && fs::is_regular_file(inputs[0]) &&
      fs::path(inputs[0]).extension() != ".story") {
    return load_corpus_cache(inputs[0]);
  }
  std::vector<std::string> errors;
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  auto docs = read_stories(paths, errors);
  for (const auto& e : errors) err << "warning: skipped " << e << '\n';
  return docs;
}

std::vector<Document> truncate_documents(std::vector<Document> docs, std::size_t max_doc_len) {
  for (auto& doc : docs) {
    if (doc.sentences.size() > max_doc_len) doc.sentences.resize(max_doc_len);
  }
  return docs;
}

// --- preprocess --------------------------------------------------------------

struct PreprocessArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  SettingFlags flags;
};

int cmd_preprocess(const PreprocessArgs& a, std::ostream& out, std::ostream& err) {
  const RunSettings settings = make_settings(a.flags.collect());
  std::vector<std::string> errors;
  const std::vector<fs::path> paths(a.inputs.begin(), a.inputs.end());
  std::vector<Document> docs = read_stories(paths, errors);
  for (const auto& e : errors) err << "error: " << e << '\n';
  if (docs.empty()) throw DataError("no readable story files in the input");
  std::set<std::string> seen;
  for (const auto& d : docs) {
    if (!seen.insert(d.id).second) throw DataError("duplicate document id " + d.id);
  }
  const Vocabulary vocab = build_vocabulary(docs, settings.min_freq);
  make_out_dir(a.out_dir);
  save_corpus_cache(docs, fs::path(a.out_dir) / "corpus.jsonl");
  save_vocabulary(vocab, fs::path(a.out_dir) / "vocab.txt");
  write_snapshot(a.out_dir, "preprocess", settings);
  out << "documents " << docs.size() << "\nskipped " << errors.size() << "\nvocabulary "
      << vocab.size() << '\n';
  return kExitOk;
}

// --- oracle ------------------------------------------------------------------

struct OracleArgs {
  std::string input;
  std::string out_dir;
  SettingFlags flags;
};

std::vector<int> padded_labels(const oracle::Extract& e, std::size_t n) {
  std::vector<int> y(n, 0);
  for (std::size_t i : e.indices()) y[i] = 1;
  return y;
}

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream& err) {
  const RunSettings settings = make_settings(a.flags.collect());
  const std::vector<Document> docs = load_corpus_cache(a.input);
  // Candidates only refer to sentences the model will see.
  const std::vector<Document> visible = truncate_documents(docs, settings.model.max_doc_len);
  const auto report =
      oracle::precompute_candidates(visible, settings.oracle, settings.rouge(), settings.train.threads);
  for (const auto& id : report.skipped) err << "warning: " << id << " has no highlights; skipped\n";

  std::vector<std::vector<int>> collective(docs.size()), individual(docs.size());
  double top_sum = 0.0;
  std::size_t top_count = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto it = report.store.find(docs[d].id);
    if (it == report.store.end() || it->second.ranked.empty()) continue;
    collective[d] = padded_labels(it->second.ranked.front().extract, docs[d].size());
    top_sum += it->second.ranked.front().reward;
    ++top_count;
    individual[d] = oracle::threshold_labels(
        oracle::sentence_individual_scores(docs[d], settings.rouge()), settings.oracle.tau);
  }
  make_out_dir(a.out_dir);
  const fs::path dir = a.out_dir;
  oracle::save_candidate_store(report.store, dir / "candidates.jsonl");
  write_stream(dir / "labels_collective.txt",
               [&](std::ostream& o) { oracle::write_label_file(collective, o); });
  write_stream(dir / "labels_individual.txt",
               [&](std::ostream& o) { oracle::write_label_file(individual, o); });
  write_snapshot(dir, "oracle", settings);
  out << "documents " << report.store.size() << "\nskipped " << report.skipped.size()
      << "\nmean_top_reward " << percent(top_count ? top_sum / top_count : 0.0) << '\n';
  return kExitOk;
}

// --- train -------------------------------------------------------------------

struct TrainArgs {
  std::string input;
  std::string validation;
  std::string candidates;
  std::string labels;
  std::string vocab;
  std::string embeddings;
  std::string resume;
  std::string out_dir;
  SettingFlags flags;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const RunSettings settings = make_settings(a.flags.collect());
  const bool reinforce = settings.train.mode == TrainMode::kReinforce;
  if (reinforce && a.candidates.empty()) {
    throw ConfigError("reinforce mode needs a candidate store (--candidates)");
  }
  if (!reinforce && a.labels.empty()) {
    throw ConfigError(to_string(settings.train.mode) + " mode needs a label file (--labels)");
  }
  const std::vector<Document> train = load_corpus_cache(a.input);
  const std::vector<Document> validation = load_corpus_cache(a.validation);
  const Vocabulary vocab =
      a.vocab.empty() ? build_vocabulary(train, settings.min_freq) : load_vocabulary(a.vocab);

  oracle::CandidateStore store;
  std::vector<std::vector<int>> labels;
  if (reinforce) {
    store = oracle::load_candidate_store(a.candidates);
  } else {
    std::ifstream in(a.labels);
    if (!in) throw DataError("cannot read " + a.labels);
    labels = oracle::read_label_file(in, a.labels);
  }
  std::vector<std::string> skipped;
  const auto examples = prepare_examples(train, vocab, settings.model, settings.train.mode, labels,
                                         reinforce ? &store : nullptr, &skipped);
  if (!skipped.empty()) err << "warning: skipped " << skipped.size() << " training documents\n";
  if (examples.empty()) throw DataError("no usable training documents");

  RefreshModel model(settings.model, vocab.size());
  if (!a.embeddings.empty()) {
    const EmbeddingTable table =
        load_pretrained_embeddings(a.embeddings, vocab, settings.model.embedding_dim);
    model.load_embeddings(table);
    const auto found = static_cast<std::size_t>(std::count(table.found.begin(), table.found.end(), true));
    err << "embeddings: " << found << " of " << vocab.size() << " rows initialised from file\n";
  }

  make_out_dir(a.out_dir);
  write_snapshot(a.out_dir, "train", settings);
  save_vocabulary(vocab, fs::path(a.out_dir) / "vocab.txt");
  FitOptions options;
  options.out_dir = a.out_dir;
  if (!a.resume.empty()) options.resume_from = a.resume;
  options.on_epoch = [&](const EpochStats& s, double validation_reward) {
    err << "epoch " << s.epoch << ": loss " << s.loss << ", train reward "
        << percent(s.sampled_reward) << ", validation reward " << percent(validation_reward)
        << '\n';
  };
  const FitResult result = fit(model, vocab, examples, validation, settings.train, options);
  out << "epochs " << result.state.epoch << "\nbest_epoch " << result.state.best_epoch
      << "\nbest_validation_reward " << percent(result.state.best_reward) << "\nbest_checkpoint "
      << result.best_checkpoint.string() << '\n';
  return kExitOk;
}

// --- summarize / lead --------------------------------------------------------

struct SummarizeArgs {
  std::vector<std::string> inputs;
  std::string checkpoint;
  std::string out_dir;
  SettingFlags flags;
};

void emit_summaries(const fs::path& dir, const std::vector<Summary>& summaries) {
  write_stream(dir / "summaries.jsonl", [&](std::ostream& o) { write_summaries(summaries, o); });
  write_stream(dir / "summaries.txt", [&](std::ostream& o) { write_summaries_text(summaries, o); });
}

int cmd_summarize(const SummarizeArgs& a, std::ostream& out, std::ostream& err) {
  const SettingMap given = a.flags.collect();
  RunSettings settings = make_settings(given);
  ModelCheckpoint ck = load_model_checkpoint(a.checkpoint);
  // Architecture keys, when given, must agree with the checkpoint.
  const ModelConfig& want = settings.model;
  auto check = [&](const char* key, bool same) {
    if (given.contains(key) && !same) {
      throw ConfigError(std::string("checkpoint was trained with a different ") + key);
    }
  };
  check("embedding_dim", want.embedding_dim == ck.config.embedding_dim);
  check("kernel_widths", want.kernel_widths == ck.config.kernel_widths);
  check("channels_per_kernel", want.channels_per_kernel == ck.config.channels_per_kernel);
  check("lstm_size", want.lstm_size == ck.config.lstm_size);
  check("max_sent_len", want.max_sent_len == ck.config.max_sent_len);
  check("max_doc_len", want.max_doc_len == ck.config.max_doc_len);
  const bool explicit_m = given.contains("m") || given.contains("corpus");
  const std::size_t m = explicit_m ? settings.model.m_select : ck.config.m_select;
  settings.model = ck.config;
  settings.model.m_select = m;

  const RefreshModel model(ck.config, std::move(ck.params));
  const std::vector<Document> docs = load_documents(a.inputs, err);
  if (docs.empty()) throw DataError("no documents to summarize");
  std::vector<Summary> summaries(docs.size());
  parallel_for(docs.size(), settings.train.threads, [&](std::size_t i) {
    const SentenceScores scores = model.extract_scores(model.pad(docs[i], ck.vocab));
    summaries[i] = make_summary(docs[i], assemble_summary(docs[i], scores, m));
  });
  make_out_dir(a.out_dir);
  emit_summaries(a.out_dir, summaries);
  write_snapshot(a.out_dir, "summarize", settings);
  out << "summaries " << summaries.size() << '\n';
  return kExitOk;
}

struct LeadArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  SettingFlags flags;
};

int cmd_lead(const LeadArgs& a, std::ostream& out, std::ostream& err) {
  const RunSettings settings = make_settings(a.flags.collect());
  const std::vector<Document> docs = load_documents(a.inputs, err);
  if (docs.empty()) throw DataError("no documents to summarize");
  std::vector<Summary> summaries;
  for (const auto& doc : docs) {
    summaries.push_back(make_summary(doc, lead_baseline(doc, settings.model.m_select)));
  }
  make_out_dir(a.out_dir);
  emit_summaries(a.out_dir, summaries);
  write_snapshot(a.out_dir, "lead", settings);
  out << "summaries " << summaries.size() << '\n';
  return kExitOk;
}

// --- evaluate / rouge --------------------------------------------------------

struct EvaluateArgs {
  std::string summaries;
  std::vector<std::string> inputs;
  std::string out_dir;
  bool per_document = false;
  SettingFlags flags;
};

json reward_json(const rouge::Reward& r) {
  return {{"rouge1", r.rouge1.f1}, {"rouge2", r.rouge2.f1}, {"rouge_l", r.rouge_l.f1},
          {"reward", r.value}};
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const RunSettings settings = make_settings(a.flags.collect());
  std::ifstream in(a.summaries);
  if (!in) throw DataError("cannot read " + a.summaries);
  const std::vector<Summary> summaries = read_summaries(in, a.summaries);
  const std::vector<Document> docs = load_documents(a.inputs, err);
  const EvaluationReport report = evaluate_summaries(summaries, docs, settings.rouge());
  for (const auto& id : report.skipped) err << "warning: " << id << " has no highlights; skipped\n";

  make_out_dir(a.out_dir);
  const fs::path dir = a.out_dir;
  const json j = {{"documents", report.documents}, {"skipped", report.skipped},
                  {"rouge1", report.rouge1},
                  {"rouge2", report.rouge2},       {"rouge_l", report.rouge_l},
                  {"reward", report.reward}};
  write_file(dir / "evaluation.json", j.dump(2) + "\n");
  if (a.per_document) {
    write_stream(dir / "per_document.jsonl", [&](std::ostream& o) {
      for (const auto& d : report.per_document) {
        json line = reward_json(d.reward);
        line["id"] = d.id;
        o << line.dump() << '\n';
      }
    });
  }
  write_snapshot(dir, "evaluate", settings);
  out << "documents " << report.documents << "\nROUGE-1 " << percent(report.rouge1)
      << "\nROUGE-2 " << percent(report.rouge2) << "\nROUGE-L " << percent(report.rouge_l)
      << '\n';
  return kExitOk;
}

struct RougeArgs {
  std::string candidate;
  std::string reference;
  std::string out_dir;
  SettingFlags flags;
};

std::vector<Sentence> read_sentence_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::vector<Sentence> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Sentence s;
    s.index = out.size();
    s.raw = line;
    s.tokens = tokenize(line);
    out.push_back(std::move(s));
  }
  return out;
}

int cmd_rouge(const RougeArgs& a, std::ostream& out, std::ostream&) {
  const RunSettings settings = make_settings(a.flags.collect());
  const auto cand = read_sentence_lines(a.candidate);
  const auto ref = read_sentence_lines(a.reference);
  if (ref.empty()) throw DataError(a.reference + " has no sentences");
  const rouge::Reward r = rouge::mean_rouge_reward(cand, ref, settings.rouge());
  auto row = [&](const char* name, const rouge::RougeScore& s) {
    out << name << " P " << percent(s.precision) << " R " << percent(s.recall) << " F "
        << percent(s.f1) << '\n';
  };
  row("ROUGE-1", r.rouge1);
  row("ROUGE-2", r.rouge2);
  row("ROUGE-L", r.rouge_l);
  out << "reward " << percent(r.value) << '\n';
  if (!a.out_dir.empty()) {
    make_out_dir(a.out_dir);
    auto prf = [](const rouge::RougeScore& s) {
      return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
    };
    const json j = {{"rouge1", prf(r.rouge1)}, {"rouge2", prf(r.rouge2)},
                    {"rouge_l", prf(r.rouge_l)}, {"reward", r.value}};
    write_file(fs::path(a.out_dir) / "rouge.json", j.dump(2) + "\n");
    write_snapshot(a.out_dir, "rouge", settings);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extractive summarization by sentence ranking with REINFORCE"};
  app.name("refresh");
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "Parse story files into a corpus cache");
  pre_cmd->add_option("--input", pre.inputs, "Story directories or files")->required();
  pre_cmd->add_option("--out", pre.out_dir, "Output directory")->required();
  pre.flags.attach(pre_cmd);

  OracleArgs ora;
  auto* ora_cmd = app.add_subcommand("oracle", "Precompute candidate extracts and oracle labels");
  ora_cmd->add_option("--input", ora.input, "Corpus cache")->required();
  ora_cmd->add_option("--out", ora.out_dir, "Output directory")->required();
  ora.flags.attach(ora_cmd);

  TrainArgs tr;
  auto* tr_cmd = app.add_subcommand("train", "Train the sentence ranker");
  tr_cmd->add_option("--input", tr.input, "Training corpus cache")->required();
  tr_cmd->add_option("--validation", tr.validation, "Validation corpus cache")->required();
  tr_cmd->add_option("--candidates", tr.candidates, "Candidate store (reinforce mode)");
  tr_cmd->add_option("--labels", tr.labels, "Label file (cross-entropy modes)");
  tr_cmd->add_option("--vocab", tr.vocab, "Vocabulary file (default: built from --input)");
  tr_cmd->add_option("--embeddings", tr.embeddings, "Pre-trained word vectors (text format)");
  tr_cmd->add_option("--resume", tr.resume, "Checkpoint of an interrupted run");
  tr_cmd->add_option("--out", tr.out_dir, "Run directory")->required();
  tr.flags.attach(tr_cmd);

  SummarizeArgs sum;
  auto* sum_cmd = app.add_subcommand("summarize", "Extract summaries with a trained model");
  sum_cmd->add_option("--input", sum.inputs, "Corpus cache or story files")->required();
  sum_cmd->add_option("--checkpoint", sum.checkpoint, "Model checkpoint")->required();
  sum_cmd->add_option("--out", sum.out_dir, "Output directory")->required();
  sum.flags.attach(sum_cmd);

  LeadArgs lead;
  auto* lead_cmd = app.add_subcommand("lead", "Leading-sentences baseline summaries");
  lead_cmd->add_option("--input", lead.inputs, "Corpus cache or story files")->required();
  lead_cmd->add_option("--out", lead.out_dir, "Output directory")->required();
  lead.flags.attach(lead_cmd);

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Score summaries against the highlights");
  ev_cmd->add_option("--summaries", ev.summaries, "summaries.jsonl")->required();
  ev_cmd->add_option("--input", ev.inputs, "Corpus cache or story files")->required();
  ev_cmd->add_option("--out", ev.out_dir, "Output directory")->required();
  ev_cmd->add_flag("--per-document", ev.per_document, "Also write per_document.jsonl");
  ev.flags.attach(ev_cmd);

  RougeArgs rg;
  auto* rg_cmd = app.add_subcommand("rouge", "Score one candidate text against one reference");
  rg_cmd->add_option("--candidate", rg.candidate, "Candidate, one sentence per line")->required();
  rg_cmd->add_option("--reference", rg.reference, "Reference, one sentence per line")->required();
  rg_cmd->add_option("--out", rg.out_dir, "Optional output directory for rouge.json");
  rg.flags.attach(rg_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pre_cmd) return cmd_preprocess(pre, out, err);
    if (*ora_cmd) return cmd_oracle(ora, out, err);
    if (*tr_cmd) return cmd_train(tr, out, err);
    if (*sum_cmd) return cmd_summarize(sum, out, err);
    if (*lead_cmd) return cmd_lead(lead, out, err);
    if (*ev_cmd) return cmd_evaluate(ev, out, err);
    if (*rg_cmd) return cmd_rouge(rg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace refresh::cli
