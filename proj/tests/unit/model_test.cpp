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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "refresh/error.hpp"
#include "refresh/model.hpp"
#include "refresh/nn/gradcheck.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

namespace refresh {
namespace {

struct Fixture {
  std::vector<Document> docs;
  Vocabulary vocab;
};

Fixture make_fixture(std::uint64_t seed, std::size_t count = 5, std::size_t max_sentences = 5) {
  nn::Rng rng(seed);
  Fixture f;
  for (std::size_t i = 0; i < count; ++i) {
    f.docs.push_back(synth::random_document(rng, "d" + std::to_string(i),
                                            1 + rng.below(max_sentences), 1, 10, 30, 1));
  }
  f.vocab = build_vocabulary(f.docs);
  return f;
}

void zero_all(RefreshModel& model) {
  for (auto& p : model.params()) p.value.fill(0.0);
}

TEST(ModelConfig, SentenceEmbeddingDimension) {
  ModelConfig c;
  EXPECT_EQ(c.sentence_embedding_dim(), 350u);
  c.kernel_widths = {2, 4};
  c.channels_per_kernel = 3;
  EXPECT_EQ(c.sentence_embedding_dim(), 6u);
  EXPECT_EQ(c.max_kernel_width(), 4u);
}

TEST(ModelConfig, Validation) {
  ModelConfig c = synth::tiny_config(0);
  EXPECT_NO_THROW(c.validate());
  c.kernel_widths = {2, 2};
  EXPECT_THROW(c.validate(), ConfigError);
  c.kernel_widths = {};
  EXPECT_THROW(c.validate(), ConfigError);
  c = synth::tiny_config(0);
  c.max_sent_len = 2;
  EXPECT_THROW(c.validate(), ConfigError);
  c = synth::tiny_config(0);
  c.lstm_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ModelConfig, JsonRoundTrip) {
  ModelConfig c = synth::tiny_config(9);
  c.init_range = 0.05;
  EXPECT_EQ(model_config_from_json(model_config_to_json(c)), c);
}

TEST(Model, EncoderDimensionMatchesConfig) {
  const Fixture f = make_fixture(1);
  for (const auto& widths : std::vector<std::vector<std::size_t>>{{1}, {2, 4}, {1, 2, 3}}) {
    ModelConfig c = synth::tiny_config(0);
    c.kernel_widths = widths;
    c.channels_per_kernel = 3;
    const RefreshModel model(c, f.vocab.size());
    const auto view = model.pad(f.docs[0], f.vocab);
    EXPECT_EQ(model.encode_sentence(view.row(0), view.sentence_lengths[0]).size(),
              widths.size() * 3);
  }
}

TEST(Model, ParameterLayout) {
  const RefreshModel model(synth::tiny_config(0), 40);
  const auto& ps = model.params();
  EXPECT_EQ(ps.get("embedding").value.shape(), (std::vector<std::size_t>{40, 8}));
  EXPECT_EQ(ps.get("embedding").frozen_rows, 1u);
  for (std::size_t d = 0; d < 8; ++d) EXPECT_EQ(ps.get("embedding").value.at(0, d), 0.0);
  EXPECT_EQ(ps.get("conv.w2").value.shape(), (std::vector<std::size_t>{4, 2, 8}));
  EXPECT_EQ(ps.get("doc_lstm.W").value.shape(), (std::vector<std::size_t>{64, 12 + 16}));
  EXPECT_EQ(ps.get("ext_lstm.W").value.shape(), (std::vector<std::size_t>{64, 24 + 16}));
  EXPECT_EQ(ps.get("out.W").value.shape(), (std::vector<std::size_t>{2, 16}));
  for (std::size_t i = 16; i < 32; ++i) EXPECT_EQ(ps.get("doc_lstm.b").value[i], 1.0);
  EXPECT_EQ(model.vocab_size(), 40u);
}

TEST(Model, SeededInitIsDeterministic) {
  EXPECT_EQ(RefreshModel(synth::tiny_config(3), 20).params(),
            RefreshModel(synth::tiny_config(3), 20).params());
  EXPECT_NE(RefreshModel(synth::tiny_config(3), 20).params(),
            RefreshModel(synth::tiny_config(4), 20).params());
}

TEST(Model, AllPaddingSentenceIsBiasDriven) {
  RefreshModel model(synth::tiny_config(0), 20);
  const std::vector<TokenId> ids(10, 0);
  const nn::Array a = model.encode_sentence(ids, 0);
  const nn::Array b = model.encode_sentence(ids, 0);
  EXPECT_EQ(a, b);
  // Every window is zero, so each channel equals its bias.
  const auto& bias = model.params().get("conv.b1").value;
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(a[c], bias[c]);
}

TEST(Model, ZeroWeightsClosedForm) {
  const Fixture f = make_fixture(2);
  RefreshModel model(synth::tiny_config(0), f.vocab.size());
  zero_all(model);
  for (const auto& doc : f.docs) {
    const auto view = model.pad(doc, f.vocab);
    const nn::Array rep = model.encode_document(view);
    for (double x : rep.data()) EXPECT_EQ(x, 0.0);
    const auto scores = model.extract_scores(view);
    ASSERT_EQ(scores.size(), std::min<std::size_t>(doc.size(), 5));
    for (double p : scores.probabilities) EXPECT_EQ(p, 0.5);
  }
}

TEST(Model, ScoresInOpenUnitInterval) {
  const Fixture f = make_fixture(3, 10);
  const RefreshModel model(synth::tiny_config(1), f.vocab.size());
  for (const auto& doc : f.docs) {
    const auto scores = model.extract_scores(model.pad(doc, f.vocab));
    for (double p : scores.probabilities) {
      EXPECT_GT(p, 0.0);
      EXPECT_LT(p, 1.0);
    }
  }
}

TEST(Model, DocumentEncoderIsOrderSensitive) {
  nn::Rng rng(0);
  Document doc = synth::random_document(rng, "o", 4, 3, 8, 30, 1);
  Document swapped = doc;
  std::swap(swapped.sentences[0], swapped.sentences[3]);
  const Vocabulary vocab = build_vocabulary(std::vector<Document>{doc});
  const RefreshModel model(synth::tiny_config(0), vocab.size());
  EXPECT_NE(model.encode_document(model.pad(doc, vocab)),
            model.encode_document(model.pad(swapped, vocab)));
}

TEST(Model, SingleSentenceDocumentTakesOneStep) {
  nn::Rng rng(5);
  const Document doc = synth::random_document(rng, "one", 1, 3, 6, 20, 1);
  const Vocabulary vocab = build_vocabulary(std::vector<Document>{doc});
  const RefreshModel model(synth::tiny_config(0), vocab.size());
  const auto pass = model.forward(model.pad(doc, vocab));
  EXPECT_EQ(pass.doc_steps.size(), 1u);
  EXPECT_EQ(pass.size(), 1u);
  EXPECT_EQ(pass.scores().probabilities, model.extract_scores(model.pad(doc, vocab)).probabilities);
}

TEST(Model, PaddingContentIsIgnored) {
  const Fixture f = make_fixture(4, 8);
  const RefreshModel model(synth::tiny_config(2), f.vocab.size());
  nn::Rng rng(1);
  for (const auto& doc : f.docs) {
    const auto view = model.pad(doc, f.vocab);
    auto noisy = view;
    const auto& lim = view.limits;
    for (std::size_t r = 0; r < lim.max_doc_len; ++r) {
      const std::size_t len = r < view.sentence_count ? view.sentence_lengths[r] : 0;
      for (std::size_t pos = len; pos < lim.max_sent_len; ++pos) {
        noisy.ids[r * lim.max_sent_len + pos] = static_cast<TokenId>(1 + rng.below(f.vocab.size() - 1));
      }
    }
    EXPECT_EQ(model.extract_scores(view).probabilities, model.extract_scores(noisy).probabilities);
  }
}

TEST(Model, ForwardAndBackwardErrors) {
  RefreshModel model(synth::tiny_config(0), 10);
  PaddedDocView empty;
  empty.limits = model.config().padding();
  empty.ids.assign(50, 0);
  EXPECT_THROW(model.forward(empty), DataError);
  ForwardPass unrecorded;
  EXPECT_THROW(model.backward(unrecorded, {}), Error);
  const Fixture f = make_fixture(5, 1);
  RefreshModel m2(synth::tiny_config(0), f.vocab.size());
  const auto pass = m2.forward(m2.pad(f.docs[0], f.vocab));
  std::vector<std::array<double, 2>> wrong(pass.size() + 1);
  EXPECT_THROW(m2.backward(pass, wrong), ShapeError);
  PaddedDocView other = m2.pad(f.docs[0], f.vocab);
  other.limits.max_sent_len = 7;
  EXPECT_THROW(m2.forward(other), ShapeError);
}

TEST(Model, ScoringIsDeterministic) {
  const Fixture f = make_fixture(6);
  const RefreshModel model(synth::tiny_config(0), f.vocab.size());
  for (const auto& doc : f.docs) {
    const auto view = model.pad(doc, f.vocab);
    EXPECT_EQ(model.extract_scores(view).probabilities, model.extract_scores(view).probabilities);
  }
}

class ModelGradCheck : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ModelGradCheck, EndToEndMatchesCentralDifferences) {
  const std::uint64_t seed = GetParam();
  const Fixture f = make_fixture(100 + seed, 1, 5);
  ModelConfig cfg = synth::tiny_config(seed);
  cfg.init_range = 0.3;
  RefreshModel model(cfg, f.vocab.size());
  const auto view = model.pad(f.docs[0], f.vocab);
  nn::Rng rng(seed);
  const std::size_t n = view.sentence_count;
  std::vector<std::array<double, 2>> weights(n);
  for (auto& w : weights) w = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  auto loss = [&] {
    const auto pass = model.forward(view);
    double l = 0;
    for (std::size_t i = 0; i < n; ++i) {
      l += weights[i][0] * pass.log_probs[i][0] + weights[i][1] * pass.log_probs[i][1];
    }
    return l;
  };
  model.params().zero_grad();
  model.backward(model.forward(view), weights);
  nn::GradCheckOptions opt;
  opt.seed = seed;
  opt.max_coords_per_param = 40;
  const auto r = nn::finite_difference_check(loss, model.params(), opt);
  EXPECT_GT(r.coordinates_checked, 200u);
  EXPECT_LT(r.max_relative_error, 1e-4)
      << r.worst_parameter << "[" << r.worst_index << "] analytic " << r.worst_analytic
      << " numeric " << r.worst_numeric;
}

INSTANTIATE_TEST_SUITE_P(Seeds, ModelGradCheck, ::testing::Range<std::uint64_t>(0, 5));

TEST(Ranking, Examples) {
  EXPECT_EQ(rank_sentences(std::vector<double>{0.9, 0.1, 0.8, 0.7}),
            (std::vector<std::size_t>{0, 2, 3, 1}));
  EXPECT_EQ(rank_sentences(std::vector<double>{0.5, 0.5, 0.5}),
            (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(rank_sentences(std::vector<double>{0.1, 0.2, 0.3, 0.4}),
            (std::vector<std::size_t>{3, 2, 1, 0}));
}

TEST(Ranking, IsAPermutation) {
  nn::Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> s(1 + rng.below(20));
    for (auto& x : s) x = static_cast<double>(rng.below(4)) / 4.0;
    auto r = rank_sentences(s);
    for (std::size_t i = 1; i < r.size(); ++i) {
      EXPECT_TRUE(s[r[i - 1]] > s[r[i]] || (s[r[i - 1]] == s[r[i]] && r[i - 1] < r[i]));
    }
    std::sort(r.begin(), r.end());
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i], i);
  }
}

TEST(AssembleSummary, Examples) {
  const SentenceScores s{{0.9, 0.1, 0.8, 0.7}};
  EXPECT_EQ(assemble_summary(s, 3).indices(), (std::vector<std::size_t>{0, 2, 3}));
  EXPECT_EQ(assemble_summary(s, 1).indices(), (std::vector<std::size_t>{0}));
  EXPECT_EQ(assemble_summary(s, 9).indices(), (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_THROW(assemble_summary(s, 0), ConfigError);
  Document two;
  two.sentences.resize(2);
  EXPECT_THROW(assemble_summary(two, s, 2), DataError);
}

using testsupport::TempDir;

TEST(ModelCheckpoint, RoundTripReproducesScores) {
  TempDir dir;
  const Fixture f = make_fixture(8, 5);
  RefreshModel model(synth::tiny_config(5), f.vocab.size());
  const auto path = dir.path() / "m.ckpt";
  save_model_checkpoint(path, model, f.vocab, R"({"note":"x"})");
  const ModelCheckpoint ck = load_model_checkpoint(path);
  EXPECT_EQ(ck.config, model.config());
  EXPECT_EQ(ck.vocab, f.vocab);
  EXPECT_EQ(ck.extra_json, R"({"note":"x"})");
  const RefreshModel back(ck.config, ck.params);
  for (const auto& doc : f.docs) {
    EXPECT_EQ(back.extract_scores(back.pad(doc, ck.vocab)).probabilities,
              model.extract_scores(model.pad(doc, f.vocab)).probabilities);
  }
  const auto again = dir.path() / "again.ckpt";
  save_model_checkpoint(again, back, ck.vocab, ck.extra_json);
  std::ifstream a(path, std::ios::binary), b(again, std::ios::binary);
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}),
            std::string(std::istreambuf_iterator<char>(b), {}));
}

TEST(ModelCheckpoint, CorruptedFileIsRejected) {
  TempDir dir;
  const Fixture f = make_fixture(9, 1);
  const RefreshModel model(synth::tiny_config(0), f.vocab.size());
  const auto path = dir.path() / "m.ckpt";
  save_model_checkpoint(path, model, f.vocab);
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  bytes[30] = static_cast<char>(bytes[30] ^ 0x11);  // inside the manifest
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes;
  }
  EXPECT_THROW(load_model_checkpoint(path), CheckpointError);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << bytes.substr(0, 100);
  }
  EXPECT_THROW(load_model_checkpoint(path), CheckpointError);
}

TEST(ModelCheckpoint, ParametersMustMatchConfig) {
  const RefreshModel model(synth::tiny_config(0), 12);
  ModelConfig other = synth::tiny_config(0);
  other.lstm_size = 8;
  EXPECT_THROW(RefreshModel(other, model.params()), ShapeError);
}

TEST(Embeddings, LoadedRowsReplaceRandomInit) {
  const Fixture f = make_fixture(10, 1);
  RefreshModel model(synth::tiny_config(0), f.vocab.size());
  EmbeddingTable t;
  t.rows = f.vocab.size();
  t.dim = 8;
  t.values.assign(t.rows * t.dim, 0.25);
  t.found.assign(t.rows, false);
  t.found[2] = true;
  const auto before = model.params().get("embedding").value;
  model.load_embeddings(t);
  const auto& after = model.params().get("embedding").value;
  for (std::size_t d = 0; d < 8; ++d) {
    EXPECT_EQ(after.at(2, d), 0.25);
    EXPECT_EQ(after.at(3, d), before.at(3, d));
    EXPECT_EQ(after.at(0, d), 0.0);
  }
}

}  // namespace
}  // namespace refresh
