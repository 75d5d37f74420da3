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

#include "refresh/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "refresh/error.hpp"
#include "refresh/nn/random.hpp"

namespace refresh {

using nn::Array;

std::size_t ModelConfig::max_kernel_width() const {
  return kernel_widths.empty() ? 0
                               : *std::max_element(kernel_widths.begin(), kernel_widths.end());
}

void ModelConfig::validate() const {
  if (embedding_dim == 0) throw ConfigError("embedding_dim must be >= 1");
  if (channels_per_kernel == 0) throw ConfigError("channels_per_kernel must be >= 1");
  if (lstm_size == 0) throw ConfigError("lstm_size must be >= 1");
  if (kernel_widths.empty()) throw ConfigError("kernel_widths must not be empty");
  if (std::set(kernel_widths.begin(), kernel_widths.end()).size() != kernel_widths.size()) {
    throw ConfigError("kernel_widths must be distinct");
  }
  if (!std::is_sorted(kernel_widths.begin(), kernel_widths.end())) {
    throw ConfigError("kernel_widths must be ascending");
  }
  if (kernel_widths.front() == 0) throw ConfigError("kernel widths must be >= 1");
  if (max_sent_len < max_kernel_width()) {
    throw ConfigError("max_sent_len must be at least the widest kernel");
  }
  if (max_doc_len == 0) throw ConfigError("max_doc_len must be >= 1");
  if (m_select == 0) throw ConfigError("m_select must be >= 1");
  if (!(init_range >= 0.0) || !std::isfinite(init_range)) {
    throw ConfigError("init_range must be finite and >= 0");
  }
  if (!std::isfinite(forget_bias)) throw ConfigError("forget_bias must be finite");
}

namespace {

std::string conv_name(const char* kind, std::size_t width) {
  return std::string("conv.") + kind + std::to_string(width);
}

void add_dot(std::span<double> dst, std::span<const double> src, double scale) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += scale * src[k];
}

}  // namespace

RefreshModel::RefreshModel(ModelConfig config, std::size_t vocab_size)
    : config_(std::move(config)) {
  config_.validate();
  if (vocab_size < 2) throw ConfigError("vocabulary must contain the reserved entries");
  const std::size_t E = config_.embedding_dim, C = config_.channels_per_kernel;
  const std::size_t S = config_.sentence_embedding_dim(), H = config_.lstm_size;
  nn::Rng rng(config_.seed);
  const double r = config_.init_range;
  auto init = [&](std::vector<std::size_t> shape) {
    Array a(std::move(shape));
    for (double& v : a.data()) v = rng.uniform(-r, r);
    return a;
  };
  params_.add("embedding", init({vocab_size, E}));
  for (std::size_t h : config_.kernel_widths) {
    params_.add(conv_name("w", h), init({C, h, E}));
    params_.add(conv_name("b", h), init({C}));
  }
  params_.add("doc_lstm.W", init({4 * H, S + H}));
  params_.add("doc_lstm.b", init({4 * H}));
  params_.add("ext_lstm.W", init({4 * H, 2 * S + H}));
  params_.add("ext_lstm.b", init({4 * H}));
  params_.add("out.W", init({2, H}));
  params_.add("out.b", init({2}));

  auto& emb = params_.get("embedding");
  std::fill(emb.value.row(Vocabulary::kPadId).begin(), emb.value.row(Vocabulary::kPadId).end(),
            0.0);
  emb.frozen_rows = 1;
  for (const char* name : {"doc_lstm.b", "ext_lstm.b"}) {
    auto& b = params_.get(name).value;
    for (std::size_t j = H; j < 2 * H; ++j) b[j] = config_.forget_bias;
  }
  resolve_ids();
}

RefreshModel::RefreshModel(ModelConfig config, nn::ParameterStore params)
    : config_(std::move(config)), params_(std::move(params)) {
  config_.validate();
  resolve_ids();
}

void RefreshModel::resolve_ids() {
  const std::size_t E = config_.embedding_dim, C = config_.channels_per_kernel;
  const std::size_t S = config_.sentence_embedding_dim(), H = config_.lstm_size;
  auto find = [&](const std::string& name, std::vector<std::size_t> shape) {
    for (nn::ParamId id = 0; id < params_.size(); ++id) {
      if (params_[id].name != name) continue;
      if (params_[id].value.shape() != shape && !(name == "embedding" &&
                                                   params_[id].value.rank() == 2 &&
                                                   params_[id].value.dim(1) == E)) {
        throw ShapeError("parameter " + name + " does not match the model config");
      }
      return id;
    }
    throw ShapeError("missing parameter " + name);
  };
  std::size_t expected = 0;
  ids_ = {};
  ids_.embedding = find("embedding", {0, E});
  ++expected;
  if (vocab_size() < 2) throw ShapeError("embedding has fewer than two rows");
  for (std::size_t h : config_.kernel_widths) {
    ids_.conv_w.push_back(find(conv_name("w", h), {C, h, E}));
    ids_.conv_b.push_back(find(conv_name("b", h), {C}));
    expected += 2;
  }
  ids_.doc_w = find("doc_lstm.W", {4 * H, S + H});
  ids_.doc_b = find("doc_lstm.b", {4 * H});
  ids_.ext_w = find("ext_lstm.W", {4 * H, 2 * S + H});
  ids_.ext_b = find("ext_lstm.b", {4 * H});
  ids_.out_w = find("out.W", {2, H});
  ids_.out_b = find("out.b", {2});
  expected += 6;
  if (params_.size() != expected) throw ShapeError("unexpected extra parameters");
}

std::size_t RefreshModel::vocab_size() const { return params_[ids_.embedding].value.dim(0); }

void RefreshModel::load_embeddings(const EmbeddingTable& table) {
  auto& emb = params_[ids_.embedding];
  if (table.rows != emb.value.dim(0) || table.dim != emb.value.dim(1)) {
    throw ShapeError("embedding table does not match the model's vocabulary/dimension");
  }
  for (std::size_t r = 0; r < table.rows; ++r) {
    if (r == Vocabulary::kPadId || !table.found[r]) continue;
    std::copy(table.row(r).begin(), table.row(r).end(), emb.value.row(r).begin());
  }
}

Array RefreshModel::encode_sentence(std::span<const TokenId> ids, std::size_t length) const {
  return encode_sentence(ids, length, nullptr);
}

Array RefreshModel::encode_sentence(std::span<const TokenId> ids, std::size_t length,
                                    ForwardPass::SentenceTrace* trace) const {
  const std::size_t L = config_.max_sent_len;
  const std::size_t eff = std::min({length, L, ids.size()});
  // Windows lying wholly in the padding all produce the bias, so one such
  // window stands in for all of them; the first maximum is unchanged.
  const std::size_t rows = std::min(L, eff + config_.max_kernel_width());
  const auto effective = ids.first(eff);
  Array input = nn::embedding_lookup(params_[ids_.embedding].value, effective, rows - eff);
  const std::size_t C = config_.channels_per_kernel;
  Array s({config_.sentence_embedding_dim()});
  if (trace) {
    trace->ids.assign(effective.begin(), effective.end());
    trace->pooled.clear();
  }
  for (std::size_t w = 0; w < config_.kernel_widths.size(); ++w) {
    const Array fm = nn::conv1d_forward(input, params_[ids_.conv_w[w]].value,
                                        params_[ids_.conv_b[w]].value);
    nn::MaxPoolResult pooled = nn::maxpool_time(fm);
    std::copy(pooled.values.data().begin(), pooled.values.data().end(),
              s.data().begin() + static_cast<std::ptrdiff_t>(w * C));
    if (trace) trace->pooled.push_back(std::move(pooled));
  }
  if (trace) trace->input = std::move(input);
  return s;
}

ForwardPass RefreshModel::forward(const PaddedDocView& doc) const {
  const std::size_t n = std::min(doc.sentence_count, config_.max_doc_len);
  if (n == 0) throw DataError("cannot score a document with no sentences");
  if (doc.limits.max_sent_len != config_.max_sent_len ||
      doc.sentence_lengths.size() < n) {
    throw ShapeError("padded document does not match the model's padding limits");
  }
  const std::size_t S = config_.sentence_embedding_dim(), H = config_.lstm_size;
  ForwardPass pass;
  pass.sentences.resize(n);
  pass.embeddings.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pass.embeddings.push_back(
        encode_sentence(doc.row(i), doc.sentence_lengths[i], &pass.sentences[i]));
  }

  const Array& doc_w = params_[ids_.doc_w].value;
  const Array& doc_b = params_[ids_.doc_b].value;
  nn::LstmState state = nn::LstmState::zeros(H);
  pass.doc_steps.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    pass.doc_steps.push_back(nn::lstm_step(pass.embeddings[n - 1 - t], state, doc_w, doc_b));
    state = pass.doc_steps.back().next;
  }

  const Array& ext_w = params_[ids_.ext_w].value;
  const Array& ext_b = params_[ids_.ext_b].value;
  const Array& out_w = params_[ids_.out_w].value;
  const Array& out_b = params_[ids_.out_b].value;
  state.c = state.h;
  pass.extract_steps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Array x({2 * S});
    std::copy(pass.embeddings[i].data().begin(), pass.embeddings[i].data().end(),
              x.data().begin());
    if (i > 0) {
      const double prev_p = pass.p[i - 1];
      const auto prev = pass.embeddings[i - 1].data();
      for (std::size_t k = 0; k < S; ++k) x[S + k] = prev_p * prev[k];
    }
    pass.extract_steps.push_back(nn::lstm_step(x, state, ext_w, ext_b));
    state = pass.extract_steps.back().next;
    pass.log_probs.push_back(nn::log_softmax(nn::dense_forward(state.h, out_w, out_b)));
    pass.p.push_back(std::exp(pass.log_probs.back()[1]));
  }
  pass.recorded = true;
  return pass;
}

void RefreshModel::backward(const ForwardPass& pass,
                            std::span<const std::array<double, 2>> dlog_probs) {
  if (!pass.recorded) throw Error("backward called without a recorded forward pass");
  const std::size_t n = pass.size();
  if (dlog_probs.size() != n) throw ShapeError("backward: one gradient pair per sentence");
  const std::size_t S = config_.sentence_embedding_dim(), H = config_.lstm_size;
  const std::size_t C = config_.channels_per_kernel;

  std::vector<Array> ds(n, Array({S}));
  std::vector<double> dp(n, 0.0);  // d loss / d p_i through the next step's input

  // Extractor, last step first.
  auto& out_w = params_[ids_.out_w];
  auto& out_b = params_[ids_.out_b];
  auto& ext_w = params_[ids_.ext_w];
  auto& ext_b = params_[ids_.ext_b];
  Array dh_next({H}), dc_next({H});
  for (std::size_t i = n; i-- > 0;) {
    const nn::LstmStepCache& step = pass.extract_steps[i];
    Array dlogp = Array::vector({dlog_probs[i][0], dlog_probs[i][1]});
    dlogp[1] += dp[i] * pass.p[i];
    const Array dlogits = nn::log_softmax_backward(pass.log_probs[i], dlogp);
    Array dh = nn::dense_backward(step.next.h, out_w.value, dlogits, out_w.grad, out_b.grad);
    dh += dh_next;
    nn::LstmStepGrads g =
        nn::lstm_step_backward(step, ext_w.value, dh, dc_next, ext_w.grad, ext_b.grad);
    const auto dx = g.dx.data();
    add_dot(ds[i].data(), dx.first(S), 1.0);
    if (i > 0) {
      const auto prev = pass.embeddings[i - 1].data();
      add_dot(ds[i - 1].data(), dx.subspan(S, S), pass.p[i - 1]);
      double dot = 0.0;
      for (std::size_t k = 0; k < S; ++k) dot += dx[S + k] * prev[k];
      dp[i - 1] += dot;
    }
    dh_next = std::move(g.dprev.h);
    dc_next = std::move(g.dprev.c);
  }

  // The extractor's initial (h, c) are both the document representation.
  Array ddoc = dh_next;
  ddoc += dc_next;

  auto& doc_w = params_[ids_.doc_w];
  auto& doc_b = params_[ids_.doc_b];
  Array dc({H});
  for (std::size_t t = n; t-- > 0;) {
    nn::LstmStepGrads g =
        nn::lstm_step_backward(pass.doc_steps[t], doc_w.value, ddoc, dc, doc_w.grad, doc_b.grad);
    ds[n - 1 - t] += g.dx;
    ddoc = std::move(g.dprev.h);
    dc = std::move(g.dprev.c);
  }

  // Sentence encoder.
  auto& emb = params_[ids_.embedding];
  for (std::size_t i = 0; i < n; ++i) {
    const auto& trace = pass.sentences[i];
    Array dinput = Array::zeros_like(trace.input);
    for (std::size_t w = 0; w < config_.kernel_widths.size(); ++w) {
      auto& fw = params_[ids_.conv_w[w]];
      auto& fb = params_[ids_.conv_b[w]];
      const nn::MaxPoolResult& pooled = trace.pooled[w];
      Array dvalues({C});
      std::copy_n(ds[i].data().begin() + static_cast<std::ptrdiff_t>(w * C), C,
                  dvalues.data().begin());
      Array dfm({pooled.steps, C});
      nn::maxpool_backward(pooled, dvalues, dfm);
      nn::conv1d_backward(trace.input, fw.value, dfm, fw.grad, fb.grad, &dinput);
    }
    nn::embedding_backward(trace.ids, dinput, emb.grad);
  }
}

Array RefreshModel::encode_document(const PaddedDocView& doc) const {
  return forward(doc).document_representation();
}

SentenceScores RefreshModel::extract_scores(const PaddedDocView& doc) const {
  return forward(doc).scores();
}

std::vector<std::size_t> rank_sentences(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

oracle::Extract assemble_summary(const SentenceScores& scores, std::size_t m) {
  if (m == 0) throw ConfigError("summary length m must be >= 1");
  if (scores.size() == 0) throw ConfigError("cannot assemble a summary from no scores");
  auto order = rank_sentences(scores);
  order.resize(std::min(m, order.size()));
  return oracle::Extract(std::move(order));
}

oracle::Extract assemble_summary(const Document& doc, const SentenceScores& scores,
                                 std::size_t m) {
  if (scores.size() > doc.size()) {
    throw DataError("document " + doc.id + " has fewer sentences than scores");
  }
  return assemble_summary(scores, m);
}

}  // namespace refresh
