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

#include "toy_networks.hpp"

#include "refresh/nn/array.hpp"
#include "refresh/nn/layers.hpp"
#include "refresh/nn/random.hpp"

namespace toys {
namespace {

using namespace refresh::nn;

Array random_array(Rng& rng, std::vector<std::size_t> shape, double range = 1.0) {
  Array a(std::move(shape));
  for (auto& x : a.data()) x = rng.uniform(-range, range);
  return a;
}

double head_loss(const Array& features, const Array& w, const Array& b, std::size_t label,
                 Array* dfeatures, Array* dw, Array* db) {
  const Array logp = log_softmax(dense_forward(features, w, b));
  if (dfeatures) {
    Array dlogp({2});
    dlogp[label] = -1.0;
    const Array dlogits = log_softmax_backward(logp, dlogp);
    *dfeatures = dense_backward(features, w, dlogits, *dw, *db);
  }
  return cross_entropy(logp, label);
}

}  // namespace

void run_dense(Toy& toy, std::uint64_t seed) {
  Rng rng(seed);
  toy.params = ParameterStore();
  toy.params.add("w", random_array(rng, {2, 4}));
  toy.params.add("b", random_array(rng, {2}));
  toy.params.add("x", random_array(rng, {4}));
  auto& ps = toy.params;
  toy.loss = [&ps] { return head_loss(ps[2].value, ps[0].value, ps[1].value, 1, nullptr, nullptr, nullptr); };
  toy.backward = [&ps] {
    Array dx;
    head_loss(ps[2].value, ps[0].value, ps[1].value, 1, &dx, &ps[0].grad, &ps[1].grad);
    ps[2].grad += dx;
  };
}

void run_conv(Toy& toy, std::uint64_t seed) {
  Rng rng(seed);
  toy.params = ParameterStore();
  toy.params.add("input", random_array(rng, {6, 3}));
  toy.params.add("filters", random_array(rng, {4, 2, 3}));
  toy.params.add("conv_b", random_array(rng, {4}));
  toy.params.add("w", random_array(rng, {2, 4}));
  toy.params.add("b", random_array(rng, {2}));
  auto& ps = toy.params;
  toy.loss = [&ps] {
    const auto pooled = maxpool_time(conv1d_forward(ps[0].value, ps[1].value, ps[2].value));
    return head_loss(pooled.values, ps[3].value, ps[4].value, 0, nullptr, nullptr, nullptr);
  };
  toy.backward = [&ps] {
    const Array map = conv1d_forward(ps[0].value, ps[1].value, ps[2].value);
    const auto pooled = maxpool_time(map);
    Array dpooled;
    head_loss(pooled.values, ps[3].value, ps[4].value, 0, &dpooled, &ps[3].grad, &ps[4].grad);
    Array dmap = Array::zeros_like(map);
    maxpool_backward(pooled, dpooled, dmap);
    conv1d_backward(ps[0].value, ps[1].value, dmap, ps[1].grad, ps[2].grad, &ps[0].grad);
  };
}

void run_lstm(Toy& toy, std::uint64_t seed) {
  constexpr std::size_t kIn = 3, kH = 4, kSteps = 3;
  Rng rng(seed);
  toy.params = ParameterStore();
  toy.params.add("xs", random_array(rng, {kSteps, kIn}));
  toy.params.add("W", random_array(rng, {4 * kH, kIn + kH}, 0.5));
  toy.params.add("lstm_b", random_array(rng, {4 * kH}, 0.5));
  toy.params.add("h0", random_array(rng, {kH}));
  toy.params.add("c0", random_array(rng, {kH}));
  toy.params.add("w", random_array(rng, {2, kH}));
  toy.params.add("b", random_array(rng, {2}));
  auto& ps = toy.params;
  auto input = [&ps](std::size_t t) {
    const auto r = ps[0].value.row(t);
    return Array::vector(std::vector<double>(r.begin(), r.end()));
  };
  toy.loss = [&ps, input] {
    LstmState s{ps[3].value, ps[4].value};
    for (std::size_t t = 0; t < kSteps; ++t) s = lstm_step(input(t), s, ps[1].value, ps[2].value).next;
    return head_loss(s.h, ps[5].value, ps[6].value, 1, nullptr, nullptr, nullptr);
  };
  toy.backward = [&ps, input] {
    std::vector<LstmStepCache> caches;
    LstmState s{ps[3].value, ps[4].value};
    for (std::size_t t = 0; t < kSteps; ++t) {
      caches.push_back(lstm_step(input(t), s, ps[1].value, ps[2].value));
      s = caches.back().next;
    }
    Array dh;
    head_loss(s.h, ps[5].value, ps[6].value, 1, &dh, &ps[5].grad, &ps[6].grad);
    Array dc({kH});
    for (std::size_t t = kSteps; t-- > 0;) {
      const auto g = lstm_step_backward(caches[t], ps[1].value, dh, dc, ps[1].grad, ps[2].grad);
      for (std::size_t d = 0; d < kIn; ++d) ps[0].grad.at(t, d) += g.dx[d];
      dh = g.dprev.h;
      dc = g.dprev.c;
    }
    ps[3].grad += dh;
    ps[4].grad += dc;
  };
}

void run_embedding(Toy& toy, std::uint64_t seed) {
  Rng rng(seed);
  toy.params = ParameterStore();
  toy.params.add("table", random_array(rng, {5, 3}));
  toy.params[0].frozen_rows = 1;
  toy.params.add("filters", random_array(rng, {2, 2, 3}));
  toy.params.add("conv_b", random_array(rng, {2}));
  toy.params.add("w", random_array(rng, {2, 2}));
  toy.params.add("b", random_array(rng, {2}));
  static const std::vector<std::uint32_t> ids{3, 1, 4, 1};
  auto& ps = toy.params;
  toy.loss = [&ps] {
    const Array e = embedding_lookup(ps[0].value, ids, 1);
    const auto pooled = maxpool_time(conv1d_forward(e, ps[1].value, ps[2].value));
    return head_loss(pooled.values, ps[3].value, ps[4].value, 1, nullptr, nullptr, nullptr);
  };
  toy.backward = [&ps] {
    const Array e = embedding_lookup(ps[0].value, ids, 1);
    const Array map = conv1d_forward(e, ps[1].value, ps[2].value);
    const auto pooled = maxpool_time(map);
    Array dpooled;
    head_loss(pooled.values, ps[3].value, ps[4].value, 1, &dpooled, &ps[3].grad, &ps[4].grad);
    Array dmap = Array::zeros_like(map);
    maxpool_backward(pooled, dpooled, dmap);
    Array de = Array::zeros_like(e);
    conv1d_backward(e, ps[1].value, dmap, ps[1].grad, ps[2].grad, &de);
    embedding_backward(ids, de, ps[0].grad);
  };
}

}  // namespace toys
