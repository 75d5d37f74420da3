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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "refresh/nn/array.hpp"

// Differentiable primitives. Each forward function is pure; each backward
// function accumulates (+=) parameter gradients into the arrays it is given
// and returns or accumulates the gradient with respect to its input.
namespace refresh::nn {

// Rows of `table` (vocab x dim) for each id, stacked into (ids.size() + pad_rows)
// x dim; the trailing pad_rows rows are zero.
Array embedding_lookup(const Array& table, std::span<const std::uint32_t> ids,
                       std::size_t pad_rows = 0);
// Scatters the first ids.size() rows of `dout` into the gradient table.
void embedding_backward(std::span<const std::uint32_t> ids, const Array& dout, Array& dtable);

// Temporal narrow convolution: filters (channels x width x dim), bias
// (channels). Input (len x dim) with len >= width; output
// ((len - width + 1) x channels).
struct ConvFilterBank {
  Array filters;
  Array bias;

  std::size_t channels() const { return filters.dim(0); }
  std::size_t width() const { return filters.dim(1); }
  std::size_t input_dim() const { return filters.dim(2); }
};

Array conv1d_forward(const Array& input, const Array& filters, const Array& bias);
inline Array conv1d_forward(const Array& input, const ConvFilterBank& bank) {
  return conv1d_forward(input, bank.filters, bank.bias);
}
// `dinput` may be null when the input gradient is not needed.
void conv1d_backward(const Array& input, const Array& filters, const Array& dout,
                     Array& dfilters, Array& dbias, Array* dinput);

struct MaxPoolResult {
  Array values;                     // (channels)
  std::vector<std::size_t> argmax;  // first index attaining the maximum
  std::size_t steps = 0;
};

// Per-channel maximum over time of a (T x channels) map; T must be >= 1.
MaxPoolResult maxpool_time(const Array& feature_map);
// Routes each channel's gradient to its argmax row only.
void maxpool_backward(const MaxPoolResult& pooled, const Array& dvalues,
                      Array& dfeature_map);

struct LstmState {
  Array h;
  Array c;

  static LstmState zeros(std::size_t hidden);
};

// Everything lstm_step_backward needs. Gate order in `gates` and in the
// weight rows: input, forget, output (logistic), candidate (tanh).
struct LstmStepCache {
  Array input;
  LstmState prev;
  Array gates;  // activated, 4 * hidden
  LstmState next;
  Array tanh_c;
};

struct LstmStepGrads {
  Array dx;
  LstmState dprev;
};

// weights: (4H x (input_dim + H)) applied to [x; h_prev]; bias: (4H).
LstmStepCache lstm_step(const Array& x, const LstmState& prev, const Array& weights,
                        const Array& bias);
LstmStepGrads lstm_step_backward(const LstmStepCache& cache, const Array& weights,
                                 const Array& dh, const Array& dc, Array& dweights,
                                 Array& dbias);

// y = W x + b with W (out x in).
Array dense_forward(const Array& x, const Array& weights, const Array& bias);
Array dense_backward(const Array& x, const Array& weights, const Array& dy,
                     Array& dweights, Array& dbias);

Array softmax(const Array& logits);
Array log_softmax(const Array& logits);
// Gradient w.r.t. logits given the gradient w.r.t. log_softmax outputs.
Array log_softmax_backward(const Array& log_probs, const Array& dlog_probs);

// softmax(W x + b).
Array dense_softmax(const Array& x, const Array& weights, const Array& bias);

// -log p(label).
double cross_entropy(const Array& log_probs, std::size_t label);

double sigmoid(double x);

}  // namespace refresh::nn
