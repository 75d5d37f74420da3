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

#include "refresh/nn/layers.hpp"

#include <algorithm>
#include <cmath>

#include "refresh/error.hpp"

namespace refresh::nn {

Array embedding_lookup(const Array& table, std::span<const std::uint32_t> ids,
                       std::size_t pad_rows) {
  require_shape(table.rank() == 2, "embedding_lookup: expected a (vocab x dim) table");
  const std::size_t dim = table.dim(1);
  Array out({ids.size() + pad_rows, dim});
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= table.dim(0)) throw ShapeError("embedding_lookup: token id out of range");
    std::copy_n(table.row(ids[r]).begin(), dim, out.row(r).begin());
  }
  return out;
}

void embedding_backward(std::span<const std::uint32_t> ids, const Array& dout, Array& dtable) {
  require_shape(dtable.rank() == 2 && dout.rank() == 2 && dout.dim(1) == dtable.dim(1) &&
                    dout.dim(0) >= ids.size(),
                "embedding_backward: gradient shapes do not match");
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= dtable.dim(0)) throw ShapeError("embedding_backward: token id out of range");
    auto dst = dtable.row(ids[r]);
    const auto src = dout.row(r);
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] += src[k];
  }
}

Array conv1d_forward(const Array& input, const Array& filters, const Array& bias) {
  require_shape(input.rank() == 2 && filters.rank() == 3 && bias.rank() == 1,
                "conv1d: expected input (len x dim), filters (c x h x dim), bias (c)");
  const std::size_t len = input.dim(0), dim = input.dim(1);
  const std::size_t channels = filters.dim(0), width = filters.dim(1);
  require_shape(filters.dim(2) == dim && bias.dim(0) == channels && width >= 1,
                "conv1d: filter bank does not match the input");
  if (len < width) throw ShapeError("conv1d: input shorter than kernel width");
  const std::size_t steps = len - width + 1;
  const std::size_t window = width * dim;
  Array out({steps, channels});
  const auto x = input.data();
  const auto f = filters.data();
  for (std::size_t t = 0; t < steps; ++t) {
    const double* xw = x.data() + t * dim;  // window rows are contiguous
    for (std::size_t c = 0; c < channels; ++c) {
      const double* fc = f.data() + c * window;
      double acc = bias[c];
      for (std::size_t k = 0; k < window; ++k) acc += fc[k] * xw[k];
      out.at(t, c) = acc;
    }
  }
  return out;
}

void conv1d_backward(const Array& input, const Array& filters, const Array& dout,
                     Array& dfilters, Array& dbias, Array* dinput) {
  const std::size_t dim = input.dim(1);
  const std::size_t channels = filters.dim(0), width = filters.dim(1);
  const std::size_t steps = dout.dim(0);
  const std::size_t window = width * dim;
  require_shape(dfilters.same_shape(filters) && dbias.size() == channels &&
                    dout.dim(1) == channels && steps + width - 1 == input.dim(0),
                "conv1d_backward: gradient shapes do not match");
  if (dinput) require_shape(dinput->same_shape(input), "conv1d_backward: dinput shape");
  const auto x = input.data();
  const auto f = filters.data();
  auto df = dfilters.data();
  for (std::size_t t = 0; t < steps; ++t) {
    const double* xw = x.data() + t * dim;
    for (std::size_t c = 0; c < channels; ++c) {
      const double g = dout.at(t, c);
      if (g == 0.0) continue;
      dbias[c] += g;
      double* dfc = df.data() + c * window;
      for (std::size_t k = 0; k < window; ++k) dfc[k] += g * xw[k];
      if (dinput) {
        double* dxw = dinput->data().data() + t * dim;
        const double* fc = f.data() + c * window;
        for (std::size_t k = 0; k < window; ++k) dxw[k] += g * fc[k];
      }
    }
  }
}

MaxPoolResult maxpool_time(const Array& feature_map) {
  require_shape(feature_map.rank() == 2, "maxpool_time: expected a (T x channels) map");
  const std::size_t steps = feature_map.dim(0), channels = feature_map.dim(1);
  if (steps == 0) throw ShapeError("maxpool_time: empty feature map");
  MaxPoolResult out{Array({channels}), std::vector<std::size_t>(channels, 0), steps};
  for (std::size_t c = 0; c < channels; ++c) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < steps; ++t) {
      if (feature_map.at(t, c) > feature_map.at(best, c)) best = t;
    }
    out.argmax[c] = best;
    out.values[c] = feature_map.at(best, c);
  }
  return out;
}

void maxpool_backward(const MaxPoolResult& pooled, const Array& dvalues, Array& dfeature_map) {
  const std::size_t channels = pooled.argmax.size();
  require_shape(dvalues.size() == channels && dfeature_map.rank() == 2 &&
                    dfeature_map.dim(0) == pooled.steps && dfeature_map.dim(1) == channels,
                "maxpool_backward: gradient shapes do not match");
  for (std::size_t c = 0; c < channels; ++c) {
    dfeature_map.at(pooled.argmax[c], c) += dvalues[c];
  }
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LstmState LstmState::zeros(std::size_t hidden) { return {Array({hidden}), Array({hidden})}; }

LstmStepCache lstm_step(const Array& x, const LstmState& prev, const Array& weights,
                        const Array& bias) {
  const std::size_t hidden = prev.h.size();
  const std::size_t in = x.size();
  require_shape(prev.c.size() == hidden && weights.rank() == 2 &&
                    weights.dim(0) == 4 * hidden && weights.dim(1) == in + hidden &&
                    bias.size() == 4 * hidden,
                "lstm_step: weights do not match input/state dimensions");
  LstmStepCache cache;
  cache.input = x;
  cache.prev = prev;
  cache.gates = Array({4 * hidden});
  const std::size_t cols = in + hidden;
  const auto w = weights.data();
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    const double* wr = w.data() + r * cols;
    double acc = bias[r];
    for (std::size_t k = 0; k < in; ++k) acc += wr[k] * x[k];
    for (std::size_t k = 0; k < hidden; ++k) acc += wr[in + k] * prev.h[k];
    cache.gates[r] = r < 3 * hidden ? sigmoid(acc) : std::tanh(acc);
  }
  cache.next = LstmState::zeros(hidden);
  cache.tanh_c = Array({hidden});
  for (std::size_t j = 0; j < hidden; ++j) {
    const double i = cache.gates[j], f = cache.gates[hidden + j];
    const double o = cache.gates[2 * hidden + j], g = cache.gates[3 * hidden + j];
    cache.next.c[j] = f * prev.c[j] + i * g;
    cache.tanh_c[j] = std::tanh(cache.next.c[j]);
    cache.next.h[j] = o * cache.tanh_c[j];
  }
  return cache;
}

LstmStepGrads lstm_step_backward(const LstmStepCache& cache, const Array& weights,
                                 const Array& dh, const Array& dc, Array& dweights,
                                 Array& dbias) {
  const std::size_t hidden = cache.prev.h.size();
  const std::size_t in = cache.input.size();
  const std::size_t cols = in + hidden;
  require_shape(dh.size() == hidden && dc.size() == hidden &&
                    dweights.same_shape(weights) && dbias.size() == 4 * hidden,
                "lstm_step_backward: gradient shapes do not match");
  // Gradient w.r.t. gate pre-activations.
  Array dpre({4 * hidden});
  LstmStepGrads out{Array({in}), LstmState::zeros(hidden)};
  for (std::size_t j = 0; j < hidden; ++j) {
    const double i = cache.gates[j], f = cache.gates[hidden + j];
    const double o = cache.gates[2 * hidden + j], g = cache.gates[3 * hidden + j];
    const double tc = cache.tanh_c[j];
    const double dct = dc[j] + dh[j] * o * (1.0 - tc * tc);
    dpre[j] = dct * g * i * (1.0 - i);
    dpre[hidden + j] = dct * cache.prev.c[j] * f * (1.0 - f);
    dpre[2 * hidden + j] = dh[j] * tc * o * (1.0 - o);
    dpre[3 * hidden + j] = dct * i * (1.0 - g * g);
    out.dprev.c[j] = dct * f;
  }
  const auto w = weights.data();
  auto dw = dweights.data();
  for (std::size_t r = 0; r < 4 * hidden; ++r) {
    const double d = dpre[r];
    if (d == 0.0) continue;
    dbias[r] += d;
    const double* wr = w.data() + r * cols;
    double* dwr = dw.data() + r * cols;
    for (std::size_t k = 0; k < in; ++k) {
      dwr[k] += d * cache.input[k];
      out.dx[k] += d * wr[k];
    }
    for (std::size_t k = 0; k < hidden; ++k) {
      dwr[in + k] += d * cache.prev.h[k];
      out.dprev.h[k] += d * wr[in + k];
    }
  }
  return out;
}

Array dense_forward(const Array& x, const Array& weights, const Array& bias) {
  require_shape(weights.rank() == 2 && weights.dim(1) == x.size() &&
                    bias.size() == weights.dim(0),
                "dense: weights do not match input/bias");
  const std::size_t out_dim = weights.dim(0), in = x.size();
  Array y({out_dim});
  for (std::size_t r = 0; r < out_dim; ++r) {
    double acc = bias[r];
    for (std::size_t k = 0; k < in; ++k) acc += weights.at(r, k) * x[k];
    y[r] = acc;
  }
  return y;
}

Array dense_backward(const Array& x, const Array& weights, const Array& dy, Array& dweights,
                     Array& dbias) {
  const std::size_t out_dim = weights.dim(0), in = x.size();
  require_shape(dy.size() == out_dim && dweights.same_shape(weights) && dbias.size() == out_dim,
                "dense_backward: gradient shapes do not match");
  Array dx({in});
  for (std::size_t r = 0; r < out_dim; ++r) {
    const double d = dy[r];
    dbias[r] += d;
    for (std::size_t k = 0; k < in; ++k) {
      dweights.at(r, k) += d * x[k];
      dx[k] += d * weights.at(r, k);
    }
  }
  return dx;
}

Array log_softmax(const Array& logits) {
  require_shape(logits.size() > 0, "log_softmax: empty input");
  const double mx = *std::max_element(logits.data().begin(), logits.data().end());
  double sum = 0.0;
  for (double v : logits.data()) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  Array out(logits.shape());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

Array softmax(const Array& logits) {
  Array out = log_softmax(logits);
  for (double& v : out.data()) v = std::exp(v);
  return out;
}

Array log_softmax_backward(const Array& log_probs, const Array& dlog_probs) {
  require_shape(log_probs.same_shape(dlog_probs), "log_softmax_backward: shape mismatch");
  double total = 0.0;
  for (double g : dlog_probs.data()) total += g;
  Array dlogits(log_probs.shape());
  for (std::size_t i = 0; i < log_probs.size(); ++i) {
    dlogits[i] = dlog_probs[i] - std::exp(log_probs[i]) * total;
  }
  return dlogits;
}

Array dense_softmax(const Array& x, const Array& weights, const Array& bias) {
  return softmax(dense_forward(x, weights, bias));
}

double cross_entropy(const Array& log_probs, std::size_t label) {
  require_shape(label < log_probs.size(), "cross_entropy: label out of range");
  return -log_probs[label];
}

}  // namespace refresh::nn
