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

#include "refresh/nn/adam.hpp"

#include <cmath>

namespace refresh::nn {

void adam_update(Parameter& param, const AdamConfig& config) {
  ++param.step_count;
  const double t = static_cast<double>(param.step_count);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  auto value = param.value.data();
  auto grad = param.grad.data();
  auto m = param.adam_m.data();
  auto v = param.adam_v.data();
  const std::size_t first = param.frozen_rows * param.row_size();
  for (std::size_t i = first; i < value.size(); ++i) {
    const double g = grad[i];
    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
    const double m_hat = m[i] / correction1;
    const double v_hat = v[i] / correction2;
    value[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
  param.zero_grad();
}

void adam_update(ParameterStore& params, const AdamConfig& config) {
  for (auto& p : params) adam_update(p, config);
}

}  // namespace refresh::nn
