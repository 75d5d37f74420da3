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

#include "refresh/nn/parameter.hpp"

#include <algorithm>
#include <cmath>

#include "refresh/error.hpp"

namespace refresh::nn {

Parameter::Parameter(std::string n, Array v)
    : name(std::move(n)),
      value(std::move(v)),
      grad(Array::zeros_like(value)),
      adam_m(Array::zeros_like(value)),
      adam_v(Array::zeros_like(value)) {}

std::size_t Parameter::row_size() const {
  if (value.rank() == 0 || value.dim(0) == 0) return 0;
  return value.size() / value.dim(0);
}

ParamId ParameterStore::add(std::string name, Array value) {
  if (contains(name)) throw ShapeError("duplicate parameter name " + name);
  params_.emplace_back(std::move(name), std::move(value));
  return params_.size() - 1;
}

Parameter& ParameterStore::get(std::string_view name) {
  auto it = std::find_if(params_.begin(), params_.end(),
                         [&](const Parameter& p) { return p.name == name; });
  if (it == params_.end()) throw ShapeError("no parameter named " + std::string(name));
  return *it;
}

const Parameter& ParameterStore::get(std::string_view name) const {
  return const_cast<ParameterStore*>(this)->get(name);
}

bool ParameterStore::contains(std::string_view name) const {
  return std::any_of(params_.begin(), params_.end(),
                     [&](const Parameter& p) { return p.name == name; });
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

double ParameterStore::grad_norm() const {
  double sum = 0.0;
  for (const auto& p : params_) {
    for (double g : p.grad.data()) sum += g * g;
  }
  return std::sqrt(sum);
}

void ParameterStore::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (max_norm <= 0.0 || norm <= max_norm) return;
  const double scale = max_norm / norm;
  for (auto& p : params_) {
    for (double& g : p.grad.data()) g *= scale;
  }
}

std::size_t ParameterStore::element_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

}  // namespace refresh::nn
