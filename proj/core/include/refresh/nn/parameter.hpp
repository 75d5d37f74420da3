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
#include <string>
#include <string_view>
#include <vector>

#include "refresh/nn/array.hpp"

namespace refresh::nn {

// A trainable tensor with its gradient and Adam moments.
struct Parameter {
  Parameter(std::string name, Array value);

  std::string name;
  Array value;
  Array grad;
  Array adam_m;
  Array adam_v;
  std::int64_t step_count = 0;
  // Leading rows (axis 0) that are never updated, e.g. the padding embedding.
  std::size_t frozen_rows = 0;

  // Elements per row along axis 0.
  std::size_t row_size() const;
  bool is_frozen(std::size_t flat_index) const {
    return flat_index < frozen_rows * row_size();
  }
  void zero_grad() { grad.fill(0.0); }

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

using ParamId = std::size_t;

// Insertion-ordered named parameters. Names are unique.
class ParameterStore {
 public:
  ParamId add(std::string name, Array value);

  Parameter& operator[](ParamId id) { return params_.at(id); }
  const Parameter& operator[](ParamId id) const { return params_.at(id); }
  Parameter& get(std::string_view name);
  const Parameter& get(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::size_t size() const noexcept { return params_.size(); }
  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  // L2 norm over every gradient element.
  double grad_norm() const;
  // Scales all gradients so their joint norm is at most max_norm (> 0).
  void clip_grad_norm(double max_norm);
  std::size_t element_count() const;

  friend bool operator==(const ParameterStore&, const ParameterStore&) = default;

 private:
  std::vector<Parameter> params_;
};

}  // namespace refresh::nn
