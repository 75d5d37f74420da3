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

#include "refresh/nn/array.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "refresh/error.hpp"

namespace refresh::nn {

namespace {
std::size_t element_count(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}
}  // namespace

Array::Array(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

Array::Array(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  require_shape(data_.size() == element_count(shape_), "array data does not match its shape");
}

Array Array::vector(std::initializer_list<double> values) {
  return vector(std::vector<double>(values));
}

Array Array::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return Array({n}, std::move(values));
}

void Array::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Array::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Array& Array::operator+=(const Array& other) {
  require_shape(same_shape(other), "+= on arrays of different shapes");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

void require_shape(bool ok, const char* what) {
  if (!ok) throw ShapeError(what);
}

}  // namespace refresh::nn
