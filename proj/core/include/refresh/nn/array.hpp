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
#include <initializer_list>
#include <span>
#include <vector>

namespace refresh::nn {

// Dense row-major array of 64-bit floats.
class Array {
 public:
  Array() = default;
  explicit Array(std::vector<std::size_t> shape, double fill = 0.0);
  Array(std::vector<std::size_t> shape, std::vector<double> data);

  static Array vector(std::initializer_list<double> values);
  static Array vector(std::vector<double> values);
  static Array zeros_like(const Array& other) { return Array(other.shape_); }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // 2-D access.
  double& at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * shape_[1] + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * shape_[1], shape_[1]}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * shape_[1], shape_[1]};
  }

  void fill(double v);
  bool all_finite() const;
  bool same_shape(const Array& other) const noexcept { return shape_ == other.shape_; }

  // Element-wise += ; shapes must match.
  Array& operator+=(const Array& other);

  friend bool operator==(const Array&, const Array&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Throws ShapeError with `what` unless the condition holds.
void require_shape(bool ok, const char* what);

}  // namespace refresh::nn
