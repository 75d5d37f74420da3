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
#include <functional>
#include <string>

#include "refresh/nn/parameter.hpp"

namespace refresh::nn {

struct GradCheckOptions {
  double delta = 1e-5;
  // Coordinates sampled per parameter; parameters at or below this size are
  // checked exhaustively.
  std::size_t max_coords_per_param = 32;
  std::uint64_t seed = 0;
  // Relative error is |a - n| / max(|a|, |n|, floor).
  double denominator_floor = 1e-6;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates_checked = 0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares the gradients currently stored in `params` against central
// differences of `loss` on a sampled subset of non-frozen coordinates.
// `loss` must be a pure function of the parameter values. Values are
// restored afterwards. Throws refresh::Error on a non-finite loss.
GradCheckResult finite_difference_check(const std::function<double()>& loss,
                                        ParameterStore& params,
                                        const GradCheckOptions& options = {});

}  // namespace refresh::nn
