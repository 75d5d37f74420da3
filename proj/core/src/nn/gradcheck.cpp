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

#include "refresh/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "refresh/error.hpp"
#include "refresh/nn/random.hpp"

namespace refresh::nn {

namespace {

double evaluate(const std::function<double()>& loss) {
  const double v = loss();
  if (!std::isfinite(v)) throw Error("finite_difference_check: non-finite loss");
  return v;
}

}  // namespace

GradCheckResult finite_difference_check(const std::function<double()>& loss,
                                        ParameterStore& params,
                                        const GradCheckOptions& options) {
  Rng rng(options.seed);
  GradCheckResult result;
  evaluate(loss);
  for (auto& p : params) {
    const std::size_t first = p.frozen_rows * p.row_size();
    const std::size_t n = p.value.size() - std::min(first, p.value.size());
    std::vector<std::size_t> coords(n);
    std::iota(coords.begin(), coords.end(), first);
    if (coords.size() > options.max_coords_per_param) {
      rng.shuffle(coords);
      coords.resize(options.max_coords_per_param);
      std::sort(coords.begin(), coords.end());
    }
    for (std::size_t idx : coords) {
      double& x = p.value[idx];
      const double saved = x;
      x = saved + options.delta;
      const double up = evaluate(loss);
      x = saved - options.delta;
      const double down = evaluate(loss);
      x = saved;
      const double numeric = (up - down) / (2.0 * options.delta);
      const double analytic = p.grad[idx];
      const double denom =
          std::max({std::abs(analytic), std::abs(numeric), options.denominator_floor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++result.coordinates_checked;
      if (rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = p.name;
        result.worst_index = idx;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace refresh::nn
