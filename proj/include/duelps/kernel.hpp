// Copyright 2026 The duelps Authors.
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

#include <vector>

#include "duelps/common.hpp"

namespace duelps {

/// k(i, j) = sigma_f2 * exp(-1/2 * sum_k ((c_ik - c_jk) / l_k)^2) + sigma_n2 * [i == j]
///
/// One lengthscale per coordinate, or a single one for all. A zero
/// lengthscale is the limit l -> 0: coordinates that differ in that
/// dimension are uncorrelated, equal ones contribute nothing.
struct SquaredExponentialKernel {
  double sigma_f2 = 1.0;
  std::vector<double> lengthscales{0.0};
  double sigma_n2 = 0.0;

  /// Throws ConfigError on negative variances or lengthscales, or a
  /// lengthscale count that fits neither 1 nor `dims`.
  void validate(int dims) const;
};

/// Kernel between state-action pairs i and j, given one coordinate row per
/// pair.
double se_kernel(const SquaredExponentialKernel& kernel, const Matrix& coords, int i, int j);

Matrix kernel_matrix(const SquaredExponentialKernel& kernel, const Matrix& coords);

}  // namespace duelps
