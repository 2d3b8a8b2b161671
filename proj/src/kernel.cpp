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

#include "duelps/kernel.hpp"

#include <cmath>

namespace duelps {

void SquaredExponentialKernel::validate(int dims) const {
  if (!(sigma_f2 >= 0.0)) throw ConfigError("hyperparams.sigma_f2", "must be nonnegative");
  if (!(sigma_n2 >= 0.0)) throw ConfigError("hyperparams.sigma_n2", "must be nonnegative");
  if (lengthscales.size() != 1 && static_cast<int>(lengthscales.size()) != dims) {
    throw ConfigError("hyperparams.lengthscale",
                      "expected 1 or " + std::to_string(dims) + " lengthscales");
  }
  for (double l : lengthscales) {
    if (!(l >= 0.0)) throw ConfigError("hyperparams.lengthscale", "must be nonnegative");
  }
}

double se_kernel(const SquaredExponentialKernel& kernel, const Matrix& coords, int i, int j) {
  const auto dims = coords.cols();
  double dist2 = 0.0;
  bool separated = false;
  for (Eigen::Index k = 0; k < dims; ++k) {
    const double l = kernel.lengthscales.size() == 1
                         ? kernel.lengthscales[0]
                         : kernel.lengthscales[static_cast<std::size_t>(k)];
    const double diff = coords(i, k) - coords(j, k);
    if (l == 0.0) {
      if (diff != 0.0) separated = true;
      continue;
    }
    dist2 += (diff / l) * (diff / l);
  }
  const double signal = separated ? 0.0 : kernel.sigma_f2 * std::exp(-0.5 * dist2);
  return signal + (i == j ? kernel.sigma_n2 : 0.0);
}

Matrix kernel_matrix(const SquaredExponentialKernel& kernel, const Matrix& coords) {
  kernel.validate(static_cast<int>(coords.cols()));
  const auto n = coords.rows();
  Matrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      K(i, j) = K(j, i) = se_kernel(kernel, coords, static_cast<int>(i), static_cast<int>(j));
    }
  }
  return K;
}

}  // namespace duelps
