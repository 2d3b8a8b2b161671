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

#include "duelps/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace duelps {

double sample_log_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw InvalidModelError("gamma shape must be positive");
  if (shape >= 1.0) {
    std::gamma_distribution<double> gamma(shape, 1.0);
    double g = gamma(rng);
    while (g <= 0.0) g = gamma(rng);
    return std::log(g);
  }
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double g = gamma(rng);
  while (g <= 0.0) g = gamma(rng);
  double u = unif(rng);
  while (u <= 0.0) u = unif(rng);
  return std::log(g) + std::log(u) / shape;
}

void sample_dirichlet(std::span<const double> alpha, std::span<double> out, Rng& rng) {
  if (alpha.size() != out.size() || alpha.empty()) {
    throw InvalidModelError("dirichlet parameter and output sizes differ");
  }
  double log_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = sample_log_gamma(alpha[i], rng);
    log_max = std::max(log_max, out[i]);
  }
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - log_max);
    total += v;
  }
  for (double& v : out) v /= total;
}

Vector sample_standard_normal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(n);
  for (int i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

}  // namespace duelps
