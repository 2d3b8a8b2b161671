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

#include <span>

#include "duelps/common.hpp"

namespace duelps {

/// log of a Gamma(shape, 1) draw. Small shapes go through the
/// Gamma(shape + 1) * U^(1/shape) identity so the result never underflows.
double sample_log_gamma(double shape, Rng& rng);

/// Fills `out` with one Dirichlet(alpha) draw via normalized Gamma draws.
void sample_dirichlet(std::span<const double> alpha, std::span<double> out, Rng& rng);

Vector sample_standard_normal(int n, Rng& rng);

}  // namespace duelps
