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

#include "duelps/common.hpp"

namespace duelps {

/// Common return type of the reward posteriors.
struct GaussianPosterior {
  Vector mean;
  Matrix covariance;
};

/// Holds a lower-triangular factor of a posterior covariance so that many
/// draws can share one factorization. Factorization retries with diagonal
/// jitter from 1e-12 to 1e-6 (relative to the mean diagonal) before
/// giving up with NumericError.
class GaussianSampler {
 public:
  explicit GaussianSampler(GaussianPosterior posterior);

  Vector draw(Rng& rng) const;

  const GaussianPosterior& posterior() const { return posterior_; }
  /// Jitter that was added to the diagonal, 0 if none was needed.
  double jitter() const { return jitter_; }

 private:
  GaussianPosterior posterior_;
  Matrix factor_;
  bool degenerate_ = false;
  double jitter_ = 0.0;
};

/// One draw from N(mean, covariance).
Vector gauss_sample(const GaussianPosterior& posterior, Rng& rng);

/// Symmetrizes in place; cheap guard against round-off asymmetry.
inline void symmetrize(Matrix& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace duelps
