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

#include "duelps/gaussian.hpp"

#include <cmath>

#include "duelps/sampling.hpp"

namespace duelps {

GaussianSampler::GaussianSampler(GaussianPosterior posterior)
    : posterior_(std::move(posterior)) {
  const Matrix& cov = posterior_.covariance;
  const auto d = posterior_.mean.size();
  if (cov.rows() != d || cov.cols() != d) {
    throw InvalidModelError("covariance shape does not match the mean");
  }
  if (!cov.allFinite() || !posterior_.mean.allFinite()) {
    throw NumericError("posterior has non-finite entries");
  }
  if (d == 0 || cov.isZero(0.0)) {
    degenerate_ = true;
    return;
  }

  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() == Eigen::Success) {
    factor_ = llt.matrixL();
    return;
  }
  const double scale = std::max(std::abs(cov.diagonal().mean()), 1e-300);
  for (double jitter = 1e-12; jitter <= 1e-6 * (1 + 1e-9); jitter *= 10.0) {
    Matrix bumped = cov;
    bumped.diagonal().array() += jitter * scale;
    llt.compute(bumped);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      jitter_ = jitter * scale;
      return;
    }
  }
  throw NumericError("covariance is not positive semidefinite even with 1e-6 jitter");
}

Vector GaussianSampler::draw(Rng& rng) const {
  if (degenerate_) return posterior_.mean;
  const Vector z = sample_standard_normal(static_cast<int>(posterior_.mean.size()), rng);
  return posterior_.mean + factor_.triangularView<Eigen::Lower>() * z;
}

Vector gauss_sample(const GaussianPosterior& posterior, Rng& rng) {
  return GaussianSampler(posterior).draw(rng);
}

}  // namespace duelps
