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

#include "duelps/gaussian.hpp"

namespace duelps {

enum class BlrMode {
  /// N(mu, Sigma) with mu = (X'X + s^2 l I)^-1 X'y, Sigma = s^2 (X'X + s^2 l I)^-1.
  kPractical,
  /// N(r_hat, beta^2 M^-1) with M = l I + X'X and the confidence radius beta.
  kTheory,
};

struct LinearRewardParams {
  double lambda = 0.1;
  double sigma = 0.5;
  BlrMode mode = BlrMode::kPractical;
  /// Theory-mode confidence-radius inputs.
  double delta = 0.05;
  double noise_scale = 1.0;  // R, sub-Gaussian scale of the label noise
  double norm_bound = 1.0;   // S_r, bound on ||r||_2
};

/// Ridge-regression credit assignment on trajectory differences. Stores the
/// sufficient statistics X'X and X'y; every posterior is derived from them.
class LinearRewardModel {
 public:
  LinearRewardModel(int dim, LinearRewardParams params);

  int dim() const { return static_cast<int>(moment_.size()); }
  int count() const { return count_; }
  const LinearRewardParams& params() const { return params_; }

  /// gram += dx dx', moment += y dx.
  void update(const Vector& dx, double y);

  const Matrix& gram() const { return gram_; }
  const Vector& moment() const { return moment_; }

  /// M = lambda I + X'X.
  Matrix design_matrix() const;

  /// r_hat = M^-1 X'y.
  Vector map_estimate() const;

  /// log det M via Cholesky.
  double log_det_design() const;

  /// R sqrt(2 log(det(M)^1/2 lambda^-d/2 / delta)) + sqrt(lambda) S_r.
  double beta() const;

  /// R sqrt(d log((1 + L^2 n / (d lambda)) / delta)) + sqrt(lambda) S_r,
  /// valid when every ||dx|| <= L and d >= 2.
  double beta_bound(double max_feature_norm) const;

  GaussianPosterior posterior() const { return posterior(params_.mode); }
  GaussianPosterior posterior(BlrMode mode) const;

  bool operator==(const LinearRewardModel& other) const {
    return count_ == other.count_ && gram_ == other.gram_ && moment_ == other.moment_;
  }

 private:
  LinearRewardParams params_;
  Matrix gram_;
  Vector moment_;
  int count_ = 0;
};

/// One Thompson draw in the requested mode.
Vector blr_sample(const LinearRewardModel& model, Rng& rng, BlrMode mode);

}  // namespace duelps
