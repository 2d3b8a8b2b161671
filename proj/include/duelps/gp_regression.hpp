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

#include "duelps/gaussian.hpp"

namespace duelps {

/// GP prior over state-action utilities, observed through trajectory sums.
///
/// Each rolled-out trajectory contributes one row z (its visit counts) and
/// a label: +1/2 for the preferred trajectory of a duel, -1/2 for the
/// other. Labels stand in for the noisy trajectory utilities
/// R = z'r + eps, eps ~ N(0, sigma_eps2), and the posterior is exact
/// Gaussian conditioning of r on R = labels.
class GpRegressionModel {
 public:
  GpRegressionModel(Vector prior_mean, Matrix prior_cov, double sigma_eps2);

  int dim() const { return static_cast<int>(prior_mean_.size()); }
  int rows() const { return static_cast<int>(labels_.size()); }

  void add_trajectory(const Vector& visits, double label);

  /// Adds both trajectories of a duel: x2 gets y, x1 gets -y.
  void add_duel(const Vector& x1, const Vector& x2, double y);

  /// Stacked visit rows, rows() x dim().
  Matrix design() const;
  const std::vector<double>& labels() const { return labels_; }

  const Vector& prior_mean() const { return prior_mean_; }
  const Matrix& prior_cov() const { return prior_cov_; }
  double sigma_eps2() const { return sigma_eps2_; }

  /// mu = mu_r + K Z' G^-1 (y - Z mu_r), Sigma = K - K Z' G^-1 Z K with
  /// G = Z K Z' + sigma_eps2 I.
  GaussianPosterior posterior() const;

  bool operator==(const GpRegressionModel& other) const {
    return labels_ == other.labels_ && design() == other.design();
  }

 private:
  Vector prior_mean_;
  Matrix prior_cov_;
  double sigma_eps2_;
  std::vector<Vector> rows_;
  std::vector<double> labels_;
};

}  // namespace duelps
