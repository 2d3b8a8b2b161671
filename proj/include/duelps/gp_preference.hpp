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

/// Preference likelihood links g: R -> (0, 1).
enum class PreferenceLink { kSigmoid, kGaussianCdf };

/// log g(z), g'(z)/g(z) and g''(z)/g(z), evaluated without forming g
/// directly so that large |z| stays finite.
struct LinkTerms {
  double log_g;
  double d1_ratio;
  double d2_ratio;
};

LinkTerms link_terms(PreferenceLink link, double z);

/// -g''(z)/g(z) + (g'(z)/g(z))^2. Nonnegative everywhere is sufficient for
/// the negative log posterior to be convex.
double gpp_convexity_term(PreferenceLink link, double z);

struct GpPreferenceParams {
  double c = 1.0;
  PreferenceLink link = PreferenceLink::kSigmoid;
  /// Scale applied to the Laplace covariance before sampling.
  double alpha = 1.0;
};

/// Laplace-approximated posterior over utilities under the preference
/// likelihood P(winner beats loser | r) = g(r'(x_win - x_lose) / c) and a
/// Gaussian prior N(0, Sigma).
class GpPreferenceModel {
 public:
  GpPreferenceModel(Matrix prior_cov, GpPreferenceParams params);

  int dim() const { return static_cast<int>(prior_cov_.rows()); }
  int count() const { return static_cast<int>(oriented_.size()); }
  const GpPreferenceParams& params() const { return params_; }
  const Matrix& prior_cov() const { return prior_cov_; }

  /// Stores the difference oriented winner minus loser.
  void add_duel(const Vector& x1, const Vector& x2, double y);
  void add_oriented(const Vector& winner_minus_loser);

  const std::vector<Vector>& oriented() const { return oriented_; }

  /// S(r) = 1/2 r' Sigma^-1 r - sum_i log g(z_i), z_i = r'x_i / c.
  double objective(const Vector& r) const;
  Vector gradient(const Vector& r) const;
  /// Sigma^-1 + (1/c^2) sum_i [-g''/g + (g'/g)^2](z_i) x_i x_i'.
  Matrix hessian(const Vector& r) const;

  struct LaplaceFit {
    Vector map;
    Matrix hessian;
    int iterations = 0;
    double gradient_norm = 0.0;
  };

  /// Damped Newton from r = 0 until ||grad S|| <= 1e-8; NumericError after
  /// 200 iterations.
  LaplaceFit laplace() const;

  /// N(r_map, alpha * H(r_map)^-1).
  GaussianPosterior posterior() const;

  bool operator==(const GpPreferenceModel& other) const {
    return oriented_ == other.oriented_;
  }

 private:
  Matrix stacked() const;

  Matrix prior_cov_;
  Matrix prior_precision_;
  GpPreferenceParams params_;
  std::vector<Vector> oriented_;
};

}  // namespace duelps
