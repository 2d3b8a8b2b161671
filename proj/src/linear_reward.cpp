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

#include "duelps/linear_reward.hpp"

#include <cmath>

namespace duelps {

namespace {

Eigen::LLT<Matrix> factor(const Matrix& m) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("ridge system is not positive definite");
  return llt;
}

}  // namespace

LinearRewardModel::LinearRewardModel(int dim, LinearRewardParams params)
    : params_(params), gram_(Matrix::Zero(dim, dim)), moment_(Vector::Zero(dim)) {
  if (dim <= 0) throw InvalidModelError("reward dimension must be positive");
  if (!(params_.lambda > 0.0)) throw ConfigError("hyperparams.lambda", "must be positive");
  if (!(params_.sigma > 0.0)) throw ConfigError("hyperparams.sigma", "must be positive");
  if (!(params_.delta > 0.0 && params_.delta < 1.0)) {
    throw ConfigError("hyperparams.delta", "must lie in (0, 1)");
  }
  if (!(params_.noise_scale >= 0.0)) throw ConfigError("hyperparams.R", "must be nonnegative");
  if (!(params_.norm_bound >= 0.0)) throw ConfigError("hyperparams.S_r", "must be nonnegative");
  if (params_.mode == BlrMode::kTheory && params_.lambda < 1.0) {
    throw ConfigError("hyperparams.lambda", "theory mode requires lambda >= 1");
  }
}

void LinearRewardModel::update(const Vector& dx, double y) {
  if (dx.size() != dim()) throw InvalidModelError("feature dimension mismatch");
  gram_.noalias() += dx * dx.transpose();
  moment_.noalias() += y * dx;
  ++count_;
}

Matrix LinearRewardModel::design_matrix() const {
  Matrix m = gram_;
  m.diagonal().array() += params_.lambda;
  return m;
}

Vector LinearRewardModel::map_estimate() const {
  return factor(design_matrix()).solve(moment_);
}

double LinearRewardModel::log_det_design() const {
  const Eigen::LLT<Matrix> llt = factor(design_matrix());
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double LinearRewardModel::beta() const {
  const double d = dim();
  const double log_ratio = 0.5 * log_det_design() - 0.5 * d * std::log(params_.lambda) -
                           std::log(params_.delta);
  return params_.noise_scale * std::sqrt(2.0 * std::max(log_ratio, 0.0)) +
         std::sqrt(params_.lambda) * params_.norm_bound;
}

double LinearRewardModel::beta_bound(double max_feature_norm) const {
  const double d = dim();
  const double L2 = max_feature_norm * max_feature_norm;
  const double inner = (1.0 + L2 * count_ / (d * params_.lambda)) / params_.delta;
  return params_.noise_scale * std::sqrt(d * std::log(inner)) +
         std::sqrt(params_.lambda) * params_.norm_bound;
}

GaussianPosterior LinearRewardModel::posterior(BlrMode mode) const {
  const int d = dim();
  const Matrix identity = Matrix::Identity(d, d);
  if (mode == BlrMode::kTheory) {
    const Eigen::LLT<Matrix> llt = factor(design_matrix());
    const double b = beta();
    GaussianPosterior out{llt.solve(moment_), b * b * llt.solve(identity)};
    symmetrize(out.covariance);
    return out;
  }
  const double s2 = params_.sigma * params_.sigma;
  Matrix system = gram_;
  system.diagonal().array() += s2 * params_.lambda;
  const Eigen::LLT<Matrix> llt = factor(system);
  GaussianPosterior out{llt.solve(moment_), s2 * llt.solve(identity)};
  symmetrize(out.covariance);
  return out;
}

Vector blr_sample(const LinearRewardModel& model, Rng& rng, BlrMode mode) {
  return gauss_sample(model.posterior(mode), rng);
}

}  // namespace duelps
