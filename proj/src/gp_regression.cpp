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

#include "duelps/gp_regression.hpp"

namespace duelps {

GpRegressionModel::GpRegressionModel(Vector prior_mean, Matrix prior_cov, double sigma_eps2)
    : prior_mean_(std::move(prior_mean)), prior_cov_(std::move(prior_cov)),
      sigma_eps2_(sigma_eps2) {
  const auto d = prior_mean_.size();
  if (d == 0 || prior_cov_.rows() != d || prior_cov_.cols() != d) {
    throw InvalidModelError("GP prior mean and covariance shapes differ");
  }
  if (!(sigma_eps2_ >= 0.0)) throw ConfigError("hyperparams.sigma_eps2", "must be nonnegative");
}

void GpRegressionModel::add_trajectory(const Vector& visits, double label) {
  if (visits.size() != dim()) throw InvalidModelError("feature dimension mismatch");
  rows_.push_back(visits);
  labels_.push_back(label);
}

void GpRegressionModel::add_duel(const Vector& x1, const Vector& x2, double y) {
  add_trajectory(x1, -y);
  add_trajectory(x2, y);
}

Matrix GpRegressionModel::design() const {
  Matrix Z(rows(), dim());
  for (int i = 0; i < rows(); ++i) Z.row(i) = rows_[static_cast<std::size_t>(i)].transpose();
  return Z;
}

GaussianPosterior GpRegressionModel::posterior() const {
  if (rows() == 0) return {prior_mean_, prior_cov_};

  const Matrix Z = design();
  const Vector y = Eigen::Map<const Vector>(labels_.data(), rows());
  const Matrix KZt = prior_cov_ * Z.transpose();  // d x m, also the r/R cross-covariance
  Matrix gram = Z * KZt;
  symmetrize(gram);
  gram.diagonal().array() += sigma_eps2_;

  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericError("GP regression Gram matrix is not positive definite");
  }
  const Vector residual = y - Z * prior_mean_;
  GaussianPosterior out;
  out.mean = prior_mean_ + KZt * llt.solve(residual);
  out.covariance = prior_cov_ - KZt * llt.solve(KZt.transpose());
  symmetrize(out.covariance);
  return out;
}

}  // namespace duelps
