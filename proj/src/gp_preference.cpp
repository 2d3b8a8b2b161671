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

#include "duelps/gp_preference.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace duelps {

namespace {

constexpr double kGradientTolerance = 1e-8;
constexpr int kMaxNewtonIterations = 200;
constexpr int kMaxHalvings = 60;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

// Below this the erfc-based Phi underflows; switch to the Mills-ratio series.
constexpr double kCdfAsymptotic = -37.0;

double mills_series(double z) {
  const double z2 = z * z;
  return 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
}

double log_normal_pdf(double z) {
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

double log_normal_cdf(double z) {
  if (z > kCdfAsymptotic) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  return log_normal_pdf(z) - std::log(-z) + std::log(mills_series(z));
}

}  // namespace

LinkTerms link_terms(PreferenceLink link, double z) {
  if (link == PreferenceLink::kSigmoid) {
    const double s_neg = sigmoid(-z);
    const double s_pos = sigmoid(z);
    return {log_sigmoid(z), s_neg, s_neg * (s_neg - s_pos)};
  }
  double ratio;  // phi(z) / Phi(z)
  if (z > kCdfAsymptotic) {
    ratio = std::exp(log_normal_pdf(z) - log_normal_cdf(z));
  } else {
    ratio = -z / mills_series(z);
  }
  return {log_normal_cdf(z), ratio, -z * ratio};
}

double gpp_convexity_term(PreferenceLink link, double z) {
  const LinkTerms t = link_terms(link, z);
  return -t.d2_ratio + t.d1_ratio * t.d1_ratio;
}

GpPreferenceModel::GpPreferenceModel(Matrix prior_cov, GpPreferenceParams params)
    : prior_cov_(std::move(prior_cov)), params_(params) {
  if (prior_cov_.rows() == 0 || prior_cov_.rows() != prior_cov_.cols()) {
    throw InvalidModelError("prior covariance must be square and nonempty");
  }
  if (!(params_.c > 0.0)) throw ConfigError("hyperparams.c", "must be positive");
  if (!(params_.alpha > 0.0)) throw ConfigError("hyperparams.alpha", "must be positive");
  const Eigen::LLT<Matrix> llt(prior_cov_);
  if (llt.info() != Eigen::Success) {
    throw ConfigError("hyperparams", "prior covariance is not positive definite");
  }
  prior_precision_ = llt.solve(Matrix::Identity(dim(), dim()));
  symmetrize(prior_precision_);
}

void GpPreferenceModel::add_duel(const Vector& x1, const Vector& x2, double y) {
  add_oriented(y > 0.0 ? Vector(x2 - x1) : Vector(x1 - x2));
}

void GpPreferenceModel::add_oriented(const Vector& winner_minus_loser) {
  if (winner_minus_loser.size() != dim()) throw InvalidModelError("feature dimension mismatch");
  oriented_.push_back(winner_minus_loser);
}

Matrix GpPreferenceModel::stacked() const {
  Matrix D(count(), dim());
  for (int i = 0; i < count(); ++i) D.row(i) = oriented_[static_cast<std::size_t>(i)].transpose();
  return D;
}

double GpPreferenceModel::objective(const Vector& r) const {
  double value = 0.5 * r.dot(prior_precision_ * r);
  for (const Vector& x : oriented_) {
    value -= link_terms(params_.link, x.dot(r) / params_.c).log_g;
  }
  return value;
}

Vector GpPreferenceModel::gradient(const Vector& r) const {
  Vector g = prior_precision_ * r;
  for (const Vector& x : oriented_) {
    const LinkTerms t = link_terms(params_.link, x.dot(r) / params_.c);
    g -= (t.d1_ratio / params_.c) * x;
  }
  return g;
}

Matrix GpPreferenceModel::hessian(const Vector& r) const {
  Matrix H = prior_precision_;
  if (count() == 0) return H;
  const Matrix D = stacked();
  const Vector z = D * r / params_.c;
  Vector weight(count());
  for (int i = 0; i < count(); ++i) weight(i) = gpp_convexity_term(params_.link, z(i));
  H.noalias() += D.transpose() * (weight / (params_.c * params_.c)).asDiagonal() * D;
  symmetrize(H);
  return H;
}

GpPreferenceModel::LaplaceFit GpPreferenceModel::laplace() const {
  LaplaceFit fit;
  fit.map = Vector::Zero(dim());
  if (count() == 0) {
    fit.hessian = prior_precision_;
    return fit;
  }

  Vector& r = fit.map;
  double value = objective(r);
  for (int it = 0; it < kMaxNewtonIterations; ++it) {
    const Vector g = gradient(r);
    fit.gradient_norm = g.norm();
    fit.iterations = it;
    if (fit.gradient_norm <= kGradientTolerance) {
      fit.hessian = hessian(r);
      return fit;
    }
    const Matrix H = hessian(r);
    const Eigen::LLT<Matrix> llt(H);
    if (llt.info() != Eigen::Success) throw NumericError("Laplace Hessian is not positive definite");
    const Vector step = -llt.solve(g);

    // Halve until S stops increasing; the slack absorbs round-off once the
    // decrease is below machine precision near the optimum.
    const double slack = 1e-13 * std::max(1.0, std::abs(value));
    double t = 1.0;
    double trial = objective(r + step);
    int halvings = 0;
    while (!(trial <= value + slack) && halvings < kMaxHalvings) {
      t *= 0.5;
      trial = objective(r + t * step);
      ++halvings;
    }
    if (halvings == kMaxHalvings) break;
    r += t * step;
    value = trial;
  }
  fit.gradient_norm = gradient(r).norm();
  if (fit.gradient_norm <= kGradientTolerance) {
    fit.hessian = hessian(r);
    return fit;
  }
  std::ostringstream msg;
  msg << "Laplace Newton iterations did not converge; final gradient norm "
      << fit.gradient_norm;
  throw NumericError(msg.str());
}

GaussianPosterior GpPreferenceModel::posterior() const {
  const LaplaceFit fit = laplace();
  const Eigen::LLT<Matrix> llt(fit.hessian);
  if (llt.info() != Eigen::Success) throw NumericError("Laplace Hessian is not positive definite");
  GaussianPosterior out{fit.map, params_.alpha * llt.solve(Matrix::Identity(dim(), dim()))};
  symmetrize(out.covariance);
  return out;
}

}  // namespace duelps
