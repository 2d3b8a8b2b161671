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

#include "doctest.h"
#include "oracles.hpp"

using namespace duelps;

namespace {

Vector vec(std::initializer_list<double> v) {
  return oracle::from_vec(oracle::Vec(v));
}

}  // namespace

TEST_CASE("no duels: MAP is zero and covariance is the scaled prior") {
  Matrix sigma(2, 2);
  sigma << 2.0, 0.5, 0.5, 1.0;
  const GpPreferenceModel m(sigma, {1.0, PreferenceLink::kSigmoid, 0.01});
  const GaussianPosterior p = m.posterior();
  CHECK(p.mean == Vector::Zero(2));
  CHECK((p.covariance - 0.01 * sigma).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("Laplace mode agrees with a grid search") {
  GpPreferenceModel m(Matrix::Identity(2, 2), {1.0, PreferenceLink::kSigmoid, 1.0});
  m.add_oriented(vec({1.0, -1.0}));
  const Vector map = m.laplace().map;

  double best = INFINITY;
  double br1 = 0.0, br2 = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    const double r1 = i * 1e-3;
    for (int j = -2000; j <= 2000; ++j) {
      const double r2 = j * 1e-3;
      const double s = 0.5 * (r1 * r1 + r2 * r2) + std::log1p(std::exp(-(r1 - r2)));
      if (s < best) {
        best = s;
        br1 = r1;
        br2 = r2;
      }
    }
  }
  CHECK(std::abs(map(0) - br1) <= 2e-3);
  CHECK(std::abs(map(1) - br2) <= 2e-3);
  CHECK(map(0) > 0.0);
  CHECK(map(0) == doctest::Approx(-map(1)));
}

TEST_CASE("oriented differences match plus/minus-one logistic labels") {
  Rng rng(4);
  std::uniform_int_distribution<int> counts(0, 3);
  std::bernoulli_distribution coin(0.5);
  const double c = 0.7;
  const int d = 3;
  GpPreferenceModel m(Matrix::Identity(d, d) * 2.0, {c, PreferenceLink::kSigmoid, 1.0});
  std::vector<oracle::Vec> diffs;
  std::vector<double> labels;
  for (int i = 0; i < 12; ++i) {
    oracle::Vec x1(d), x2(d), dx(d);
    for (int k = 0; k < d; ++k) {
      x1[k] = counts(rng);
      x2[k] = counts(rng);
      dx[k] = x2[k] - x1[k];
    }
    const double y = coin(rng) ? 0.5 : -0.5;
    m.add_duel(oracle::from_vec(x1), oracle::from_vec(x2), y);
    diffs.push_back(dx);
    labels.push_back(2.0 * y);
  }

  // Independent fit: plain gradient descent on the +/-1 logistic loss.
  oracle::Vec r(d, 0.0);
  for (int it = 0; it < 200000; ++it) {
    oracle::Vec g(d);
    for (int k = 0; k < d; ++k) g[k] = r[k] / 2.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      double z = 0.0;
      for (int k = 0; k < d; ++k) z += diffs[i][k] * r[k];
      z *= labels[i] / c;
      const double w = 1.0 / (1.0 + std::exp(z));
      for (int k = 0; k < d; ++k) g[k] -= w * labels[i] * diffs[i][k] / c;
    }
    double norm = 0.0;
    for (int k = 0; k < d; ++k) {
      r[k] -= 0.01 * g[k];
      norm += g[k] * g[k];
    }
    if (norm < 1e-24) break;
  }
  CHECK(oracle::max_abs_diff(m.laplace().map, r) <= 1e-7);
}

TEST_CASE("gradient and Hessian against finite differences") {
  Rng rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  for (PreferenceLink link : {PreferenceLink::kSigmoid, PreferenceLink::kGaussianCdf}) {
    Matrix sigma = Matrix::Identity(3, 3);
    sigma(0, 1) = sigma(1, 0) = 0.3;
    GpPreferenceModel m(sigma, {0.8, link, 1.0});
    for (int i = 0; i < 8; ++i) m.add_oriented(vec({n(rng), n(rng), n(rng)}));
    for (int trial = 0; trial < 5; ++trial) {
      const Vector r = vec({n(rng), n(rng), n(rng)});
      const double eps = 1e-5;
      const Matrix H = m.hessian(r);
      const Vector g = m.gradient(r);
      for (int k = 0; k < 3; ++k) {
        Vector e = Vector::Zero(3);
        e(k) = eps;
        const Vector col = (m.gradient(r + e) - m.gradient(r - e)) / (2 * eps);
        CHECK((col - H.col(k)).norm() <= 1e-5 * H.col(k).norm());
        const double gk = (m.objective(r + e) - m.objective(r - e)) / (2 * eps);
        CHECK(std::abs(gk - g(k)) <= 1e-5 * std::max(1.0, std::abs(g(k))));
      }
    }
  }
}

TEST_CASE("log-concavity term is nonnegative") {
  for (PreferenceLink link : {PreferenceLink::kSigmoid, PreferenceLink::kGaussianCdf}) {
    for (int i = -1000; i <= 1000; ++i) {
      const double t = gpp_convexity_term(link, i * 0.01);
      CHECK(std::isfinite(t));
      CHECK(t >= 0.0);
    }
  }
  CHECK(gpp_convexity_term(PreferenceLink::kSigmoid, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(gpp_convexity_term(PreferenceLink::kGaussianCdf, 0.0) ==
        doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  // Deep in the lower tail the probit term approaches 1.
  CHECK(gpp_convexity_term(PreferenceLink::kGaussianCdf, -60.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("separable duels still give a bounded MAP") {
  for (PreferenceLink link : {PreferenceLink::kSigmoid, PreferenceLink::kGaussianCdf}) {
    GpPreferenceModel m(Matrix::Identity(2, 2), {0.01, link, 1.0});
    for (int i = 0; i < 50; ++i) m.add_oriented(vec({3.0, 0.0}));
    const auto fit = m.laplace();
    CHECK(fit.gradient_norm <= 1e-8);
    CHECK(std::isfinite(fit.map(0)));
    CHECK(fit.map(0) > 0.0);
    CHECK(fit.map(1) == 0.0);
    const GaussianPosterior p = m.posterior();
    CHECK(p.covariance(0, 0) < 1.0);
  }
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(GpPreferenceModel(Matrix::Identity(2, 2), {0.0, PreferenceLink::kSigmoid, 1.0}),
                  ConfigError);
  CHECK_THROWS_AS(GpPreferenceModel(Matrix::Identity(2, 2), {1.0, PreferenceLink::kSigmoid, -1.0}),
                  ConfigError);
  CHECK_THROWS_AS(GpPreferenceModel(Matrix::Zero(2, 2), {}), ConfigError);
  GpPreferenceModel m(Matrix::Identity(2, 2), {});
  CHECK_THROWS_AS(m.add_oriented(Vector::Zero(3)), InvalidModelError);
}
