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

#include "doctest.h"
#include "oracles.hpp"

using namespace duelps;

namespace {

// Sample covariance with the empirical mean removed.
Matrix sample_covariance(const std::vector<Vector>& draws) {
  const auto d = draws.front().size();
  Vector mean = Vector::Zero(d);
  for (const Vector& x : draws) mean += x;
  mean /= static_cast<double>(draws.size());
  Matrix cov = Matrix::Zero(d, d);
  for (const Vector& x : draws) cov += (x - mean) * (x - mean).transpose();
  return cov / static_cast<double>(draws.size());
}

}  // namespace

TEST_CASE("zero covariance returns the mean exactly") {
  Vector mean(3);
  mean << 1.5, -2.0, 0.25;
  Rng rng(0);
  const GaussianSampler s({mean, Matrix::Zero(3, 3)});
  for (int i = 0; i < 5; ++i) CHECK(s.draw(rng) == mean);
}

TEST_CASE("moments of a fixed 3-D Gaussian") {
  Vector mean(3);
  mean << 1.0, -1.0, 0.5;
  Matrix cov(3, 3);
  cov << 2.0, 0.3, -0.4, 0.3, 1.0, 0.2, -0.4, 0.2, 0.5;
  const GaussianSampler s({mean, cov});
  CHECK(s.jitter() == 0.0);
  Rng rng(1);
  std::vector<Vector> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(s.draw(rng));

  for (int k = 0; k < 3; ++k) {
    oracle::Welford w;
    for (const Vector& x : draws) w.add(x(k));
    CHECK(std::abs(w.mean() - mean(k)) <= 3.0 * std::sqrt(cov(k, k) / 1e5));
  }
  CHECK((sample_covariance(draws) - cov).norm() / cov.norm() < 0.05);
}

TEST_CASE("identity covariance gives uncorrelated coordinates") {
  const GaussianSampler s({Vector::Zero(4), Matrix::Identity(4, 4)});
  Rng rng(2);
  std::vector<Vector> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(s.draw(rng));
  const Matrix c = sample_covariance(draws);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) CHECK(std::abs(c(i, j) / std::sqrt(c(i, i) * c(j, j))) < 0.02);
  }
}

TEST_CASE("rank-deficient covariance is repaired with jitter") {
  Vector u(3);
  u << 1.0, 2.0, -1.0;
  const Matrix cov = u * u.transpose();
  const GaussianSampler s({Vector::Zero(3), cov});
  CHECK(s.jitter() > 0.0);
  CHECK(s.jitter() <= 1e-6 * cov.diagonal().mean());
  Rng rng(3);
  // Draws stay on the line spanned by u up to the jitter.
  const Vector x = s.draw(rng);
  const Vector residual = x - u * (u.dot(x) / u.squaredNorm());
  CHECK(residual.norm() < 1e-4);
}

TEST_CASE("indefinite covariance is a numeric error") {
  Matrix cov = Matrix::Identity(2, 2);
  cov(1, 1) = -1.0;
  CHECK_THROWS_AS(GaussianSampler({Vector::Zero(2), cov}), NumericError);
  CHECK_THROWS_AS(GaussianSampler({Vector::Zero(2), Matrix::Identity(3, 3)}), InvalidModelError);
}
