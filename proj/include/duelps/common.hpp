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

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace duelps {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Every stochastic routine takes one of these by reference; seeding it
/// fixes the whole computation.
using Rng = std::mt19937_64;

/// A model violates its structural invariants (non-stochastic rows,
/// mismatched dimensions, out-of-range actions).
class InvalidModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A factorization or an iterative solve failed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user configuration. `field` is the dotted path of the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace duelps
