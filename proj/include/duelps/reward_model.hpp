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

#include <optional>
#include <string_view>
#include <variant>

#include "duelps/environments.hpp"
#include "duelps/gp_preference.hpp"
#include "duelps/gp_regression.hpp"
#include "duelps/kernel.hpp"
#include "duelps/linear_reward.hpp"

namespace duelps {

enum class CreditKind { kBlr, kGpr, kGpp };

std::string_view to_string(CreditKind kind);
/// Throws ConfigError("credit") for unknown names.
CreditKind parse_credit_kind(std::string_view name);

/// Hyperparameters of whichever credit model is selected; only the fields of
/// `kind` are read.
struct CreditConfig {
  CreditKind kind = CreditKind::kBlr;
  LinearRewardParams blr;
  /// Prior kernel for both GP models.
  SquaredExponentialKernel kernel;
  /// GP regression observation noise; defaults to kernel.sigma_n2.
  std::optional<double> sigma_eps2;
  GpPreferenceParams gpp;
  /// When set, the GP preference prior is lambda * I (the Bayesian logistic
  /// regression special case) instead of the kernel matrix.
  std::optional<double> gpp_lambda;
};

/// Tuned hyperparameters for each benchmark.
CreditConfig default_credit(CreditKind kind, EnvKind env);

/// Default Dirichlet pseudo-count for each benchmark.
double default_dynamics_prior(EnvKind env);

using RewardModel = std::variant<LinearRewardModel, GpRegressionModel, GpPreferenceModel>;

RewardModel make_reward_model(const CreditConfig& config, const Environment& env);

CreditKind credit_kind(const RewardModel& model);

/// Folds one duel in: BLR and GP preference see (x2 - x1, y); GP
/// regression sees both rows with labels -y and y.
void add_duel(RewardModel& model, const Vector& x1, const Vector& x2, double y);

GaussianPosterior reward_posterior(const RewardModel& model);

}  // namespace duelps
