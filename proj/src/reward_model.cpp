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

#include "duelps/reward_model.hpp"

#include <string>

namespace duelps {

std::string_view to_string(CreditKind kind) {
  switch (kind) {
    case CreditKind::kBlr: return "blr";
    case CreditKind::kGpr: return "gpr";
    case CreditKind::kGpp: return "gpp";
  }
  return "unknown";
}

CreditKind parse_credit_kind(std::string_view name) {
  if (name == "blr") return CreditKind::kBlr;
  if (name == "gpr") return CreditKind::kGpr;
  if (name == "gpp") return CreditKind::kGpp;
  throw ConfigError("credit", "unknown credit model '" + std::string(name) + "'");
}

CreditConfig default_credit(CreditKind kind, EnvKind env) {
  CreditConfig c;
  c.kind = kind;
  switch (env) {
    case EnvKind::kRiverSwim:
      c.blr.sigma = 0.5;
      c.blr.lambda = 0.1;
      c.kernel = {0.1, {0.0}, 0.001};
      c.gpp_lambda = 1.0;
      c.gpp.alpha = 1.0;
      break;
    case EnvKind::kRandomMdp:
      c.blr.sigma = 0.1;
      c.blr.lambda = 10.0;
      c.kernel = {0.05, {0.0}, 0.0005};
      c.gpp_lambda = 0.1;
      c.gpp.alpha = 0.01;
      break;
    case EnvKind::kMountainCar:
      c.blr.sigma = 10.0;
      c.blr.lambda = 1.0;
      c.kernel = {0.01, {2.0, 2.0, 0.0}, 1e-5};
      c.gpp_lambda = 0.0001;
      c.gpp.alpha = 0.01;
      break;
  }
  c.gpp.c = 1.0;
  c.gpp.link = PreferenceLink::kSigmoid;
  return c;
}

double default_dynamics_prior(EnvKind env) {
  return env == EnvKind::kMountainCar ? 0.0005 : 1.0;
}

RewardModel make_reward_model(const CreditConfig& config, const Environment& env) {
  const int d = env.mdp.num_state_actions();
  switch (config.kind) {
    case CreditKind::kBlr:
      return LinearRewardModel(d, config.blr);
    case CreditKind::kGpr: {
      Matrix K = kernel_matrix(config.kernel, env.coords);
      const double noise = config.sigma_eps2.value_or(config.kernel.sigma_n2);
      return GpRegressionModel(Vector::Zero(d), std::move(K), noise);
    }
    case CreditKind::kGpp: {
      Matrix prior;
      if (config.gpp_lambda) {
        if (!(*config.gpp_lambda > 0.0)) throw ConfigError("hyperparams.lambda", "must be positive");
        prior = *config.gpp_lambda * Matrix::Identity(d, d);
      } else {
        prior = kernel_matrix(config.kernel, env.coords);
      }
      return GpPreferenceModel(std::move(prior), config.gpp);
    }
  }
  throw ConfigError("credit", "unknown credit model");
}

CreditKind credit_kind(const RewardModel& model) {
  switch (model.index()) {
    case 0: return CreditKind::kBlr;
    case 1: return CreditKind::kGpr;
    default: return CreditKind::kGpp;
  }
}

void add_duel(RewardModel& model, const Vector& x1, const Vector& x2, double y) {
  if (auto* blr = std::get_if<LinearRewardModel>(&model)) {
    blr->update(x2 - x1, y);
  } else if (auto* gpr = std::get_if<GpRegressionModel>(&model)) {
    gpr->add_duel(x1, x2, y);
  } else {
    std::get<GpPreferenceModel>(model).add_duel(x1, x2, y);
  }
}

GaussianPosterior reward_posterior(const RewardModel& model) {
  return std::visit([](const auto& m) { return m.posterior(); }, model);
}

}  // namespace duelps
