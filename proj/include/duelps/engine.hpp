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
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "duelps/dynamics.hpp"
#include "duelps/environments.hpp"
#include "duelps/gaussian.hpp"
#include "duelps/preference.hpp"
#include "duelps/reward_model.hpp"

namespace duelps {

/// Failure inside a run loop, tagged with the 1-based iteration it hit.
class RunError : public std::runtime_error {
 public:
  RunError(int iteration, const std::string& what)
      : std::runtime_error("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Samples transitions (or takes `known` when given), then rewards, and plans
/// against the sampled pair.
Policy advance(const DirichletDynamics& dynamics, const GaussianSampler& rewards,
               int horizon, const std::vector<bool>& terminal, Rng& rng,
               const Transitions* known = nullptr);

struct Duel {
  Trajectory first;
  Trajectory second;
  double y = 0.0;
};

struct SessionOptions {
  /// Plan against the true transitions instead of a posterior draw.
  bool known_dynamics = false;
};

/// Learner state of one DPS run. The models are a pure fold over
/// `history()`; `rng` drives posterior draws, tie-breaking and roll-outs.
class Session {
 public:
  Session(std::shared_ptr<const Environment> env, RewardModel reward,
          DirichletDynamics dynamics, Rng rng, SessionOptions options = {});

  const Environment& environment() const { return *env_; }
  const TabularMdp& mdp() const { return env_->mdp; }
  const DirichletDynamics& dynamics() const { return dynamics_; }
  const RewardModel& reward_model() const { return reward_; }
  const std::vector<Duel>& history() const { return history_; }
  int iteration() const { return static_cast<int>(history_.size()); }
  const SessionOptions& options() const { return options_; }

  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

  Policy advance();
  Trajectory rollout(const Policy& policy);

  /// Folds one answered duel into both models.
  void feedback(const Trajectory& first, const Trajectory& second, double y);

  /// Reward posterior, cached until the next feedback.
  const GaussianSampler& reward_sampler();

 private:
  std::shared_ptr<const Environment> env_;
  RewardModel reward_;
  DirichletDynamics dynamics_;
  Rng rng_;
  SessionOptions options_;
  std::vector<Duel> history_;
  std::optional<GaussianSampler> sampler_;
};

/// Fresh models for `env` with the given hyperparameters, history folded in.
Session replay_session(std::shared_ptr<const Environment> env, const CreditConfig& credit,
                       double dynamics_prior, const std::vector<Duel>& history, Rng rng,
                       SessionOptions options = {});

/// Optimal policy for the posterior-mean model. Ties are broken with a
/// fixed-seed generator so repeated calls agree.
Policy greedy_policy(const Session& session);

struct IterationRecord {
  int iter = 0;
  double v_pi1 = 0.0;
  std::optional<double> v_pi2;
  double v_star = 0.0;
  double ret1 = 0.0;
  std::optional<double> ret2;
  std::optional<double> y;

  bool operator==(const IterationRecord&) const = default;
};

struct RunLog {
  std::string algorithm;
  std::uint64_t env_fingerprint = 0;
  std::vector<IterationRecord> records;
  /// Filled only when requested: one (dps: two) entries per iteration.
  std::vector<Policy> policies;
  std::vector<Vector> features;

  bool operator==(const RunLog& other) const;
};

/// FNV-1a over horizon, shape, initial distribution, transitions, rewards
/// and terminal mask.
std::uint64_t fingerprint(const TabularMdp& mdp);

struct RunOptions {
  int iterations = 0;
  double dynamics_prior = 1.0;
  bool known_dynamics = false;
  bool keep_policies = false;
  bool keep_features = false;
};

struct DpsConfig {
  CreditConfig credit;
  LinkFunction link;
  RunOptions run;
};

struct PsrlConfig {
  double prior_var = 1.0;
  double noise_var = 1.0;
  RunOptions run;
};

/// Learner generator for a run or service session started from `seed`; the
/// first draw of Rng(seed).
Rng learner_rng(std::uint64_t seed);

/// DPS against an arbitrary oracle; `learner` drives the session.
RunLog run_dps(const Environment& env, const DpsConfig& config, PreferenceOracle& oracle,
               Rng learner);
/// `rng` seeds the learner and the simulated oracle from two draws.
RunLog run_dps(const Environment& env, const DpsConfig& config, Rng& rng);
RunLog run_psrl(const Environment& env, const PsrlConfig& config, Rng& rng);
/// Uniformly random policy table per episode.
RunLog run_random(const Environment& env, const RunOptions& options, Rng& rng);

/// One JSON object per line: iter, v_pi1, v_pi2, v_star, ret1, ret2, y;
/// absent fields are null.
void write_jsonl(std::ostream& out, const RunLog& log);

}  // namespace duelps
