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
#include <span>
#include <vector>

#include "duelps/common.hpp"

namespace duelps {

/// Flat index of a state-action pair; feature vectors and reward vectors
/// are laid out state-major.
inline int sa_index(int state, int action, int num_actions) {
  return state * num_actions + action;
}

/// Dense [S][A][S] tensor of next-state probabilities.
class Transitions {
 public:
  Transitions() = default;
  Transitions(int num_states, int num_actions);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double& operator()(int s, int a, int next) {
    return probs_[offset(s, a) + static_cast<std::size_t>(next)];
  }
  double operator()(int s, int a, int next) const {
    return probs_[offset(s, a) + static_cast<std::size_t>(next)];
  }

  std::span<double> row(int s, int a) {
    return {probs_.data() + offset(s, a), static_cast<std::size_t>(num_states_)};
  }
  std::span<const double> row(int s, int a) const {
    return {probs_.data() + offset(s, a), static_cast<std::size_t>(num_states_)};
  }

  const std::vector<double>& data() const { return probs_; }

  /// Throws InvalidModelError unless every row is nonnegative and sums to
  /// one within `tol`.
  void validate(double tol = 1e-9) const;

  bool operator==(const Transitions&) const = default;

 private:
  std::size_t offset(int s, int a) const {
    return (static_cast<std::size_t>(s) * num_actions_ + a) * num_states_;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> probs_;
};

/// Ground-truth finite-horizon MDP. Immutable once built; the constructor
/// enforces the structural invariants.
class TabularMdp {
 public:
  TabularMdp(int horizon, Vector initial, Transitions transitions, Vector rewards,
             std::vector<bool> terminal = {});

  int num_states() const { return transitions_.num_states(); }
  int num_actions() const { return transitions_.num_actions(); }
  int num_state_actions() const { return num_states() * num_actions(); }
  int horizon() const { return horizon_; }

  const Vector& initial() const { return initial_; }
  const Transitions& transitions() const { return transitions_; }
  /// Per state-action utility, length S*A.
  const Vector& rewards() const { return rewards_; }
  const std::vector<bool>& terminal() const { return terminal_; }
  bool is_terminal(int s) const { return terminal_[static_cast<std::size_t>(s)]; }

 private:
  int horizon_;
  Vector initial_;
  Transitions transitions_;
  Vector rewards_;
  std::vector<bool> terminal_;
};

/// Deterministic time-indexed policy, action_of[s][t] for t in [0, h).
class Policy {
 public:
  Policy() = default;
  Policy(int num_states, int horizon, int fill_action = 0);

  int num_states() const { return num_states_; }
  int horizon() const { return horizon_; }

  int action(int s, int t) const { return actions_[index(s, t)]; }
  void set_action(int s, int t, int a) { actions_[index(s, t)] = a; }

  /// Throws InvalidModelError if any entry falls outside [0, num_actions).
  void validate(int num_actions) const;

  const std::vector<int>& table() const { return actions_; }
  bool operator==(const Policy&) const = default;

 private:
  std::size_t index(int s, int t) const {
    return static_cast<std::size_t>(s) * horizon_ + t;
  }

  int num_states_ = 0;
  int horizon_ = 0;
  std::vector<int> actions_;
};

/// One roll-out. `visits` counts state-action visits (length S*A); the
/// return is the true utility and is never shown to a learner.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
  double episode_return = 0.0;
  Vector visits;

  int steps() const { return static_cast<int>(actions.size()); }
};

/// Optimal policy plus the optimal values-to-go, values(s, t) for
/// t in [0, h]; column h is zero.
struct Plan {
  Policy policy;
  Matrix values;
};

/// Backward induction. Ties (within 1e-12 of the best action value) are
/// broken uniformly at random with `rng`; terminal states carry zero value.
Plan plan(const Transitions& transitions, const Vector& rewards, int horizon,
          const std::vector<bool>& terminal, Rng& rng);

Policy value_iteration(const Transitions& transitions, const Vector& rewards,
                       int horizon, const std::vector<bool>& terminal, Rng& rng);

/// Exact expected return of `policy` from the initial distribution, by
/// forward propagation of the state distribution.
double policy_value(const TabularMdp& mdp, const Policy& policy);

/// Same as above with the utilities replaced by `rewards`.
double policy_value(const TabularMdp& mdp, const Vector& rewards,
                    const Policy& policy);

/// Value of the optimal policy of the true MDP.
double optimal_value(const TabularMdp& mdp);

Trajectory rollout(const TabularMdp& mdp, const Policy& policy, Rng& rng);

/// Rebuilds a recorded trajectory (states has one more entry than actions),
/// recomputing visits and return exactly as rollout does. Throws
/// InvalidModelError on out-of-range or misshapen input.
Trajectory make_trajectory(const TabularMdp& mdp, std::vector<int> states,
                           std::vector<int> actions);

/// Inverse-CDF draw from a discrete distribution.
int sample_index(std::span<const double> probs, Rng& rng);

}  // namespace duelps
