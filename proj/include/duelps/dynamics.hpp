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

#include <vector>

#include "duelps/mdp.hpp"

namespace duelps {

/// Independent Dirichlet posterior over each transition row. alpha holds
/// prior pseudo-counts plus observed transition counts.
class DirichletDynamics {
 public:
  DirichletDynamics(int num_states, int num_actions, double prior);
  /// Arbitrary positive parameter tensor, laid out like Transitions.
  DirichletDynamics(int num_states, int num_actions, std::vector<double> alpha);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double alpha(int s, int a, int next) const { return alpha_[index(s, a, next)]; }
  const std::vector<double>& alpha() const { return alpha_; }

  /// Number of transitions folded in so far.
  long observed() const { return observed_; }

  /// alpha[s_t][a_t][s_{t+1}] += 1 for each transition of the trajectory.
  void update(const Trajectory& trajectory);

  /// One Dirichlet draw per row.
  Transitions sample(Rng& rng) const;

  Transitions mean() const;

  bool operator==(const DirichletDynamics&) const = default;

 private:
  std::size_t index(int s, int a, int next) const {
    return (static_cast<std::size_t>(s) * num_actions_ + a) * num_states_ + next;
  }

  int num_states_;
  int num_actions_;
  std::vector<double> alpha_;
  long observed_ = 0;
};

}  // namespace duelps
