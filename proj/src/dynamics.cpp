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

#include "duelps/dynamics.hpp"

#include <numeric>

#include "duelps/sampling.hpp"

namespace duelps {

DirichletDynamics::DirichletDynamics(int num_states, int num_actions, double prior)
    : num_states_(num_states), num_actions_(num_actions) {
  if (num_states <= 0 || num_actions <= 0) {
    throw InvalidModelError("state and action counts must be positive");
  }
  if (!(prior > 0.0)) throw InvalidModelError("Dirichlet prior must be positive");
  alpha_.assign(static_cast<std::size_t>(num_states) * num_actions * num_states, prior);
}

DirichletDynamics::DirichletDynamics(int num_states, int num_actions,
                                     std::vector<double> alpha)
    : num_states_(num_states), num_actions_(num_actions), alpha_(std::move(alpha)) {
  if (alpha_.size() != static_cast<std::size_t>(num_states) * num_actions * num_states) {
    throw InvalidModelError("Dirichlet parameter tensor has the wrong size");
  }
  for (double v : alpha_) {
    if (!(v > 0.0)) throw InvalidModelError("Dirichlet parameters must be positive");
  }
}

void DirichletDynamics::update(const Trajectory& trajectory) {
  const auto& states = trajectory.states;
  const auto& actions = trajectory.actions;
  for (std::size_t t = 0; t < actions.size() && t + 1 < states.size(); ++t) {
    const int s = states[t];
    const int a = actions[t];
    const int next = states[t + 1];
    if (s < 0 || s >= num_states_ || a < 0 || a >= num_actions_ || next < 0 ||
        next >= num_states_) {
      throw InvalidModelError("trajectory indexes outside the model");
    }
    alpha_[index(s, a, next)] += 1.0;
    ++observed_;
  }
}

Transitions DirichletDynamics::sample(Rng& rng) const {
  Transitions out(num_states_, num_actions_);
  const auto S = static_cast<std::size_t>(num_states_);
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      sample_dirichlet({alpha_.data() + index(s, a, 0), S}, out.row(s, a), rng);
    }
  }
  return out;
}

Transitions DirichletDynamics::mean() const {
  Transitions out(num_states_, num_actions_);
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      const double* row = alpha_.data() + index(s, a, 0);
      const double total = std::accumulate(row, row + num_states_, 0.0);
      for (int n = 0; n < num_states_; ++n) out(s, a, n) = row[n] / total;
    }
  }
  return out;
}

}  // namespace duelps
