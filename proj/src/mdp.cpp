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

#include "duelps/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace duelps {

namespace {

constexpr double kTieTolerance = 1e-12;

void check_horizon(int horizon) {
  if (horizon <= 0) throw InvalidModelError("horizon must be positive");
}

void check_terminal(const std::vector<bool>& terminal, int num_states) {
  if (!terminal.empty() && static_cast<int>(terminal.size()) != num_states) {
    throw InvalidModelError("terminal mask length differs from the state count");
  }
}

bool masked(const std::vector<bool>& terminal, int s) {
  return !terminal.empty() && terminal[static_cast<std::size_t>(s)];
}

}  // namespace

Transitions::Transitions(int num_states, int num_actions)
    : num_states_(num_states), num_actions_(num_actions) {
  if (num_states <= 0 || num_actions <= 0) {
    throw InvalidModelError("state and action counts must be positive");
  }
  probs_.assign(static_cast<std::size_t>(num_states) * num_actions * num_states, 0.0);
}

void Transitions::validate(double tol) const {
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_actions_; ++a) {
      double total = 0.0;
      for (double p : row(s, a)) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw InvalidModelError("negative or non-finite transition probability at (" +
                                  std::to_string(s) + ", " + std::to_string(a) + ")");
        }
        total += p;
      }
      if (std::abs(total - 1.0) > tol) {
        throw InvalidModelError("transition row (" + std::to_string(s) + ", " +
                                std::to_string(a) + ") sums to " + std::to_string(total));
      }
    }
  }
}

TabularMdp::TabularMdp(int horizon, Vector initial, Transitions transitions,
                       Vector rewards, std::vector<bool> terminal)
    : horizon_(horizon),
      initial_(std::move(initial)),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      terminal_(std::move(terminal)) {
  check_horizon(horizon_);
  const int S = transitions_.num_states();
  if (S <= 0) throw InvalidModelError("empty transition tensor");
  transitions_.validate();
  if (initial_.size() != S) throw InvalidModelError("initial distribution has wrong length");
  if ((initial_.array() < 0.0).any() || std::abs(initial_.sum() - 1.0) > 1e-9) {
    throw InvalidModelError("initial distribution is not a probability vector");
  }
  if (rewards_.size() != num_state_actions()) {
    throw InvalidModelError("reward vector length must equal S*A");
  }
  if (!rewards_.allFinite()) throw InvalidModelError("rewards must be finite");
  if (terminal_.empty()) terminal_.assign(static_cast<std::size_t>(S), false);
  check_terminal(terminal_, S);
}

Policy::Policy(int num_states, int horizon, int fill_action)
    : num_states_(num_states),
      horizon_(horizon),
      actions_(static_cast<std::size_t>(num_states) * horizon, fill_action) {}

void Policy::validate(int num_actions) const {
  for (int a : actions_) {
    if (a < 0 || a >= num_actions) throw InvalidModelError("policy action out of range");
  }
}

Plan plan(const Transitions& transitions, const Vector& rewards, int horizon,
          const std::vector<bool>& terminal, Rng& rng) {
  check_horizon(horizon);
  transitions.validate();
  const int S = transitions.num_states();
  const int A = transitions.num_actions();
  if (rewards.size() != S * A) throw InvalidModelError("reward vector length must equal S*A");
  if (!rewards.allFinite()) throw InvalidModelError("rewards must be finite");
  check_terminal(terminal, S);

  Plan out{Policy(S, horizon), Matrix::Zero(S, horizon + 1)};
  std::vector<double> q(static_cast<std::size_t>(A));
  std::vector<int> best;
  best.reserve(static_cast<std::size_t>(A));

  for (int t = horizon - 1; t >= 0; --t) {
    const auto next = out.values.col(t + 1);
    for (int s = 0; s < S; ++s) {
      if (masked(terminal, s)) continue;  // value 0, action 0
      double q_max = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        double cont = 0.0;
        const auto row = transitions.row(s, a);
        for (int n = 0; n < S; ++n) cont += row[n] * next(n);
        q[a] = rewards(sa_index(s, a, A)) + cont;
        q_max = std::max(q_max, q[a]);
      }
      best.clear();
      for (int a = 0; a < A; ++a) {
        if (q[a] >= q_max - kTieTolerance) best.push_back(a);
      }
      int chosen = best.front();
      if (best.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
        chosen = best[pick(rng)];
      }
      out.policy.set_action(s, t, chosen);
      out.values(s, t) = q_max;
    }
  }
  return out;
}

Policy value_iteration(const Transitions& transitions, const Vector& rewards,
                       int horizon, const std::vector<bool>& terminal, Rng& rng) {
  return plan(transitions, rewards, horizon, terminal, rng).policy;
}

double policy_value(const TabularMdp& mdp, const Vector& rewards, const Policy& policy) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  if (policy.num_states() != S || policy.horizon() != mdp.horizon()) {
    throw InvalidModelError("policy shape does not match the MDP");
  }
  if (rewards.size() != S * A) throw InvalidModelError("reward vector length must equal S*A");
  policy.validate(A);

  Vector dist = mdp.initial();
  Vector next(S);
  double total = 0.0;
  for (int t = 0; t < mdp.horizon(); ++t) {
    next.setZero();
    for (int s = 0; s < S; ++s) {
      const double mass = dist(s);
      if (mass == 0.0 || mdp.is_terminal(s)) continue;
      const int a = policy.action(s, t);
      total += mass * rewards(sa_index(s, a, A));
      const auto row = mdp.transitions().row(s, a);
      for (int n = 0; n < S; ++n) next(n) += mass * row[n];
    }
    dist.swap(next);
  }
  return total;
}

double policy_value(const TabularMdp& mdp, const Policy& policy) {
  return policy_value(mdp, mdp.rewards(), policy);
}

double optimal_value(const TabularMdp& mdp) {
  // Tie-breaking never changes the optimal value, so any fixed stream works.
  Rng rng(0);
  const Plan p = plan(mdp.transitions(), mdp.rewards(), mdp.horizon(), mdp.terminal(), rng);
  return mdp.initial().dot(p.values.col(0));
}

int sample_index(std::span<const double> probs, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;  // rounding slack
}

Trajectory rollout(const TabularMdp& mdp, const Policy& policy, Rng& rng) {
  const int A = mdp.num_actions();
  Trajectory traj;
  traj.visits = Vector::Zero(mdp.num_state_actions());
  traj.states.reserve(static_cast<std::size_t>(mdp.horizon()) + 1);
  traj.actions.reserve(static_cast<std::size_t>(mdp.horizon()));

  const Vector& p0 = mdp.initial();
  int s = sample_index({p0.data(), static_cast<std::size_t>(p0.size())}, rng);
  traj.states.push_back(s);
  for (int t = 0; t < mdp.horizon(); ++t) {
    if (mdp.is_terminal(s)) break;
    const int a = policy.action(s, t);
    const int k = sa_index(s, a, A);
    traj.actions.push_back(a);
    traj.visits(k) += 1.0;
    traj.episode_return += mdp.rewards()(k);
    s = sample_index(mdp.transitions().row(s, a), rng);
    traj.states.push_back(s);
  }
  return traj;
}

Trajectory make_trajectory(const TabularMdp& mdp, std::vector<int> states,
                           std::vector<int> actions) {
  if (states.size() != actions.size() + 1) {
    throw InvalidModelError("trajectory needs one more state than actions");
  }
  if (static_cast<int>(actions.size()) > mdp.horizon()) {
    throw InvalidModelError("trajectory longer than the horizon");
  }
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  for (int s : states) {
    if (s < 0 || s >= S) throw InvalidModelError("state index out of range");
  }
  Trajectory traj;
  traj.visits = Vector::Zero(mdp.num_state_actions());
  for (std::size_t t = 0; t < actions.size(); ++t) {
    const int a = actions[t];
    if (a < 0 || a >= A) throw InvalidModelError("action index out of range");
    const int k = sa_index(states[t], a, A);
    traj.visits(k) += 1.0;
    traj.episode_return += mdp.rewards()(k);
  }
  traj.states = std::move(states);
  traj.actions = std::move(actions);
  return traj;
}

}  // namespace duelps
