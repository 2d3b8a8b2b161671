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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace duelps;

namespace {

TabularMdp single_state(int horizon) {
  Transitions p(1, 2);
  p(0, 0, 0) = 1.0;
  p(0, 1, 0) = 1.0;
  Vector r(2);
  r << 0.0, 1.0;
  return TabularMdp(horizon, Vector::Ones(1), p, r);
}

// 0 -> 1 -> 2 -> 2 under action 1; action 0 stays put.
TabularMdp chain() {
  Transitions p(3, 2);
  for (int s = 0; s < 3; ++s) {
    p(s, 0, s) = 1.0;
    p(s, 1, std::min(s + 1, 2)) = 1.0;
  }
  Vector r = Vector::Zero(6);
  r(sa_index(2, 1, 2)) = 1.0;
  Vector p0 = Vector::Zero(3);
  p0(0) = 1.0;
  return TabularMdp(4, p0, p, r);
}

// Forward-DP expected visit counts of every state-action pair.
oracle::Vec occupancy(const TabularMdp& mdp, const Policy& pi) {
  const int S = mdp.num_states();
  const int A = mdp.num_actions();
  oracle::Vec dist = oracle::to_vec(mdp.initial());
  oracle::Vec occ(static_cast<std::size_t>(S * A), 0.0);
  for (int t = 0; t < mdp.horizon(); ++t) {
    oracle::Vec next(static_cast<std::size_t>(S), 0.0);
    for (int s = 0; s < S; ++s) {
      if (mdp.is_terminal(s)) continue;
      const int a = pi.action(s, t);
      occ[s * A + a] += dist[s];
      for (int n = 0; n < S; ++n) next[n] += dist[s] * mdp.transitions()(s, a, n);
    }
    dist = next;
  }
  return occ;
}

Policy random_policy(Rng& rng, int S, int A, int h) {
  std::uniform_int_distribution<int> pick(0, A - 1);
  Policy p(S, h);
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < h; ++t) p.set_action(s, t, pick(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("single state with a dominant action") {
  const TabularMdp mdp = single_state(3);
  Rng rng(1);
  const Policy pi = value_iteration(mdp.transitions(), mdp.rewards(), 3, mdp.terminal(), rng);
  for (int t = 0; t < 3; ++t) CHECK(pi.action(0, t) == 1);
  CHECK(policy_value(mdp, pi) == 3.0);
  CHECK(optimal_value(mdp) == 3.0);
}

TEST_CASE("value iteration matches brute-force enumeration") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const TabularMdp mdp = oracle::random_mdp(rng, 3, 2, 4, trial % 2 == 1);
    const Policy pi = value_iteration(mdp.transitions(), mdp.rewards(), 4, mdp.terminal(), rng);
    CHECK(policy_value(mdp, pi) == doctest::Approx(oracle::brute_force_optimum(mdp)).epsilon(1e-12));
  }
}

TEST_CASE("optimal policy dominates random policies") {
  Rng rng(7);
  const TabularMdp mdp = oracle::random_mdp(rng, 4, 3, 5);
  const Policy best = value_iteration(mdp.transitions(), mdp.rewards(), 5, mdp.terminal(), rng);
  const double v = policy_value(mdp, best);
  for (int i = 0; i < 50; ++i) {
    CHECK(v >= policy_value(mdp, random_policy(rng, 4, 3, 5)) - 1e-12);
  }
}

TEST_CASE("forward evaluation agrees with the recursive evaluator") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const TabularMdp mdp = oracle::random_mdp(rng, 4, 2, 5, trial % 2 == 0);
    const Policy pi = random_policy(rng, 4, 2, 5);
    CHECK(policy_value(mdp, pi) ==
          doctest::Approx(oracle::recursive_value(mdp, mdp.rewards(), pi)).epsilon(1e-12));
  }
}

TEST_CASE("policy value is linear in the rewards") {
  Rng rng(11);
  const TabularMdp mdp = oracle::random_mdp(rng, 4, 3, 6);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Vector r1(12), r2(12);
    for (int k = 0; k < 12; ++k) {
      r1(k) = n(rng);
      r2(k) = n(rng);
    }
    const double a = n(rng), b = n(rng);
    const Policy pi = random_policy(rng, 4, 3, 6);
    const double lhs = policy_value(mdp, Vector(a * r1 + b * r2), pi);
    const double rhs = a * policy_value(mdp, r1, pi) + b * policy_value(mdp, r2, pi);
    CHECK(std::abs(lhs - rhs) <= 1e-9);
  }
}

TEST_CASE("value iteration is invariant to positive reward scaling") {
  Rng gen(5);
  for (int trial = 0; trial < 10; ++trial) {
    const TabularMdp mdp = oracle::random_mdp(gen, 4, 3, 5);
    Rng a(trial), b(trial);
    const Policy p1 = value_iteration(mdp.transitions(), mdp.rewards(), 5, mdp.terminal(), a);
    const Policy p2 =
        value_iteration(mdp.transitions(), Vector(4.0 * mdp.rewards()), 5, mdp.terminal(), b);
    CHECK(p1 == p2);
  }
}

TEST_CASE("ties are broken uniformly at random") {
  Transitions p(1, 3);
  for (int a = 0; a < 3; ++a) p(0, a, 0) = 1.0;
  Rng rng(9);
  std::array<int, 3> counts{};
  for (int i = 0; i < 3000; ++i) {
    const Policy pi = value_iteration(p, Vector::Zero(3), 1, {}, rng);
    ++counts[static_cast<std::size_t>(pi.action(0, 0))];
  }
  for (int c : counts) CHECK(std::abs(c - 1000) < 100);  // ~3.9 sigma
}

TEST_CASE("terminal states carry no value and end roll-outs") {
  Transitions p(2, 1);
  p(0, 0, 1) = 1.0;
  p(1, 0, 1) = 1.0;
  Vector r(2);
  r << 1.0, 5.0;
  Vector p0(2);
  p0 << 1.0, 0.0;
  const TabularMdp mdp(10, p0, p, r, {false, true});
  Rng rng(0);
  const Plan plan_out = plan(mdp.transitions(), mdp.rewards(), 10, mdp.terminal(), rng);
  CHECK(plan_out.values(1, 0) == 0.0);
  CHECK(plan_out.values(0, 0) == 1.0);
  CHECK(policy_value(mdp, plan_out.policy) == 1.0);
  const Trajectory t = rollout(mdp, plan_out.policy, rng);
  CHECK(t.steps() == 1);
  CHECK(t.states == std::vector<int>{0, 1});
  CHECK(t.episode_return == 1.0);
}

TEST_CASE("deterministic chain roll-out") {
  const TabularMdp mdp = chain();
  const Policy right(3, 4, 1);
  Rng rng(0);
  const Trajectory t = rollout(mdp, right, rng);
  CHECK(t.states == std::vector<int>{0, 1, 2, 2, 2});
  CHECK(t.actions == std::vector<int>{1, 1, 1, 1});
  Vector expected = Vector::Zero(6);
  expected(sa_index(0, 1, 2)) = 1;
  expected(sa_index(1, 1, 2)) = 1;
  expected(sa_index(2, 1, 2)) = 2;
  CHECK(t.visits == expected);
  CHECK(t.episode_return == 2.0);
  CHECK(t.visits.norm() <= t.visits.lpNorm<1>());
  CHECK(t.visits.sum() == t.steps());
}

TEST_CASE("Monte Carlo returns match the exact value") {
  Rng rng(21);
  const TabularMdp mdp = oracle::random_mdp(rng, 3, 2, 4);
  const Policy pi = random_policy(rng, 3, 2, 4);
  oracle::Welford w;
  for (int i = 0; i < 100000; ++i) w.add(rollout(mdp, pi, rng).episode_return);
  const double se = w.stddev() / std::sqrt(static_cast<double>(w.count()));
  CHECK(std::abs(w.mean() - policy_value(mdp, pi)) <= 3.0 * se);
}

TEST_CASE("empirical visit counts match the occupancy measure") {
  Rng rng(33);
  const TabularMdp mdp = oracle::random_mdp(rng, 3, 2, 4, true);
  const Policy pi = random_policy(rng, 3, 2, 4);
  const oracle::Vec occ = occupancy(mdp, pi);
  std::vector<oracle::Welford> w(occ.size());
  for (int i = 0; i < 100000; ++i) {
    const Trajectory t = rollout(mdp, pi, rng);
    for (std::size_t k = 0; k < occ.size(); ++k) w[k].add(t.visits(static_cast<Eigen::Index>(k)));
  }
  for (std::size_t k = 0; k < occ.size(); ++k) {
    const double se = w[k].stddev() / std::sqrt(1e5);
    CHECK(std::abs(w[k].mean() - occ[k]) <= std::max(3.0 * se, 1e-12));
  }
}

TEST_CASE("make_trajectory reproduces roll-out features") {
  Rng rng(4);
  const TabularMdp mdp = oracle::random_mdp(rng, 4, 3, 6, true);
  for (int i = 0; i < 20; ++i) {
    const Trajectory t = rollout(mdp, random_policy(rng, 4, 3, 6), rng);
    const Trajectory u = make_trajectory(mdp, t.states, t.actions);
    CHECK(u.visits == t.visits);
    CHECK(u.episode_return == t.episode_return);
  }
  CHECK_THROWS_AS(make_trajectory(mdp, {0}, {0}), InvalidModelError);
  CHECK_THROWS_AS(make_trajectory(mdp, {0, 9}, {0}), InvalidModelError);
}

TEST_CASE("invalid models are rejected") {
  Transitions p(2, 1);
  p(0, 0, 0) = 0.5;
  p(1, 0, 1) = 1.0;
  CHECK_THROWS_AS(TabularMdp(3, Vector::Constant(2, 0.5), p, Vector::Zero(2)), InvalidModelError);
  p(0, 0, 1) = 0.5;
  CHECK_NOTHROW(TabularMdp(3, Vector::Constant(2, 0.5), p, Vector::Zero(2)));
  CHECK_THROWS_AS(TabularMdp(3, Vector::Constant(2, 0.4), p, Vector::Zero(2)), InvalidModelError);
  CHECK_THROWS_AS(TabularMdp(3, Vector::Constant(2, 0.5), p, Vector::Zero(3)), InvalidModelError);
  CHECK_THROWS_AS(TabularMdp(0, Vector::Constant(2, 0.5), p, Vector::Zero(2)), InvalidModelError);
  Rng rng(0);
  Transitions bad = p;
  bad(1, 0, 1) = 1.1;
  CHECK_THROWS_AS(value_iteration(bad, Vector::Zero(2), 3, {}, rng), InvalidModelError);

  const TabularMdp mdp(3, Vector::Constant(2, 0.5), p, Vector::Zero(2));
  CHECK_THROWS_AS(policy_value(mdp, Policy(2, 4)), InvalidModelError);
  CHECK_THROWS_AS(policy_value(mdp, Policy(2, 3, 1)), InvalidModelError);
}
