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

#include "duelps/engine.hpp"

#include <bit>
#include <cmath>

#include "json.hpp"

#include "duelps/sampling.hpp"

namespace duelps {

Policy advance(const DirichletDynamics& dynamics, const GaussianSampler& rewards,
               int horizon, const std::vector<bool>& terminal, Rng& rng,
               const Transitions* known) {
  Transitions sampled;
  if (known == nullptr) sampled = dynamics.sample(rng);
  const Vector r = rewards.draw(rng);
  return value_iteration(known ? *known : sampled, r, horizon, terminal, rng);
}

Session::Session(std::shared_ptr<const Environment> env, RewardModel reward,
                 DirichletDynamics dynamics, Rng rng, SessionOptions options)
    : env_(std::move(env)), reward_(std::move(reward)), dynamics_(std::move(dynamics)),
      rng_(rng), options_(options) {
  if (!env_) throw InvalidModelError("session needs an environment");
  if (dynamics_.num_states() != mdp().num_states() ||
      dynamics_.num_actions() != mdp().num_actions()) {
    throw InvalidModelError("dynamics model shape differs from the environment");
  }
}

const GaussianSampler& Session::reward_sampler() {
  if (!sampler_) sampler_.emplace(reward_posterior(reward_));
  return *sampler_;
}

Policy Session::advance() {
  const GaussianSampler& sampler = reward_sampler();
  return duelps::advance(dynamics_, sampler, mdp().horizon(), mdp().terminal(), rng_,
                         options_.known_dynamics ? &mdp().transitions() : nullptr);
}

Trajectory Session::rollout(const Policy& policy) { return duelps::rollout(mdp(), policy, rng_); }

void Session::feedback(const Trajectory& first, const Trajectory& second, double y) {
  dynamics_.update(first);
  dynamics_.update(second);
  add_duel(reward_, first.visits, second.visits, y);
  history_.push_back({first, second, y});
  sampler_.reset();
}

Session replay_session(std::shared_ptr<const Environment> env, const CreditConfig& credit,
                       double dynamics_prior, const std::vector<Duel>& history, Rng rng,
                       SessionOptions options) {
  RewardModel reward = make_reward_model(credit, *env);
  DirichletDynamics dynamics(env->mdp.num_states(), env->mdp.num_actions(), dynamics_prior);
  Session session(std::move(env), std::move(reward), std::move(dynamics), rng, options);
  for (const Duel& duel : history) session.feedback(duel.first, duel.second, duel.y);
  return session;
}

Policy greedy_policy(const Session& session) {
  Rng rng(0);
  const TabularMdp& mdp = session.mdp();
  const Vector mean = reward_posterior(session.reward_model()).mean;
  const Transitions& p =
      session.options().known_dynamics ? mdp.transitions() : session.dynamics().mean();
  return value_iteration(p, mean, mdp.horizon(), mdp.terminal(), rng);
}

bool RunLog::operator==(const RunLog& other) const {
  if (algorithm != other.algorithm || env_fingerprint != other.env_fingerprint ||
      records != other.records || policies != other.policies ||
      features.size() != other.features.size()) {
    return false;
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i] != other.features[i]) return false;
  }
  return true;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  void real(double v) { bytes(std::bit_cast<std::uint64_t>(v)); }
};

// Second draw seeds the oracle so the learner stream matches a session
// driven by the same first draw.
struct SeedPair {
  std::uint64_t learner;
  std::uint64_t oracle;
};

SeedPair split_seeds(Rng& rng) {
  SeedPair s;
  s.learner = rng();
  s.oracle = rng();
  return s;
}

template <typename Body>
void guarded(int iteration, Body&& body) {
  try {
    body();
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(iteration, e.what());
  }
}

}  // namespace

std::uint64_t fingerprint(const TabularMdp& mdp) {
  Fnv1a f;
  f.bytes(static_cast<std::uint64_t>(mdp.horizon()));
  f.bytes(static_cast<std::uint64_t>(mdp.num_states()));
  f.bytes(static_cast<std::uint64_t>(mdp.num_actions()));
  for (double v : mdp.initial()) f.real(v);
  for (double v : mdp.transitions().data()) f.real(v);
  for (double v : mdp.rewards()) f.real(v);
  for (bool t : mdp.terminal()) f.bytes(t ? 1 : 0);
  return f.h;
}

Rng learner_rng(std::uint64_t seed) {
  Rng root(seed);
  return Rng(root());
}

RunLog run_dps(const Environment& env, const DpsConfig& config, Rng& rng) {
  const SeedPair seeds = split_seeds(rng);
  SimulatedOracle oracle(config.link, env.mdp.rewards(), Rng(seeds.oracle));
  return run_dps(env, config, oracle, Rng(seeds.learner));
}

RunLog run_dps(const Environment& env, const DpsConfig& config, PreferenceOracle& oracle,
               Rng learner) {
  const TabularMdp& mdp = env.mdp;
  RunLog log;
  log.algorithm = "dps";
  log.env_fingerprint = fingerprint(mdp);
  const RunOptions& opt = config.run;
  if (opt.iterations <= 0) return log;

  auto shared = std::make_shared<const Environment>(env);
  Session session(shared, make_reward_model(config.credit, env),
                  DirichletDynamics(mdp.num_states(), mdp.num_actions(), opt.dynamics_prior),
                  learner, SessionOptions{opt.known_dynamics});
  const double v_star = optimal_value(mdp);

  for (int i = 1; i <= opt.iterations; ++i) {
    guarded(i, [&] {
      const Policy pi1 = session.advance();
      const Policy pi2 = session.advance();
      const Trajectory t1 = session.rollout(pi1);
      const Trajectory t2 = session.rollout(pi2);
      const double y = oracle.prefer(t1, t2);
      session.feedback(t1, t2, y);

      IterationRecord rec;
      rec.iter = i;
      rec.v_pi1 = policy_value(mdp, pi1);
      rec.v_pi2 = policy_value(mdp, pi2);
      rec.v_star = v_star;
      rec.ret1 = t1.episode_return;
      rec.ret2 = t2.episode_return;
      rec.y = y;
      log.records.push_back(rec);
      if (opt.keep_policies) {
        log.policies.push_back(pi1);
        log.policies.push_back(pi2);
      }
      if (opt.keep_features) {
        log.features.push_back(t1.visits);
        log.features.push_back(t2.visits);
      }
    });
  }
  return log;
}

RunLog run_psrl(const Environment& env, const PsrlConfig& config, Rng& rng) {
  const TabularMdp& mdp = env.mdp;
  RunLog log;
  log.algorithm = "psrl";
  log.env_fingerprint = fingerprint(mdp);
  const RunOptions& opt = config.run;
  if (opt.iterations <= 0) return log;
  if (!(config.prior_var > 0.0) || !(config.noise_var > 0.0)) {
    throw ConfigError("hyperparams", "PSRL variances must be positive");
  }

  Rng learner(split_seeds(rng).learner);
  const int d = mdp.num_state_actions();
  DirichletDynamics dynamics(mdp.num_states(), mdp.num_actions(), opt.dynamics_prior);
  Vector reward_sum = Vector::Zero(d);
  Vector reward_count = Vector::Zero(d);
  const double v_star = optimal_value(mdp);

  for (int i = 1; i <= opt.iterations; ++i) {
    guarded(i, [&] {
      // Conjugate normal posterior, independent per state-action.
      GaussianPosterior post;
      const Vector precision =
          (1.0 / config.prior_var) + reward_count.array() / config.noise_var;
      post.mean = (reward_sum.array() / config.noise_var) / precision.array();
      post.covariance = precision.cwiseInverse().asDiagonal();
      const GaussianSampler sampler(std::move(post));
      const Policy pi = duelps::advance(dynamics, sampler, mdp.horizon(), mdp.terminal(), learner,
                                        opt.known_dynamics ? &mdp.transitions() : nullptr);
      const Trajectory t = rollout(mdp, pi, learner);
      dynamics.update(t);
      for (int k = 0; k < t.steps(); ++k) {
        const int idx = sa_index(t.states[static_cast<std::size_t>(k)],
                                 t.actions[static_cast<std::size_t>(k)], mdp.num_actions());
        reward_sum(idx) += mdp.rewards()(idx);
        reward_count(idx) += 1.0;
      }

      IterationRecord rec;
      rec.iter = i;
      rec.v_pi1 = policy_value(mdp, pi);
      rec.v_star = v_star;
      rec.ret1 = t.episode_return;
      log.records.push_back(rec);
      if (opt.keep_policies) log.policies.push_back(pi);
      if (opt.keep_features) log.features.push_back(t.visits);
    });
  }
  return log;
}

RunLog run_random(const Environment& env, const RunOptions& opt, Rng& rng) {
  const TabularMdp& mdp = env.mdp;
  RunLog log;
  log.algorithm = "random";
  log.env_fingerprint = fingerprint(mdp);
  if (opt.iterations <= 0) return log;

  Rng learner(split_seeds(rng).learner);
  std::uniform_int_distribution<int> pick(0, mdp.num_actions() - 1);
  const double v_star = optimal_value(mdp);
  for (int i = 1; i <= opt.iterations; ++i) {
    guarded(i, [&] {
      Policy pi(mdp.num_states(), mdp.horizon());
      for (int s = 0; s < mdp.num_states(); ++s) {
        for (int t = 0; t < mdp.horizon(); ++t) pi.set_action(s, t, pick(learner));
      }
      const Trajectory traj = rollout(mdp, pi, learner);
      IterationRecord rec;
      rec.iter = i;
      rec.v_pi1 = policy_value(mdp, pi);
      rec.v_star = v_star;
      rec.ret1 = traj.episode_return;
      log.records.push_back(rec);
      if (opt.keep_policies) log.policies.push_back(pi);
      if (opt.keep_features) log.features.push_back(traj.visits);
    });
  }
  return log;
}

void write_jsonl(std::ostream& out, const RunLog& log) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  for (const IterationRecord& r : log.records) {
    nlohmann::ordered_json j;
    j["iter"] = r.iter;
    j["v_pi1"] = r.v_pi1;
    j["v_pi2"] = opt(r.v_pi2);
    j["v_star"] = r.v_star;
    j["ret1"] = r.ret1;
    j["ret2"] = opt(r.ret2);
    j["y"] = opt(r.y);
    out << j.dump() << '\n';
  }
}

}  // namespace duelps
