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

#include "duelps/environments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "duelps/sampling.hpp"

namespace duelps {

namespace {

// Applies `overrides` onto named fields, rejecting unknown names.
class OverrideReader {
 public:
  explicit OverrideReader(const std::map<std::string, double>& overrides)
      : overrides_(overrides) {}

  void real(const std::string& name, double& field, double lo, double hi) {
    auto it = overrides_.find(name);
    if (it == overrides_.end()) return;
    if (!(it->second >= lo && it->second <= hi)) {
      throw ConfigError("env.overrides." + name, "value out of range");
    }
    field = it->second;
    ++used_;
  }

  void integer(const std::string& name, int& field, int lo, int hi) {
    auto it = overrides_.find(name);
    if (it == overrides_.end()) return;
    const double v = it->second;
    if (v != std::floor(v) || v < lo || v > hi) {
      throw ConfigError("env.overrides." + name, "expected an integer in range");
    }
    field = static_cast<int>(v);
    ++used_;
  }

  void finish() const {
    if (used_ == overrides_.size()) return;
    for (const auto& [name, value] : overrides_) {
      (void)value;
      throw ConfigError("env.overrides." + name, "unknown constant for this environment");
    }
  }

 private:
  const std::map<std::string, double>& overrides_;
  std::size_t used_ = 0;
};

Matrix state_action_grid(int num_states, int num_actions) {
  Matrix coords(num_states * num_actions, 2);
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      coords.row(sa_index(s, a, num_actions)) << s, a;
    }
  }
  return coords;
}

}  // namespace

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kRiverSwim: return "riverswim";
    case EnvKind::kRandomMdp: return "random_mdp";
    case EnvKind::kMountainCar: return "mountain_car";
  }
  return "unknown";
}

EnvKind parse_env_kind(std::string_view name) {
  if (name == "riverswim") return EnvKind::kRiverSwim;
  if (name == "random_mdp") return EnvKind::kRandomMdp;
  if (name == "mountain_car") return EnvKind::kMountainCar;
  throw ConfigError("env.kind", "unknown environment '" + std::string(name) + "'");
}

TabularMdp make_riverswim(const RiverSwimParams& params) {
  const int S = params.num_states;
  const int A = 2;
  if (S < 2) throw InvalidModelError("RiverSwim needs at least two states");
  const double p_left = 1.0 - params.p_right - params.p_stay;
  if (params.p_right < 0 || params.p_stay < 0 || p_left < -1e-12) {
    throw InvalidModelError("RiverSwim drift probabilities must form a distribution");
  }

  Transitions p(S, A);
  for (int s = 0; s < S; ++s) {
    p(s, 0, std::max(s - 1, 0)) = 1.0;
    if (s == 0) {
      p(s, 1, 0) = params.p_stay + std::max(p_left, 0.0);
      p(s, 1, 1) = params.p_right;
    } else if (s == S - 1) {
      p(s, 1, s) = params.p_stay;
      p(s, 1, s - 1) = 1.0 - params.p_stay;
    } else {
      p(s, 1, s - 1) = std::max(p_left, 0.0);
      p(s, 1, s) = params.p_stay;
      p(s, 1, s + 1) = params.p_right;
    }
  }

  Vector rewards = Vector::Zero(S * A);
  rewards(sa_index(0, 0, A)) = params.small_reward;
  rewards(sa_index(S - 1, 1, A)) = params.large_reward;

  Vector p0 = Vector::Zero(S);
  p0(0) = 1.0;
  return TabularMdp(params.horizon, std::move(p0), std::move(p), std::move(rewards));
}

TabularMdp make_random_mdp(std::uint64_t seed, const RandomMdpParams& params) {
  const int S = params.num_states;
  const int A = params.num_actions;
  Rng rng(seed);

  Transitions p(S, A);
  const std::vector<double> alpha(static_cast<std::size_t>(S), params.dirichlet_alpha);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) sample_dirichlet(alpha, p.row(s, a), rng);
  }

  std::exponential_distribution<double> expo(params.reward_rate);
  Vector rewards(S * A);
  for (int k = 0; k < S * A; ++k) rewards(k) = expo(rng);
  rewards.array() -= rewards.minCoeff();
  const double mean = rewards.mean();
  if (!(mean > 0.0)) throw InvalidModelError("degenerate random rewards");
  rewards /= mean;

  Vector p0 = Vector::Constant(S, 1.0 / S);
  return TabularMdp(params.horizon, std::move(p0), std::move(p), std::move(rewards));
}

namespace mountain_car {

CarState step(CarState state, int action) {
  double v = state.velocity + kForce * (action - 1) - kGravity * std::cos(3.0 * state.position);
  v = std::clamp(v, -kMaxSpeed, kMaxSpeed);
  double x = std::clamp(state.position + v, kMinPosition, kMaxPosition);
  return {x, v};
}

}  // namespace mountain_car

TabularMdp make_mountain_car(const MountainCarParams& params) {
  using namespace mountain_car;
  const int P = params.position_bins;
  const int V = params.velocity_bins;
  const int S = P * V;
  const int A = 3;
  const int n = params.samples_per_dim;
  if (P < 2 || V < 1 || n < 1) throw InvalidModelError("bad Mountain Car discretization");

  const double pos_width = (kMaxPosition - kMinPosition) / P;
  const double vel_width = 2.0 * kMaxSpeed / V;
  auto pos_bin = [&](double x) {
    return std::clamp(static_cast<int>(std::floor((x - kMinPosition) / pos_width)), 0, P - 1);
  };
  auto vel_bin = [&](double v) {
    return std::clamp(static_cast<int>(std::floor((v + kMaxSpeed) / vel_width)), 0, V - 1);
  };
  auto cell = [&](int pb, int vb) { return pb * V + vb; };
  const int goal_bin = pos_bin(kGoalPosition);

  std::vector<bool> terminal(static_cast<std::size_t>(S), false);
  for (int pb = goal_bin; pb < P; ++pb) {
    for (int vb = 0; vb < V; ++vb) terminal[static_cast<std::size_t>(cell(pb, vb))] = true;
  }

  Transitions p(S, A);
  const double weight = 1.0 / (n * n);
  for (int pb = 0; pb < P; ++pb) {
    for (int vb = 0; vb < V; ++vb) {
      const int s = cell(pb, vb);
      for (int a = 0; a < A; ++a) {
        if (terminal[static_cast<std::size_t>(s)]) {
          p(s, a, s) = 1.0;
          continue;
        }
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const CarState from{kMinPosition + pos_width * (pb + (i + 0.5) / n),
                                -kMaxSpeed + vel_width * (vb + (j + 0.5) / n)};
            const CarState to = step(from, a);
            p(s, a, cell(pos_bin(to.position), vel_bin(to.velocity))) += weight;
          }
        }
      }
    }
  }

  Vector rewards = Vector::Zero(S * A);
  int live = 0;
  for (int s = 0; s < S; ++s) {
    if (terminal[static_cast<std::size_t>(s)]) continue;
    ++live;
    for (int a = 0; a < A; ++a) rewards(sa_index(s, a, A)) = params.step_reward;
  }
  Vector p0 = Vector::Zero(S);
  for (int s = 0; s < S; ++s) {
    if (!terminal[static_cast<std::size_t>(s)]) p0(s) = 1.0 / live;
  }
  return TabularMdp(params.horizon, std::move(p0), std::move(p), std::move(rewards),
                    std::move(terminal));
}

Environment make_environment(const EnvSpec& spec) {
  OverrideReader read(spec.overrides);
  switch (spec.kind) {
    case EnvKind::kRiverSwim: {
      RiverSwimParams params;
      read.integer("num_states", params.num_states, 2, 1000);
      read.integer("horizon", params.horizon, 1, 100000);
      read.real("small_reward", params.small_reward, -1e6, 1e6);
      read.real("large_reward", params.large_reward, -1e6, 1e6);
      read.real("p_right", params.p_right, 0.0, 1.0);
      read.real("p_stay", params.p_stay, 0.0, 1.0);
      read.finish();
      TabularMdp mdp = make_riverswim(params);
      Matrix coords = state_action_grid(mdp.num_states(), mdp.num_actions());
      return {spec, std::move(mdp), std::move(coords), true};
    }
    case EnvKind::kRandomMdp: {
      RandomMdpParams params;
      read.integer("num_states", params.num_states, 1, 1000);
      read.integer("num_actions", params.num_actions, 1, 100);
      read.integer("horizon", params.horizon, 1, 100000);
      read.real("dirichlet_alpha", params.dirichlet_alpha, 1e-12, 1e12);
      read.real("reward_rate", params.reward_rate, 1e-12, 1e12);
      read.finish();
      TabularMdp mdp = make_random_mdp(spec.seed, params);
      Matrix coords = state_action_grid(mdp.num_states(), mdp.num_actions());
      return {spec, std::move(mdp), std::move(coords), true};
    }
    case EnvKind::kMountainCar: {
      MountainCarParams params;
      read.integer("position_bins", params.position_bins, 2, 1000);
      read.integer("velocity_bins", params.velocity_bins, 1, 1000);
      read.integer("horizon", params.horizon, 1, 100000);
      read.real("step_reward", params.step_reward, -1e6, 1e6);
      read.integer("samples_per_dim", params.samples_per_dim, 1, 100);
      read.finish();
      TabularMdp mdp = make_mountain_car(params);
      const int A = mdp.num_actions();
      Matrix coords(mdp.num_state_actions(), 3);
      for (int pb = 0; pb < params.position_bins; ++pb) {
        for (int vb = 0; vb < params.velocity_bins; ++vb) {
          const int s = pb * params.velocity_bins + vb;
          for (int a = 0; a < A; ++a) coords.row(sa_index(s, a, A)) << pb, vb, a;
        }
      }
      return {spec, std::move(mdp), std::move(coords), false};
    }
  }
  throw ConfigError("env.kind", "unknown environment");
}

}  // namespace duelps
