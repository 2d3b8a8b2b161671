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
#include <map>
#include <string>
#include <string_view>

#include "duelps/mdp.hpp"

namespace duelps {

enum class EnvKind { kRiverSwim, kRandomMdp, kMountainCar };

std::string_view to_string(EnvKind kind);
/// Throws ConfigError("env.kind") for unknown names.
EnvKind parse_env_kind(std::string_view name);

/// Which environment to build. `overrides` replaces named constants; the
/// accepted names depend on the kind and are checked by make_environment.
struct EnvSpec {
  EnvKind kind = EnvKind::kRiverSwim;
  std::uint64_t seed = 0;
  std::map<std::string, double> overrides;
};

/// A constructed benchmark: the hidden MDP plus what a learner may know
/// about the state-action space.
struct Environment {
  EnvSpec spec;
  TabularMdp mdp;
  /// One row per state-action pair; the coordinates the GP kernels use.
  /// RiverSwim and random MDPs: (state, action). Mountain Car:
  /// (position bin, velocity bin, action).
  Matrix coords;
  /// Whether per-episode performance is reported as a fraction of the
  /// optimal value (false for Mountain Car, whose returns are negative).
  bool ratio_normalized = true;
};

Environment make_environment(const EnvSpec& spec);

// RiverSwim ------------------------------------------------------------

struct RiverSwimParams {
  int num_states = 6;
  int horizon = 50;
  double small_reward = 0.005;  // leftmost state, action 0
  double large_reward = 1.0;    // rightmost state, action 1
  double p_right = 0.35;        // action 1, interior states
  double p_stay = 0.60;
  // p_left = 1 - p_right - p_stay. At the left end the blocked left move
  // stays; at the right end the car stays with p_stay and drifts left
  // otherwise.
};

TabularMdp make_riverswim(const RiverSwimParams& params = {});

// Random MDPs ------------------------------------------------------------

struct RandomMdpParams {
  int num_states = 10;
  int num_actions = 5;
  int horizon = 50;
  double dirichlet_alpha = 0.1;
  double reward_rate = 5.0;
};

/// Dirichlet(alpha) transition rows and Exponential(rate) utilities,
/// shifted and scaled to min 0 and mean 1; uniform initial state.
TabularMdp make_random_mdp(std::uint64_t seed, const RandomMdpParams& params = {});

// Mountain Car -----------------------------------------------------------

struct MountainCarParams {
  int position_bins = 10;
  int velocity_bins = 10;
  int horizon = 500;
  double step_reward = -1.0;
  /// Sample points per dimension inside each cell whose one-step images
  /// define the cell's transition row. 1 steps only the cell center.
  int samples_per_dim = 5;
};

namespace mountain_car {
inline constexpr double kMinPosition = -1.2;
inline constexpr double kMaxPosition = 0.6;
inline constexpr double kMaxSpeed = 0.07;
inline constexpr double kGoalPosition = 0.5;
inline constexpr double kForce = 0.001;
inline constexpr double kGravity = 0.0025;

struct CarState {
  double position;
  double velocity;
};

/// One step of the continuous dynamics; action 0 = left, 1 = neutral,
/// 2 = right.
CarState step(CarState state, int action);
}  // namespace mountain_car

TabularMdp make_mountain_car(const MountainCarParams& params = {});

}  // namespace duelps
