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

#include <string>
#include <string_view>
#include <vector>

#include "duelps/environments.hpp"
#include "duelps/mdp.hpp"

namespace duelps {

/// Label values: +1/2 when the second trajectory wins.
inline constexpr double kSecondPreferred = 0.5;
inline constexpr double kFirstPreferred = -0.5;

enum class LinkKind { kIdeal, kLogistic, kLinear };

/// Maps a utility difference u = U(second) - U(first) to
/// P(second preferred) - 1/2.
///
///   ideal:     sign(u) / 2, and 0 at u == 0 so ties are coin flips
///   logistic:  1 / (1 + exp(-u / c)) - 1/2
///   linear:    u / c, clipped to [-1/2, 1/2]
struct LinkFunction {
  LinkKind kind = LinkKind::kLogistic;
  double c = 1.0;

  static LinkFunction ideal() { return {LinkKind::kIdeal, 1.0}; }
  static LinkFunction logistic(double c) { return {LinkKind::kLogistic, c}; }
  static LinkFunction linear(double c) { return {LinkKind::kLinear, c}; }
};

double link_eval(const LinkFunction& link, double utility_difference);

/// One duel as seen by the learner.
struct PreferenceRecord {
  Vector x1;
  Vector x2;
  double y = 0.0;
};

/// Draws y = +1/2 with probability g(r'x2 - r'x1) + 1/2.
PreferenceRecord sample_preference(const LinkFunction& link, const Vector& true_rewards,
                                   const Trajectory& first, const Trajectory& second,
                                   Rng& rng);

/// Parsed form of an oracle string: "ideal", "logistic:<c>",
/// "linear:<c>", "linear:auto" or "human".
struct OracleSpec {
  bool human = false;
  LinkKind link = LinkKind::kLogistic;
  double c = 1.0;
  /// linear:auto, c = 2 h (max r - min r) for the environment at hand.
  bool auto_temperature = false;

  std::string to_string() const;
};

OracleSpec parse_oracle_spec(std::string_view text);

/// Resolves auto temperatures against the true MDP. Throws ConfigError for
/// the human oracle, which has no link function.
LinkFunction resolve_link(const OracleSpec& spec, const TabularMdp& mdp);

/// The five noise settings used in the benchmarks: four logistic
/// temperatures plus the linear model with automatic temperature.
std::vector<OracleSpec> noise_presets(EnvKind kind);

/// Anything that answers duels. Returns the label y.
class PreferenceOracle {
 public:
  virtual ~PreferenceOracle() = default;
  virtual double prefer(const Trajectory& first, const Trajectory& second) = 0;
};

/// Simulated user driven by the hidden utilities.
class SimulatedOracle final : public PreferenceOracle {
 public:
  SimulatedOracle(LinkFunction link, Vector true_rewards, Rng rng)
      : link_(link), rewards_(std::move(true_rewards)), rng_(std::move(rng)) {}

  double prefer(const Trajectory& first, const Trajectory& second) override {
    return sample_preference(link_, rewards_, first, second, rng_).y;
  }

 private:
  LinkFunction link_;
  Vector rewards_;
  Rng rng_;
};

/// Replays fixed choices (1 = first, 2 = second); used to mirror a human
/// session in-process.
class ScriptedOracle final : public PreferenceOracle {
 public:
  explicit ScriptedOracle(std::vector<int> choices) : choices_(std::move(choices)) {}

  double prefer(const Trajectory&, const Trajectory&) override;

 private:
  std::vector<int> choices_;
  std::size_t next_ = 0;
};

}  // namespace duelps
