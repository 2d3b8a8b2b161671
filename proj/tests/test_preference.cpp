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

#include "duelps/preference.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

using namespace duelps;

namespace {

// Two-state, one-action MDP whose single step pays r(s).
Trajectory visit(int state, const TabularMdp& mdp) {
  return make_trajectory(mdp, {state, state}, {0});
}

TabularMdp two_rewards(double r0, double r1) {
  Transitions p(2, 1);
  p(0, 0, 0) = 1.0;
  p(1, 0, 1) = 1.0;
  Vector r(2);
  r << r0, r1;
  return TabularMdp(1, Vector::Constant(2, 0.5), p, r);
}

double second_rate(const LinkFunction& link, const TabularMdp& mdp, const Trajectory& a,
                   const Trajectory& b, int n, Rng& rng) {
  int wins = 0;
  for (int i = 0; i < n; ++i) {
    const double y = sample_preference(link, mdp.rewards(), a, b, rng).y;
    REQUIRE((y == kSecondPreferred || y == kFirstPreferred));
    wins += y == kSecondPreferred;
  }
  return static_cast<double>(wins) / n;
}

}  // namespace

TEST_CASE("link values") {
  CHECK(link_eval(LinkFunction::logistic(1.0), 0.0) == 0.0);
  CHECK(link_eval(LinkFunction::ideal(), 0.3) == 0.5);
  CHECK(link_eval(LinkFunction::ideal(), -0.3) == -0.5);
  CHECK(link_eval(LinkFunction::ideal(), 0.0) == 0.0);
  CHECK(link_eval(LinkFunction::logistic(1.0), 1.0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.0)) - 0.5));
  CHECK(link_eval(LinkFunction::linear(4.0), 1.0) == 0.25);
  CHECK(link_eval(LinkFunction::linear(4.0), 9.0) == 0.5);
  CHECK(link_eval(LinkFunction::logistic(1e-4), 1.0) == 0.5);
  CHECK_THROWS_AS(link_eval(LinkFunction::logistic(0.0), 1.0), ConfigError);
  CHECK_THROWS_AS(link_eval(LinkFunction::linear(-1.0), 1.0), ConfigError);
}

TEST_CASE("links are non-decreasing, odd and bounded") {
  for (const LinkFunction& g : {LinkFunction::ideal(), LinkFunction::logistic(0.5),
                                LinkFunction::logistic(10.0), LinkFunction::linear(3.0)}) {
    double prev = -1.0;
    for (double u = -5.0; u <= 5.0 + 1e-9; u += 0.01) {
      const double v = link_eval(g, u);
      CHECK(v >= prev);
      CHECK(std::abs(v + link_eval(g, -u)) <= 1e-15);
      CHECK(std::abs(v) <= 0.5);
      prev = v;
    }
  }
}

TEST_CASE("equal trajectories are coin flips") {
  const TabularMdp mdp = two_rewards(0.0, 1.0);
  Rng rng(1);
  const double p = second_rate(LinkFunction::logistic(1.0), mdp, visit(1, mdp), visit(1, mdp),
                               100000, rng);
  CHECK(std::abs(p - 0.5) <= 3.0 * std::sqrt(0.25 / 1e5));
  const double q =
      second_rate(LinkFunction::ideal(), mdp, visit(0, mdp), visit(0, mdp), 100000, rng);
  CHECK(std::abs(q - 0.5) <= 3.0 * std::sqrt(0.25 / 1e5));
}

TEST_CASE("logistic preference rates") {
  const TabularMdp mdp = two_rewards(0.0, 1.0);
  Rng rng(2);
  CHECK(second_rate(LinkFunction::logistic(1e-4), mdp, visit(0, mdp), visit(1, mdp), 10000, rng) >=
        0.999);
  const double expected = 1.0 / (1.0 + std::exp(-1.0));
  CHECK(expected == doctest::Approx(0.7311).epsilon(1e-4));
  const double p =
      second_rate(LinkFunction::logistic(1.0), mdp, visit(0, mdp), visit(1, mdp), 100000, rng);
  CHECK(std::abs(p - expected) <= 3.0 * std::sqrt(expected * (1 - expected) / 1e5));
  // Swapping the pair mirrors the probability.
  const double q =
      second_rate(LinkFunction::logistic(1.0), mdp, visit(1, mdp), visit(0, mdp), 100000, rng);
  CHECK(std::abs(q - (1.0 - expected)) <= 3.0 * std::sqrt(expected * (1 - expected) / 1e5));
}

TEST_CASE("label noise is conditionally zero-mean") {
  const TabularMdp mdp = two_rewards(0.2, 0.9);
  const LinkFunction g = LinkFunction::logistic(0.5);
  Rng rng(3);
  oracle::Welford w;
  const double offset = link_eval(g, 0.7);
  for (int i = 0; i < 100000; ++i) {
    w.add(sample_preference(g, mdp.rewards(), visit(0, mdp), visit(1, mdp), rng).y - offset);
  }
  CHECK(std::abs(w.mean()) <= 3.0 * w.stddev() / std::sqrt(1e5));
}

TEST_CASE("oracle specs") {
  CHECK(parse_oracle_spec("ideal").link == LinkKind::kIdeal);
  const OracleSpec lg = parse_oracle_spec("logistic:0.0001");
  CHECK(lg.link == LinkKind::kLogistic);
  CHECK(lg.c == 0.0001);
  CHECK(parse_oracle_spec("linear:auto").auto_temperature);
  CHECK(parse_oracle_spec("human").human);
  CHECK(parse_oracle_spec(lg.to_string()).c == lg.c);
  for (const char* bad : {"", "logistic", "logistic:0", "logistic:-1", "cubic:2", "linear:x"}) {
    try {
      parse_oracle_spec(bad);
      FAIL("accepted " << bad);
    } catch (const ConfigError& e) {
      CHECK(e.field() == "oracle");
    }
  }
}

TEST_CASE("linear auto temperature keeps probabilities valid") {
  const Environment mc = make_environment({EnvKind::kMountainCar, 0, {}});
  const LinkFunction g = resolve_link(parse_oracle_spec("linear:auto"), mc.mdp);
  CHECK(g.kind == LinkKind::kLinear);
  CHECK(g.c == doctest::Approx(2.0 * 500 * 1.0));
  // Any two Mountain Car returns differ by at most h * spread.
  CHECK(std::abs(link_eval(g, -500.0)) <= 0.5);
  CHECK(link_eval(g, -500.0) == -0.5);

  const Environment rs = make_environment({EnvKind::kRiverSwim, 0, {}});
  CHECK(resolve_link(parse_oracle_spec("linear:auto"), rs.mdp).c == doctest::Approx(100.0));
  CHECK_THROWS_AS(resolve_link(parse_oracle_spec("human"), rs.mdp), ConfigError);
}

TEST_CASE("noise presets") {
  const auto rs = noise_presets(EnvKind::kRiverSwim);
  REQUIRE(rs.size() == 5);
  CHECK(rs[0].c == 10.0);
  CHECK(rs[3].c == 0.0001);
  CHECK(rs[4].auto_temperature);
  const auto mc = noise_presets(EnvKind::kMountainCar);
  REQUIRE(mc.size() == 5);
  CHECK(mc[0].c == 100.0);
  CHECK(mc[2].c == 10.0);
}

TEST_CASE("scripted oracle replays choices") {
  ScriptedOracle o({2, 1, 2});
  const TabularMdp mdp = two_rewards(0.0, 1.0);
  const Trajectory t = visit(0, mdp);
  CHECK(o.prefer(t, t) == kSecondPreferred);
  CHECK(o.prefer(t, t) == kFirstPreferred);
  CHECK(o.prefer(t, t) == kSecondPreferred);
  CHECK_THROWS(o.prefer(t, t));
}
