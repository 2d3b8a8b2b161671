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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace duelps {

double link_eval(const LinkFunction& link, double u) {
  if (link.kind != LinkKind::kIdeal && !(link.c > 0.0)) {
    throw ConfigError("oracle", "link temperature must be positive");
  }
  switch (link.kind) {
    case LinkKind::kIdeal:
      return u > 0.0 ? 0.5 : (u < 0.0 ? -0.5 : 0.0);
    case LinkKind::kLogistic:
      // sigma(z) - 1/2 == tanh(z / 2) / 2, exactly odd in z.
      return 0.5 * std::tanh(0.5 * u / link.c);
    case LinkKind::kLinear:
      return std::clamp(u / link.c, -0.5, 0.5);
  }
  return 0.0;
}

PreferenceRecord sample_preference(const LinkFunction& link, const Vector& true_rewards,
                                   const Trajectory& first, const Trajectory& second,
                                   Rng& rng) {
  const double u = true_rewards.dot(second.visits) - true_rewards.dot(first.visits);
  const double p_second = link_eval(link, u) + 0.5;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double y = unif(rng) < p_second ? kSecondPreferred : kFirstPreferred;
  return {first.visits, second.visits, y};
}

std::string OracleSpec::to_string() const {
  if (human) return "human";
  switch (link) {
    case LinkKind::kIdeal: return "ideal";
    case LinkKind::kLinear:
      if (auto_temperature) return "linear:auto";
      [[fallthrough]];
    case LinkKind::kLogistic: {
      std::ostringstream out;
      out << (link == LinkKind::kLinear ? "linear:" : "logistic:") << c;
      return out.str();
    }
  }
  return "";
}

OracleSpec parse_oracle_spec(std::string_view text) {
  OracleSpec spec;
  if (text == "human") {
    spec.human = true;
    return spec;
  }
  if (text == "ideal") {
    spec.link = LinkKind::kIdeal;
    return spec;
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("oracle", "expected ideal, human, logistic:<c> or linear:<c|auto>");
  }
  const auto kind = text.substr(0, colon);
  const auto arg = text.substr(colon + 1);
  if (kind == "logistic") {
    spec.link = LinkKind::kLogistic;
  } else if (kind == "linear") {
    spec.link = LinkKind::kLinear;
    if (arg == "auto") {
      spec.auto_temperature = true;
      return spec;
    }
  } else {
    throw ConfigError("oracle", "unknown link '" + std::string(kind) + "'");
  }
  double c = 0.0;
  const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), c);
  if (ec != std::errc() || ptr != arg.data() + arg.size() || !(c > 0.0)) {
    throw ConfigError("oracle", "temperature must be a positive number");
  }
  spec.c = c;
  return spec;
}

LinkFunction resolve_link(const OracleSpec& spec, const TabularMdp& mdp) {
  if (spec.human) throw ConfigError("oracle", "the human oracle is only served by the duel service");
  switch (spec.link) {
    case LinkKind::kIdeal: return LinkFunction::ideal();
    case LinkKind::kLogistic: return LinkFunction::logistic(spec.c);
    case LinkKind::kLinear: {
      if (!spec.auto_temperature) return LinkFunction::linear(spec.c);
      const Vector& r = mdp.rewards();
      const double spread = r.maxCoeff() - r.minCoeff();
      if (!(spread > 0.0)) throw ConfigError("oracle", "linear:auto needs non-constant rewards");
      return LinkFunction::linear(2.0 * mdp.horizon() * spread);
    }
  }
  throw ConfigError("oracle", "unknown link");
}

std::vector<OracleSpec> noise_presets(EnvKind kind) {
  const std::vector<double> temps = kind == EnvKind::kMountainCar
                                        ? std::vector<double>{100.0, 20.0, 10.0, 0.0001}
                                        : std::vector<double>{10.0, 2.0, 1.0, 0.0001};
  std::vector<OracleSpec> out;
  for (double c : temps) {
    OracleSpec s;
    s.link = LinkKind::kLogistic;
    s.c = c;
    out.push_back(s);
  }
  OracleSpec lin;
  lin.link = LinkKind::kLinear;
  lin.auto_temperature = true;
  out.push_back(lin);
  return out;
}

double ScriptedOracle::prefer(const Trajectory&, const Trajectory&) {
  if (next_ >= choices_.size()) throw std::out_of_range("scripted oracle ran out of choices");
  const int choice = choices_[next_++];
  return choice == 2 ? kSecondPreferred : kFirstPreferred;
}

}  // namespace duelps
