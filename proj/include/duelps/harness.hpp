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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "duelps/engine.hpp"

namespace duelps {

enum class Algorithm { kDps, kPsrl, kRandom };

std::string_view to_string(Algorithm algorithm);

struct ExperimentConfig {
  EnvSpec env;
  Algorithm algorithm = Algorithm::kDps;
  CreditConfig credit;
  double psrl_prior_var = 1.0;
  double psrl_noise_var = 1.0;
  double dynamics_prior = 1.0;
  OracleSpec oracle;
  int iterations = 0;
  int num_runs = 1;
  std::uint64_t seed = 0;
  /// Explicit per-run seeds; when nonempty num_runs equals its size.
  std::vector<std::uint64_t> seeds;
  bool known_dynamics = false;
  std::string output;

  std::uint64_t run_seed(int run) const;
  /// Random MDP instances advance their seed with the run index; the other
  /// benchmarks are fixed.
  EnvSpec run_env(int run) const;
};

/// Builds a config from a JSON document. Hyperparameters start from the
/// benchmark defaults and are overridden key by key; unknown keys raise
/// ConfigError with the offending field path.
ExperimentConfig parse_experiment(const nlohmann::json& doc, bool require_oracle = true);
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Applies hyperparameter overrides for `credit.kind` onto `credit`.
void apply_hyperparams(CreditConfig& credit, const nlohmann::json& hyperparams);

RunLog run_single(const ExperimentConfig& config, int run);

/// Partial sums of 2 V* - V(pi1) - V(pi2), or V* - V(pi) for single-policy
/// logs. Throws InvalidModelError if the log came from a different MDP.
std::vector<double> regret_curve(const RunLog& log, const TabularMdp& mdp);

/// Per-iteration mean true return of the episode's trajectories, divided by
/// V* when `ratio` is set.
std::vector<double> normalized_reward(const RunLog& log, const TabularMdp& mdp, bool ratio);

struct BatchRow {
  int iter = 0;
  double mean_norm_reward = 0.0;
  double std_norm_reward = 0.0;
  double mean_cum_regret = 0.0;
  double std_cum_regret = 0.0;

  bool operator==(const BatchRow&) const = default;
};

struct RunFailure {
  int run = 0;
  std::string message;
};

struct BatchResult {
  /// Indexed by run; empty for failed runs.
  std::vector<std::optional<RunLog>> logs;
  std::vector<std::vector<double>> norm_reward;
  std::vector<std::vector<double>> cum_regret;
  std::vector<RunFailure> failures;
  std::vector<BatchRow> rows;
};

/// Mean and population standard deviation across runs per iteration;
/// `series` is indexed [run][iteration].
std::vector<BatchRow> aggregate(const std::vector<std::vector<double>>& norm_reward,
                                const std::vector<std::vector<double>>& cum_regret);

/// Runs every seed on up to `jobs` threads. Failed runs are reported and
/// excluded from the aggregates.
BatchResult run_batch(const ExperimentConfig& config, int jobs = 1);

void write_csv(std::ostream& out, const std::vector<BatchRow>& rows);
std::vector<BatchRow> read_csv(std::istream& in);

/// Human-readable summary of a batch CSV.
void write_report(std::ostream& out, const std::vector<BatchRow>& rows);

}  // namespace duelps
