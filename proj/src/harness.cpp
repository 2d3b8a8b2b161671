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

#include "duelps/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

namespace duelps {

using nlohmann::json;

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kDps: return "dps";
    case Algorithm::kPsrl: return "psrl";
    case Algorithm::kRandom: return "random";
  }
  return "unknown";
}

std::uint64_t ExperimentConfig::run_seed(int run) const {
  if (!seeds.empty()) return seeds.at(static_cast<std::size_t>(run));
  return seed + static_cast<std::uint64_t>(run);
}

EnvSpec ExperimentConfig::run_env(int run) const {
  EnvSpec spec = env;
  if (spec.kind == EnvKind::kRandomMdp) spec.seed += static_cast<std::uint64_t>(run);
  return spec;
}

namespace {

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected a boolean");
  return j.get<bool>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
  const std::int64_t v = get_integer(j, path);
  if (v < 0) throw ConfigError(path, "must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> get_lengthscales(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a number or an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

EnvSpec parse_env(const json& j) {
  require_object(j, "env");
  EnvSpec spec;
  if (!j.contains("kind")) throw ConfigError("env.kind", "missing");
  for (const auto& [key, value] : j.items()) {
    const std::string path = "env." + key;
    if (key == "kind") {
      spec.kind = parse_env_kind(get_string(value, path));
    } else if (key == "seed") {
      spec.seed = get_seed(value, path);
    } else if (key == "overrides") {
      require_object(value, path);
      for (const auto& [name, v] : value.items()) {
        spec.overrides[name] = get_number(v, path + "." + name);
      }
    } else {
      throw ConfigError(path, "unknown key");
    }
  }
  return spec;
}

}  // namespace

void apply_hyperparams(CreditConfig& credit, const json& hyperparams) {
  require_object(hyperparams, "hyperparams");
  bool kernel_prior = false;
  for (const auto& [key, value] : hyperparams.items()) {
    const std::string path = "hyperparams." + key;
    bool known = false;
    switch (credit.kind) {
      case CreditKind::kBlr:
        known = true;
        if (key == "sigma") {
          credit.blr.sigma = get_number(value, path);
        } else if (key == "lambda") {
          credit.blr.lambda = get_number(value, path);
        } else if (key == "mode") {
          const std::string mode = get_string(value, path);
          if (mode == "practical") {
            credit.blr.mode = BlrMode::kPractical;
          } else if (mode == "theory") {
            credit.blr.mode = BlrMode::kTheory;
          } else {
            throw ConfigError(path, "expected 'practical' or 'theory'");
          }
        } else if (key == "delta") {
          credit.blr.delta = get_number(value, path);
        } else if (key == "R") {
          credit.blr.noise_scale = get_number(value, path);
        } else if (key == "S_r") {
          credit.blr.norm_bound = get_number(value, path);
        } else {
          known = false;
        }
        break;
      case CreditKind::kGpr:
        known = true;
        if (key == "sigma_f2") {
          credit.kernel.sigma_f2 = get_number(value, path);
        } else if (key == "lengthscale") {
          credit.kernel.lengthscales = get_lengthscales(value, path);
        } else if (key == "sigma_n2") {
          credit.kernel.sigma_n2 = get_number(value, path);
        } else if (key == "sigma_eps2") {
          credit.sigma_eps2 = get_number(value, path);
        } else {
          known = false;
        }
        break;
      case CreditKind::kGpp:
        known = true;
        if (key == "c") {
          credit.gpp.c = get_number(value, path);
        } else if (key == "alpha") {
          credit.gpp.alpha = get_number(value, path);
        } else if (key == "link") {
          const std::string link = get_string(value, path);
          if (link == "sigmoid") {
            credit.gpp.link = PreferenceLink::kSigmoid;
          } else if (link == "gaussian_cdf") {
            credit.gpp.link = PreferenceLink::kGaussianCdf;
          } else {
            throw ConfigError(path, "expected 'sigmoid' or 'gaussian_cdf'");
          }
        } else if (key == "lambda") {
          credit.gpp_lambda = get_number(value, path);
        } else if (key == "sigma_f2") {
          credit.kernel.sigma_f2 = get_number(value, path);
          kernel_prior = true;
        } else if (key == "lengthscale") {
          credit.kernel.lengthscales = get_lengthscales(value, path);
          kernel_prior = true;
        } else if (key == "sigma_n2") {
          credit.kernel.sigma_n2 = get_number(value, path);
          kernel_prior = true;
        } else {
          known = false;
        }
        break;
    }
    if (!known) throw ConfigError(path, "not a hyperparameter of " + std::string(to_string(credit.kind)));
  }
  if (credit.kind == CreditKind::kGpp && kernel_prior) {
    if (hyperparams.contains("lambda")) {
      throw ConfigError("hyperparams.lambda", "conflicts with kernel hyperparameters");
    }
    credit.gpp_lambda.reset();
  }
}

ExperimentConfig parse_experiment(const json& doc, bool require_oracle) {
  require_object(doc, "config");
  static const std::set<std::string> kKeys = {
      "env", "algorithm", "credit", "hyperparams", "dynamics_prior", "oracle", "iterations",
      "num_runs", "seed", "seeds", "known_dynamics", "output"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError(key, "unknown key");
  }

  ExperimentConfig c;
  if (!doc.contains("env")) throw ConfigError("env", "missing");
  c.env = parse_env(doc["env"]);

  if (doc.contains("algorithm")) {
    const std::string name = get_string(doc["algorithm"], "algorithm");
    if (name == "dps") {
      c.algorithm = Algorithm::kDps;
    } else if (name == "psrl") {
      c.algorithm = Algorithm::kPsrl;
    } else if (name == "random") {
      c.algorithm = Algorithm::kRandom;
    } else {
      throw ConfigError("algorithm", "unknown algorithm '" + name + "'");
    }
  }

  CreditKind kind = CreditKind::kBlr;
  if (doc.contains("credit")) kind = parse_credit_kind(get_string(doc["credit"], "credit"));
  c.credit = default_credit(kind, c.env.kind);
  if (doc.contains("hyperparams")) {
    const json& hp = doc["hyperparams"];
    if (c.algorithm == Algorithm::kDps) {
      apply_hyperparams(c.credit, hp);
    } else {
      require_object(hp, "hyperparams");
      for (const auto& [key, value] : hp.items()) {
        const std::string path = "hyperparams." + key;
        if (c.algorithm == Algorithm::kPsrl && key == "prior_var") {
          c.psrl_prior_var = get_number(value, path);
        } else if (c.algorithm == Algorithm::kPsrl && key == "noise_var") {
          c.psrl_noise_var = get_number(value, path);
        } else {
          throw ConfigError(path, "not a hyperparameter of " + std::string(to_string(c.algorithm)));
        }
      }
    }
  }

  c.dynamics_prior = doc.contains("dynamics_prior")
                         ? get_number(doc["dynamics_prior"], "dynamics_prior")
                         : default_dynamics_prior(c.env.kind);
  if (!(c.dynamics_prior > 0.0)) throw ConfigError("dynamics_prior", "must be positive");

  if (doc.contains("oracle")) {
    c.oracle = parse_oracle_spec(get_string(doc["oracle"], "oracle"));
    if (c.oracle.human) throw ConfigError("oracle", "human oracle runs through the service");
  } else if (require_oracle && c.algorithm == Algorithm::kDps) {
    throw ConfigError("oracle", "missing");
  }

  if (!doc.contains("iterations")) {
    if (require_oracle) throw ConfigError("iterations", "missing");
  } else {
    const std::int64_t n = get_integer(doc["iterations"], "iterations");
    if (n < 0) throw ConfigError("iterations", "must be nonnegative");
    c.iterations = static_cast<int>(n);
  }
  if (doc.contains("num_runs")) {
    const std::int64_t n = get_integer(doc["num_runs"], "num_runs");
    if (n < 1) throw ConfigError("num_runs", "must be at least 1");
    c.num_runs = static_cast<int>(n);
  }
  if (doc.contains("seed")) c.seed = get_seed(doc["seed"], "seed");
  if (doc.contains("seeds")) {
    const json& s = doc["seeds"];
    if (!s.is_array() || s.empty()) throw ConfigError("seeds", "expected a nonempty array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      c.seeds.push_back(get_seed(s[i], "seeds[" + std::to_string(i) + "]"));
    }
    c.num_runs = static_cast<int>(c.seeds.size());
  }
  if (doc.contains("known_dynamics")) c.known_dynamics = get_bool(doc["known_dynamics"], "known_dynamics");
  if (doc.contains("output")) c.output = get_string(doc["output"], "output");

  // Surface hyperparameter errors now rather than inside a worker.
  const Environment env = make_environment(c.run_env(0));
  if (c.algorithm == Algorithm::kDps) {
    const bool has_norm_bound = doc.contains("hyperparams") && doc["hyperparams"].contains("S_r");
    if (c.credit.kind == CreditKind::kBlr && !has_norm_bound) {
      c.credit.blr.norm_bound = env.mdp.rewards().norm();
    }
    (void)make_reward_model(c.credit, env);
  }
  if (c.algorithm == Algorithm::kPsrl && (!(c.psrl_prior_var > 0.0) || !(c.psrl_noise_var > 0.0))) {
    throw ConfigError("hyperparams", "PSRL variances must be positive");
  }
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", e.what());
  }
  return parse_experiment(doc);
}

RunLog run_single(const ExperimentConfig& config, int run) {
  const Environment env = make_environment(config.run_env(run));
  Rng rng(config.run_seed(run));
  RunOptions opt;
  opt.iterations = config.iterations;
  opt.dynamics_prior = config.dynamics_prior;
  opt.known_dynamics = config.known_dynamics;
  switch (config.algorithm) {
    case Algorithm::kDps: {
      DpsConfig dps{config.credit, resolve_link(config.oracle, env.mdp), opt};
      return run_dps(env, dps, rng);
    }
    case Algorithm::kPsrl:
      return run_psrl(env, PsrlConfig{config.psrl_prior_var, config.psrl_noise_var, opt}, rng);
    case Algorithm::kRandom:
      return run_random(env, opt, rng);
  }
  throw ConfigError("algorithm", "unknown algorithm");
}

std::vector<double> regret_curve(const RunLog& log, const TabularMdp& mdp) {
  if (log.env_fingerprint != fingerprint(mdp)) {
    throw InvalidModelError("run log was produced on a different environment");
  }
  const double v_star = optimal_value(mdp);
  std::vector<double> out;
  out.reserve(log.records.size());
  double total = 0.0;
  for (const IterationRecord& r : log.records) {
    total += r.v_pi2 ? 2.0 * v_star - r.v_pi1 - *r.v_pi2 : v_star - r.v_pi1;
    out.push_back(total);
  }
  return out;
}

std::vector<double> normalized_reward(const RunLog& log, const TabularMdp& mdp, bool ratio) {
  if (log.env_fingerprint != fingerprint(mdp)) {
    throw InvalidModelError("run log was produced on a different environment");
  }
  double scale = 1.0;
  if (ratio) {
    scale = optimal_value(mdp);
    if (scale == 0.0) throw NumericError("optimal value is zero; ratio normalization undefined");
  }
  std::vector<double> out;
  out.reserve(log.records.size());
  for (const IterationRecord& r : log.records) {
    const double mean = r.ret2 ? 0.5 * (r.ret1 + *r.ret2) : r.ret1;
    out.push_back(ratio ? mean / scale : mean);
  }
  return out;
}

std::vector<BatchRow> aggregate(const std::vector<std::vector<double>>& norm_reward,
                                const std::vector<std::vector<double>>& cum_regret) {
  if (norm_reward.size() != cum_regret.size()) throw InvalidModelError("series count mismatch");
  if (norm_reward.empty()) return {};
  const std::size_t n = norm_reward.front().size();
  for (std::size_t r = 0; r < norm_reward.size(); ++r) {
    if (norm_reward[r].size() != n || cum_regret[r].size() != n) {
      throw InvalidModelError("series lengths differ across runs");
    }
  }
  auto moments = [](const std::vector<std::vector<double>>& series, std::size_t i) {
    double mean = 0.0;
    for (const auto& s : series) mean += s[i];
    mean /= static_cast<double>(series.size());
    double var = 0.0;
    for (const auto& s : series) var += (s[i] - mean) * (s[i] - mean);
    var /= static_cast<double>(series.size());
    return std::pair{mean, std::sqrt(var)};
  };
  std::vector<BatchRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].iter = static_cast<int>(i) + 1;
    std::tie(rows[i].mean_norm_reward, rows[i].std_norm_reward) = moments(norm_reward, i);
    std::tie(rows[i].mean_cum_regret, rows[i].std_cum_regret) = moments(cum_regret, i);
  }
  return rows;
}

BatchResult run_batch(const ExperimentConfig& config, int jobs) {
  const int runs = config.num_runs;
  BatchResult result;
  result.logs.resize(static_cast<std::size_t>(runs));
  std::vector<std::string> errors(static_cast<std::size_t>(runs));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int run = next++; run < runs; run = next++) {
      const auto idx = static_cast<std::size_t>(run);
      try {
        result.logs[idx] = run_single(config, run);
        spdlog::debug("run {} finished", run);
      } catch (const std::exception& e) {
        errors[idx] = e.what();
        spdlog::warn("run {} failed: {}", run, e.what());
      }
    }
  };
  const int threads = std::clamp(jobs, 1, runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (int run = 0; run < runs; ++run) {
    const auto idx = static_cast<std::size_t>(run);
    if (!result.logs[idx]) {
      result.failures.push_back({run, errors[idx]});
      continue;
    }
    const Environment env = make_environment(config.run_env(run));
    result.norm_reward.push_back(normalized_reward(*result.logs[idx], env.mdp, env.ratio_normalized));
    result.cum_regret.push_back(regret_curve(*result.logs[idx], env.mdp));
  }
  result.rows = aggregate(result.norm_reward, result.cum_regret);
  return result;
}

namespace {

constexpr const char* kCsvHeader = "iter,mean_norm_reward,std_norm_reward,mean_cum_regret,std_cum_regret";

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, int line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InvalidModelError("CSV line " + std::to_string(line) + ": bad number '" +
                            std::string(text) + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BatchRow>& rows) {
  out << kCsvHeader << '\n';
  for (const BatchRow& r : rows) {
    out << r.iter << ',' << shortest(r.mean_norm_reward) << ',' << shortest(r.std_norm_reward)
        << ',' << shortest(r.mean_cum_regret) << ',' << shortest(r.std_cum_regret) << '\n';
  }
}

std::vector<BatchRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw InvalidModelError("CSV header mismatch");
  }
  std::vector<BatchRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      cells.push_back(rest.substr(0, pos));
    }
    cells.push_back(rest);
    if (cells.size() != 5) throw InvalidModelError("CSV line " + std::to_string(lineno) + ": expected 5 cells");
    BatchRow r;
    r.iter = static_cast<int>(parse_double(cells[0], lineno));
    r.mean_norm_reward = parse_double(cells[1], lineno);
    r.std_norm_reward = parse_double(cells[2], lineno);
    r.mean_cum_regret = parse_double(cells[3], lineno);
    r.std_cum_regret = parse_double(cells[4], lineno);
    rows.push_back(r);
  }
  return rows;
}

void write_report(std::ostream& out, const std::vector<BatchRow>& rows) {
  if (rows.empty()) {
    out << "no iterations\n";
    return;
  }
  const std::size_t n = rows.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double tail_reward = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) tail_reward += rows[i].mean_norm_reward;
  tail_reward /= static_cast<double>(tail);

  out << std::left << std::setw(10) << "iter" << std::setw(24) << "norm_reward"
      << "cum_regret\n";
  std::vector<std::size_t> marks;
  for (std::size_t q = 1; q <= 4; ++q) marks.push_back(std::max<std::size_t>(n * q / 4, 1) - 1);
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  for (std::size_t i : marks) {
    std::ostringstream reward, regret;
    reward << std::fixed << std::setprecision(4) << rows[i].mean_norm_reward << " +- "
           << rows[i].std_norm_reward;
    regret << std::fixed << std::setprecision(3) << rows[i].mean_cum_regret << " +- "
           << rows[i].std_cum_regret;
    out << std::left << std::setw(10) << rows[i].iter << std::setw(24) << reward.str()
        << regret.str() << '\n';
  }
  out << "mean norm_reward over last " << tail << " iterations: " << std::fixed
      << std::setprecision(4) << tail_reward << '\n';
}

}  // namespace duelps
