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

// Command-line front end: run, batch, report, serve.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "duelps/harness.hpp"
#include "duelps/http.hpp"

namespace {

using nlohmann::json;

constexpr int kConfigFailure = 1;
constexpr int kRunFailure = 2;

void init_logging() {
  const char* level = std::getenv("DUELPS_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::info);
  spdlog::set_pattern("[%H:%M:%S] [%^%l%$] %v");
}

struct Overrides {
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
};

duelps::ExperimentConfig load(const std::string& path, const Overrides& o) {
  std::ifstream in(path);
  if (!in) throw duelps::ConfigError("config", "cannot open " + path);
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw duelps::ConfigError("config", e.what());
  }
  if (o.runs) {
    doc["num_runs"] = *o.runs;
    doc.erase("seeds");
  }
  if (o.seed) {
    doc["seed"] = *o.seed;
    doc.erase("seeds");
  }
  if (o.iterations) doc["iterations"] = *o.iterations;
  return duelps::parse_experiment(doc);
}

void ensure_parent(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

int cmd_run(const std::string& config_path, const Overrides& o, int run, const std::string& out) {
  const duelps::ExperimentConfig config = load(config_path, o);
  const duelps::RunLog log = duelps::run_single(config, run);
  if (out.empty()) {
    duelps::write_jsonl(std::cout, log);
  } else {
    ensure_parent(out);
    std::ofstream file(out);
    duelps::write_jsonl(file, log);
    spdlog::info("wrote {} records to {}", log.records.size(), out);
  }
  return 0;
}

int cmd_batch(const std::string& config_path, const Overrides& o, int jobs, std::string out) {
  const duelps::ExperimentConfig config = load(config_path, o);
  if (out.empty()) out = config.output;
  if (out.empty()) throw duelps::ConfigError("output", "no --out given and config has no output");
  spdlog::info("{} runs of {} on {} with {} jobs", config.num_runs,
               duelps::to_string(config.algorithm), duelps::to_string(config.env.kind), jobs);
  const duelps::BatchResult result = duelps::run_batch(config, jobs);
  ensure_parent(out);
  std::ofstream file(out);
  duelps::write_csv(file, result.rows);
  if (!file) throw std::runtime_error("cannot write " + out);
  spdlog::info("wrote {}", out);
  for (const auto& f : result.failures) spdlog::error("run {} failed: {}", f.run, f.message);
  return result.failures.empty() ? 0 : kRunFailure;
}

int cmd_report(const std::string& csv) {
  std::ifstream in(csv);
  if (!in) throw duelps::ConfigError("csv", "cannot open " + csv);
  duelps::write_report(std::cout, duelps::read_csv(in));
  return 0;
}

int cmd_serve(const std::string& host, int port, const std::string& data_dir,
              const std::string& origin) {
  duelps::DuelService service(data_dir);
  httplib::Server server;
  duelps::mount_routes(server, service, origin);
  spdlog::info("listening on {}:{}", host, port);
  if (!server.listen(host, port)) {
    spdlog::error("cannot bind {}:{}", host, port);
    return kRunFailure;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"Preference-based posterior sampling experiments"};
  app.require_subcommand(1);

  std::string config_path, out, csv, host = "127.0.0.1", data_dir = "duelps-data", origin = "*";
  int run_index = 0, jobs = 1, port = 8080;
  int runs = 0, iterations = 0;
  std::uint64_t seed = 0;

  auto add_overrides = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--iterations", iterations, "Iterations per run");
  };

  CLI::App* run = app.add_subcommand("run", "Single run, JSON-lines log");
  add_overrides(run);
  run->add_option("--run", run_index, "Run index within the batch");
  run->add_option("--out", out, "Output file (default stdout)");

  CLI::App* batch = app.add_subcommand("batch", "Multi-seed batch, aggregate CSV");
  add_overrides(batch);
  batch->add_option("--out", out, "CSV output path");
  batch->add_option("--runs", runs, "Number of runs")->check(CLI::PositiveNumber);
  batch->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "Summarize a batch CSV");
  report->add_option("csv", csv, "Batch CSV")->required();

  CLI::App* serve = app.add_subcommand("serve", "HTTP duel service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--data-dir", data_dir, "Session storage directory");
  serve->add_option("--cors-origin", origin, "Allowed console origin");

  CLI11_PARSE(app, argc, argv);

  auto overrides = [&](CLI::App* cmd) {
    Overrides o;
    if (cmd->count("--seed")) o.seed = seed;
    if (cmd->count("--iterations")) o.iterations = iterations;
    if (cmd == batch && cmd->count("--runs")) o.runs = runs;
    return o;
  };

  try {
    if (*run) return cmd_run(config_path, overrides(run), run_index, out);
    if (*batch) return cmd_batch(config_path, overrides(batch), jobs, out);
    if (*report) return cmd_report(csv);
    if (*serve) return cmd_serve(host, port, data_dir, origin);
  } catch (const duelps::ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfigFailure;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRunFailure;
  }
  return 0;
}
