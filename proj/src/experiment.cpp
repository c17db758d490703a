// Copyright 2026 The lowswitch Authors.
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

#include "lowswitch/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/serialization.hpp"

namespace lowswitch {

std::filesystem::path run_root() {
  const char* env = std::getenv("LOWSWITCH_RUN_ROOT");
  if (env != nullptr && *env != '\0') return env;
  return "runs";
}

std::filesystem::path make_run_dir(const std::string& name) {
  auto dir = run_root() / name;
  std::filesystem::create_directories(dir);
  return dir;
}

std::string run_name(const std::string& algorithm, const RunConfig& c) {
  std::ostringstream out;
  out << algorithm << "-H" << c.H << "S" << c.S << "A" << c.A << "-K" << c.K << "-seed" << c.seed;
  return out.str();
}

Instance build_instance(const RunConfig& c) {
  Instance out;
  if (!c.mdp.empty()) {
    out.mdp = mdp_from_json(read_json_file(c.mdp));
  } else if (c.instance == "hard") {
    out.hard = gen_hard_instance(c.H, c.S, c.A, std::nullopt, c.instance_seed);
    out.mdp = out.hard->mdp;
  } else {
    out.mdp = gen_random_mdp(c.H, c.S, c.A, c.sparsity, RewardLaw::kUniform, c.instance_seed);
  }
  return out;
}

std::string metrics_csv_row(const MetricsRow& row) {
  char regret[32];
  std::snprintf(regret, sizeof regret, "%.17g", row.regret);
  std::ostringstream out;
  out << row.K << ',' << row.seed << ',' << regret << ',' << row.switch_cost << ','
      << row.batches << ',' << row.K0 << ',' << row.survivors;
  return out.str();
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& row : rows) out << metrics_csv_row(row) << '\n';
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_metrics_csv(out, rows);
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) {
    throw ConfigError("metrics", "missing CSV header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::vector<std::string> parts;
    std::string item;
    while (std::getline(fields, item, ',')) parts.push_back(item);
    if (parts.size() != 7) throw ConfigError("metrics", "expected 7 columns: " + line);
    try {
      MetricsRow row;
      row.K = std::stoll(parts[0]);
      row.seed = std::stoull(parts[1]);
      row.regret = std::stod(parts[2]);
      row.switch_cost = std::stoll(parts[3]);
      row.batches = std::stoll(parts[4]);
      row.K0 = std::stoi(parts[5]);
      row.survivors = std::stoll(parts[6]);
      rows.push_back(row);
    } catch (const std::exception&) {
      throw ConfigError("metrics", "bad row: " + line);
    }
  }
  return rows;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_instance(const std::filesystem::path& dir, const Instance& instance) {
  write_json_file(dir / "mdp.json", mdp_to_json(instance.mdp));
  if (instance.hard) write_json_file(dir / "arm_map.json", arm_map_to_json(*instance.hard));
}

}  // namespace

ApeveExperiment run_apeve_experiment(const RunConfig& config, bool plus,
                                     const std::optional<std::filesystem::path>& dir) {
  validate_config(config);
  const Instance instance = build_instance(config);
  EpisodeSimulator env(instance.mdp);
  Rng rng(config.seed);
  const ApeveConfig apeve = to_apeve_config(config);

  ApeveExperiment out;
  out.run = plus ? run_apeve_plus(env, apeve, rng) : run_apeve(env, apeve, rng);
  out.metrics = compute_metrics(out.run, instance.mdp);
  out.row = {config.K,
             config.seed,
             out.metrics.regret,
             out.metrics.switch_cost,
             out.metrics.batches,
             out.metrics.num_stages,
             out.metrics.survivors};

  if (dir) {
    std::filesystem::create_directories(*dir);
    write_text(*dir / "config.txt", config_to_text(config));
    write_instance(*dir, instance);
    std::ofstream stages(*dir / "stages.jsonl");
    write_stage_log_jsonl(stages, out.run.stages);
    write_metrics_csv(*dir / "metrics.csv", {out.row});
  }
  return out;
}

RewardFreeExperiment run_reward_free_experiment(const RunConfig& config, int queries,
                                                const std::optional<std::filesystem::path>& dir) {
  validate_config(config);
  const Instance instance = build_instance(config);
  EpisodeSimulator env(instance.mdp);
  Rng rng(config.seed);

  RewardFreeConfig rf;
  rf.epsilon = config.epsilon;
  rf.delta = config.delta;
  rf.mode = config.mode;
  rf.c_rf = config.C_rf;
  rf.total_episodes = config.K;
  rf.c1 = config.c1;
  rf.seed = config.seed;

  RewardFreeExperiment out;
  out.result = run_reward_free(env, rf, rng);
  const int H = instance.mdp.horizon();
  const int S = instance.mdp.num_states();
  const int A = instance.mdp.num_actions();
  for (int q = 0; q < queries; ++q) {
    const RewardTable reward = gen_random_reward(H, S, A, config.seed * 1000003ULL + 1 + q);
    const double best = optimal_value_and_policy(instance.mdp.kernel(), reward).value;
    const DeterministicPolicy planned = plan_for_reward(out.result.model, reward);
    out.suboptimality.push_back(best - policy_value(instance.mdp.kernel(), reward, planned));
  }

  if (dir) {
    std::filesystem::create_directories(*dir);
    write_text(*dir / "config.txt", config_to_text(config));
    write_instance(*dir, instance);
    save_reward_free_model(out.result.model, *dir / "model");
    std::ofstream csv(*dir / "queries.csv");
    csv << "query,suboptimality,switch_cost\n";
    for (std::size_t q = 0; q < out.suboptimality.size(); ++q) {
      char value[32];
      std::snprintf(value, sizeof value, "%.17g", out.suboptimality[q]);
      csv << q << ',' << value << ',' << out.result.log.switching_cost() << '\n';
    }
  }
  return out;
}

std::vector<MetricsRow> run_sweep(const RunConfig& config, bool plus,
                                  const std::optional<std::filesystem::path>& parent) {
  validate_config(config);
  std::vector<std::int64_t> grid = config.sweep_K;
  if (grid.empty()) grid.push_back(config.K);

  std::vector<RunConfig> jobs;
  for (auto k : grid) {
    for (int i = 0; i < config.sweep_seeds; ++i) {
      RunConfig job = config;
      job.K = k;
      job.seed = config.seed + static_cast<std::uint64_t>(i);
      jobs.push_back(job);
    }
  }

  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t width = config.workers > 0 ? static_cast<std::size_t>(config.workers) : hardware;
  const std::string algorithm = plus ? "apeve-plus" : "apeve";
  const std::filesystem::path base = parent ? *parent : run_root() / "sweep";
  std::vector<MetricsRow> rows(jobs.size());
  for (std::size_t start = 0; start < jobs.size(); start += width) {
    std::vector<std::future<MetricsRow>> running;
    const std::size_t stop = std::min(jobs.size(), start + width);
    for (std::size_t j = start; j < stop; ++j) {
      running.push_back(std::async(std::launch::async, [&, j] {
        return run_apeve_experiment(jobs[j], plus, base / run_name(algorithm, jobs[j])).row;
      }));
    }
    for (std::size_t j = start; j < stop; ++j) rows[j] = running[j - start].get();
  }
  return rows;
}

}  // namespace lowswitch
