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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lowswitch/config.hpp"
#include "lowswitch/elimination.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/reward_free.hpp"

namespace lowswitch {

// Root for run directories: $LOWSWITCH_RUN_ROOT, or ./runs.
std::filesystem::path run_root();

// root/<name>, created if needed.
std::filesystem::path make_run_dir(const std::string& name);

struct Instance {
  TabularMDP mdp;
  std::optional<HardInstance> hard;  // set for instance=hard
};

// Loads `mdp` when given, otherwise generates from (instance, H, S, A,
// sparsity, instance_seed).
Instance build_instance(const RunConfig& config);

// One CSV row: K,seed,regret,switch_cost,batches,K0,survivors.
struct MetricsRow {
  std::int64_t K = 0;
  std::uint64_t seed = 0;
  double regret = 0.0;
  std::int64_t switch_cost = 0;
  std::int64_t batches = 0;
  int K0 = 0;
  std::int64_t survivors = -1;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

inline constexpr const char* kMetricsHeader = "K,seed,regret,switch_cost,batches,K0,survivors";

std::string metrics_csv_row(const MetricsRow& row);
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<MetricsRow>& rows);
// Throws ConfigError on a bad header or row.
std::vector<MetricsRow> read_metrics_csv(std::istream& in);

struct ApeveExperiment {
  ApeveRun run;
  RunMetrics metrics;
  MetricsRow row;
};

// Runs APEVE or APEVE+ with Rng(config.seed). When `dir` is given, writes
// config.txt, mdp.json (and arm_map.json), stages.jsonl and metrics.csv.
ApeveExperiment run_apeve_experiment(const RunConfig& config, bool plus,
                                     const std::optional<std::filesystem::path>& dir);

struct RewardFreeExperiment {
  RewardFreeResult result;
  // Per query: V* on the true MDP minus the value of the planned policy.
  std::vector<double> suboptimality;
};

// Runs reward-free exploration with Rng(config.seed), then answers
// `queries` random reward tables drawn from seed + 1. With `dir`, writes
// config.txt, mdp.json, model/ and queries.csv.
RewardFreeExperiment run_reward_free_experiment(const RunConfig& config, int queries,
                                                const std::optional<std::filesystem::path>& dir);

// Every (K, seed) pair of the grid, seeds config.seed .. config.seed +
// sweep_seeds - 1, run in parallel. Rows come back in (K, seed) order.
// Each run writes its own directory under `parent` (default
// $LOWSWITCH_RUN_ROOT/sweep).
std::vector<MetricsRow> run_sweep(const RunConfig& config, bool plus,
                                  const std::optional<std::filesystem::path>& parent = std::nullopt);

std::string run_name(const std::string& algorithm, const RunConfig& config);

}  // namespace lowswitch
