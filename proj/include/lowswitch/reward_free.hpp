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

#include "lowswitch/absorbing.hpp"
#include "lowswitch/deployment.hpp"
#include "lowswitch/elimination.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

struct RewardFreeConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  ThresholdMode mode = ThresholdMode::kCalibrated;
  // Budget constant; defaults to 1.0 in calibrated mode and 1.0 in theory
  // mode (theory budgets ignore `total_episodes`).
  double c_rf = 1.0;
  // Calibrated mode only: K, split as N0 = min(K/2, C_rf S^3 A H^5 iota / eps)
  // and N = K - N0.
  std::int64_t total_episodes = 200'000;
  double c1 = kDefaultC1;
  std::uint64_t seed = 0;  // recorded in the stored metadata
};

struct RewardFreeBudgets {
  std::int64_t exploration = 0;  // N0
  std::int64_t evaluation = 0;   // N
  double iota = 0.0;
  std::int64_t total() const { return exploration + evaluation; }
};

// Throws DomainError unless epsilon in (0, H].
RewardFreeBudgets reward_free_budgets(int horizon, int num_states, int num_actions,
                                      const RewardFreeConfig& config);

// The stored output of a reward-free run.
struct RewardFreeModel {
  InfrequentSet infrequent;
  AbsorbingKernel pint;
  AbsorbingKernel phat;
  RewardFreeBudgets budgets;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

struct RewardFreeResult {
  RewardFreeModel model;
  DeploymentLog log;
};

// One exploration pass over all deterministic policies with N0 episodes, one
// evaluation pass with N. Switching cost is at most 2HSA.
RewardFreeResult run_reward_free(EpisodeSimulator& env, const RewardFreeConfig& config, Rng& rng);

// argmax_pi V^pi(r, P-hat) by backward DP. The policy is defined on every
// original state and can be deployed on the true MDP directly.
DeterministicPolicy plan_for_reward(const RewardFreeModel& model, const RewardTable& reward);

// Directory layout: kernel.json (P-hat), exploration_kernel.json (P^int),
// infrequent_set.json, metadata.json.
void save_reward_free_model(const RewardFreeModel& model, const std::filesystem::path& dir);
// Throws ModelNotFoundError if the directory or a file is missing.
RewardFreeModel load_reward_free_model(const std::filesystem::path& dir);

}  // namespace lowswitch
