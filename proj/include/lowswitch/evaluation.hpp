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
#include <vector>

#include "lowswitch/absorbing.hpp"
#include "lowswitch/deployment.hpp"
#include "lowswitch/exploration.hpp"
#include "lowswitch/policy.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

struct EvaluationOptions {
  bool keep_dataset = true;
};

struct EvaluationResult {
  AbsorbingKernel phat;
  DeploymentLog log;
  CountsTable counts;  // pooled over every block
  std::vector<Trajectory> dataset;
  std::vector<UnvisitedRow> unvisited;
};

// Plans all HSA visitation maximisers against `pint` in one shot, runs each
// for its share of T (blocks in (h,s,a) order), pools the data, and
// estimates every layer of P-hat with F held fixed. Throws BudgetError when
// T < HSA.
EvaluationResult run_evaluation(EpisodeSimulator& env, const InfrequentSet& infrequent,
                                const AbsorbingKernel& pint, std::int64_t total,
                                const PolicySet& policies, Rng& rng,
                                const EvaluationOptions& options = {},
                                std::int64_t episode_offset = 0);

struct ValueGapReport {
  double max_gap = 0.0;
  double mean_gap = 0.0;
  // gaps[i][j]: |V^{pi_i}(r_j, A) - V^{pi_i}(r_j, B)|.
  std::vector<std::vector<double>> gaps;
};

// Absolute value gaps between two kernels for every (policy, reward) pair.
// Throws DimensionError for an unconstrained policy set.
ValueGapReport value_gap_report(const LayeredKernel& estimate, const LayeredKernel& reference,
                                const PolicySet& policies,
                                const std::vector<RewardTable>& rewards);

}  // namespace lowswitch
