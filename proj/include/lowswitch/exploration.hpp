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
#include "lowswitch/policy.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

// T episodes split over the HSA visitation-maximising policies: T/(HSA)
// each, with the remainder going one episode apiece to the first blocks in
// (h, s, a) order.
class ExplorationBudget {
 public:
  // Throws BudgetError if T < HSA.
  ExplorationBudget(std::int64_t total, int horizon, int num_states, int num_actions);

  std::int64_t total() const { return total_; }
  std::int64_t per_policy() const { return per_policy_; }
  // Episodes for the block with lexicographic index (h*S + s)*A + a.
  std::int64_t episodes_for(std::int64_t block_index) const;
  std::int64_t num_blocks() const { return blocks_; }

 private:
  std::int64_t total_;
  std::int64_t blocks_;
  std::int64_t per_policy_;
  std::int64_t remainder_;
};

struct PlannedPolicy {
  DeterministicPolicy policy;
  double visitation = 0.0;  // value under the planning kernel
};

// argmax over the policy class of V^pi(1_{h,s,a}, kernel). Explicit sets are
// scanned in order (first maximiser wins); unconstrained sets are solved by
// backward DP with the indicator reward (lowest action on ties). Throws
// DimensionError for an empty explicit set.
PlannedPolicy plan_visitation_maximizer(const LayeredKernel& kernel, int h, int s, int a,
                                        const PolicySet& policies);

// Maximisers for every (s, a) at layer h, in (s, a) order. For explicit
// sets each member's occupancy is computed once.
std::vector<PlannedPolicy> plan_layer_maximizers(const LayeredKernel& kernel, int h,
                                                 const PolicySet& policies);

// Maximisers for all HSA targets in (h, s, a) order.
std::vector<PlannedPolicy> plan_all_maximizers(const LayeredKernel& kernel,
                                               const PolicySet& policies);

struct ExplorationOptions {
  double c1 = kDefaultC1;
  bool keep_dataset = true;
};

struct ExplorationResult {
  InfrequentSet infrequent;
  AbsorbingKernel pint;
  std::vector<Trajectory> dataset;
  DeploymentLog log;
  // Per-layer counts from that layer's own block only.
  std::vector<CountsTable> layer_counts;
  std::vector<UnvisitedRow> unvisited;
};

// Layer-by-layer exploration. For h = 1..H the SA policies pi_{h,s,a} are
// planned against the current P^int, each run for its share of T, and then
// the layer-h part of F and P^int is rebuilt from that layer's episodes.
//
// `episode_offset` is the number of episodes already observed by the caller
// (used to stamp batch commitments in the log).
ExplorationResult run_exploration(EpisodeSimulator& env, const PolicySet& policies,
                                  const ExplorationBudget& budget, double iota_value, Rng& rng,
                                  const ExplorationOptions& options = {},
                                  std::int64_t episode_offset = 0);

}  // namespace lowswitch
