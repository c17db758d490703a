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

#include <cstddef>
#include <vector>

#include "lowswitch/kernel.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch {

// Exact value and occupancy computations. Nothing here samples.
//
// Every function accepts kernels with or without an absorbing state; the
// reward table is always over the original states and the absorbing state
// contributes zero reward.

// Expected cumulative reward from the initial state, by backward induction.
double policy_value(const LayeredKernel& kernel, const RewardTable& reward,
                    const DeterministicPolicy& policy);
double policy_value(const LayeredKernel& kernel, const RewardTable& reward,
                    const MixturePolicy& policy);

// Values of many policies against one kernel/reward pair.
std::vector<double> policy_values(const LayeredKernel& kernel, const RewardTable& reward,
                                  const std::vector<DeterministicPolicy>& policies);

// Forward state/state-action occupancy measure of a policy.
//
// `state(h, s)` is defined for h = 0..H (h = H is the terminal layer s_{H+1})
// and every s < width(); `state_action(h, s, a)` for h = 0..H-1.
class Occupancy {
 public:
  Occupancy(int horizon, int width, int num_actions);

  double state(int h, int s) const { return state_[static_cast<std::size_t>(h * width_ + s)]; }
  double state_action(int h, int s, int a) const {
    return state_action_[static_cast<std::size_t>((h * width_ + s) * num_actions_ + a)];
  }

  int horizon() const { return horizon_; }
  int width() const { return width_; }
  int num_actions() const { return num_actions_; }

 private:
  friend Occupancy occupancy(const LayeredKernel&, const DeterministicPolicy&);
  friend Occupancy occupancy(const LayeredKernel&, const MixturePolicy&);

  int horizon_;
  int width_;
  int num_actions_;
  std::vector<double> state_;
  std::vector<double> state_action_;
};

Occupancy occupancy(const LayeredKernel& kernel, const DeterministicPolicy& policy);
Occupancy occupancy(const LayeredKernel& kernel, const MixturePolicy& policy);

// V^pi(1_target, P): probability that the trajectory occupies the target.
double visitation_probability(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                              const IndicatorReward& target);
double visitation_probability(const LayeredKernel& kernel, const MixturePolicy& policy,
                              const IndicatorReward& target);

struct OptimalSolution {
  double value = 0.0;
  DeterministicPolicy policy;
};

// Bellman-optimal deterministic policy; ties go to the lowest action index.
OptimalSolution optimal_value_and_policy(const LayeredKernel& kernel, const RewardTable& reward);

// Throws DimensionError if the reward/policy shapes do not fit the kernel.
void check_dimensions(const LayeredKernel& kernel, const RewardTable& reward);
void check_dimensions(const LayeredKernel& kernel, const DeterministicPolicy& policy);

}  // namespace lowswitch
