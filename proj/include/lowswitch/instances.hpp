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
#include <optional>
#include <vector>

#include "lowswitch/kernel.hpp"

namespace lowswitch {

enum class RewardLaw {
  kUniform,  // i.i.d. Uniform[0, 1]
  kBinary,   // i.i.d. Bernoulli(1/2) in {0, 1}
  kZero,
};

// Random layered MDP with initial state 0. Each row is supported on
// ceil(sparsity * S) distinct next states drawn uniformly, with flat
// Dirichlet weights. Throws DimensionError on non-positive dimensions or
// sparsity outside (0, 1].
TabularMDP gen_random_mdp(int horizon, int num_states, int num_actions, double sparsity,
                          RewardLaw reward_law, std::uint64_t seed);

// Reward table drawn i.i.d. Uniform[0, 1].
RewardTable gen_random_reward(int horizon, int num_states, int num_actions, std::uint64_t seed);

struct Arm {
  int layer;
  int state;
  int action;
  double mean;
};

struct HardInstance {
  TabularMDP mdp;
  std::vector<Arm> arms;
  int tree_depth = 0;  // H0
  int absorbing_state = 0;
  // stay_action[h * S + s]: the self-loop action at an arm layer (-1 off arm layers).
  std::vector<int> stay_action;
};

// Lower-bound family: a zero-reward absorbing state (index S-1), an A-ary
// tree over the first H0 = min{n >= 1 : S <= A^n} layers giving each of the
// other S-1 states a unique path, then arm layers where one action keeps the
// state (reward 0) and every other action pays its arm mean and jumps to the
// absorbing state.
//
// Default means are Uniform(0, 0.9) with one planted arm at 0.9. Throws
// ConditionError unless S >= 2, A >= 2 and 2*H0 <= H (which is what makes
// S <= A^(H/2) usable), or if `arm_means` has the wrong length.
HardInstance gen_hard_instance(int horizon, int num_states, int num_actions,
                               const std::optional<std::vector<double>>& arm_means,
                               std::uint64_t seed);

int hard_instance_tree_depth(int num_states, int num_actions);

}  // namespace lowswitch
