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

#include "lowswitch/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "lowswitch/errors.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

namespace {

void check_positive(int horizon, int num_states, int num_actions) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("H, S and A must be positive");
  }
}

}  // namespace

TabularMDP gen_random_mdp(int horizon, int num_states, int num_actions, double sparsity,
                          RewardLaw reward_law, std::uint64_t seed) {
  check_positive(horizon, num_states, num_actions);
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    throw DimensionError("sparsity must be in (0, 1]");
  }
  Rng rng(seed);
  const int support = std::clamp(static_cast<int>(std::ceil(sparsity * num_states)), 1, num_states);

  LayeredKernel kernel(horizon, num_states, num_actions, 0, false);
  std::vector<int> states(static_cast<std::size_t>(num_states));
  std::exponential_distribution<double> exponential(1.0);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        std::iota(states.begin(), states.end(), 0);
        std::shuffle(states.begin(), states.end(), rng);
        std::vector<double> weights(static_cast<std::size_t>(support));
        double total = 0.0;
        for (auto& w : weights) {
          w = exponential(rng);
          total += w;
        }
        auto row = kernel.mutable_row(h, s, a);
        std::fill(row.begin(), row.end(), 0.0);
        for (int i = 0; i < support; ++i) {
          row[static_cast<std::size_t>(states[static_cast<std::size_t>(i)])] =
              weights[static_cast<std::size_t>(i)] / total;
        }
      }
    }
  }

  RewardTable reward(horizon, num_states, num_actions, 0.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        switch (reward_law) {
          case RewardLaw::kUniform: reward(h, s, a) = unit(rng); break;
          case RewardLaw::kBinary: reward(h, s, a) = coin(rng) ? 1.0 : 0.0; break;
          case RewardLaw::kZero: break;
        }
      }
    }
  }
  return TabularMDP(std::move(kernel), std::move(reward));
}

RewardTable gen_random_reward(int horizon, int num_states, int num_actions, std::uint64_t seed) {
  check_positive(horizon, num_states, num_actions);
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RewardTable reward(horizon, num_states, num_actions, 0.0);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) reward(h, s, a) = unit(rng);
    }
  }
  return reward;
}

int hard_instance_tree_depth(int num_states, int num_actions) {
  if (num_states < 1 || num_actions < 2) {
    throw ConditionError("tree depth needs S >= 1 and A >= 2");
  }
  int depth = 1;
  std::int64_t leaves = num_actions;
  while (leaves < num_states) {
    leaves *= num_actions;
    ++depth;
  }
  return depth;
}

HardInstance gen_hard_instance(int horizon, int num_states, int num_actions,
                               const std::optional<std::vector<double>>& arm_means,
                               std::uint64_t seed) {
  if (horizon < 1 || num_states < 2 || num_actions < 2) {
    throw ConditionError("hard instance needs H >= 1, S >= 2 and A >= 2");
  }
  const int depth = hard_instance_tree_depth(num_states, num_actions);
  if (2 * depth > horizon) {
    throw ConditionError("hard instance needs S <= A^(H/2): tree depth " + std::to_string(depth) +
                         " does not fit twice into H = " + std::to_string(horizon));
  }
  const int H = horizon;
  const int S = num_states;
  const int A = num_actions;
  const int sink = S - 1;
  const int leaves = S - 1;

  Rng rng(seed);
  HardInstance out;
  out.tree_depth = depth;
  out.absorbing_state = sink;
  out.stay_action.assign(static_cast<std::size_t>(H * S), -1);

  LayeredKernel kernel(H, S, A, 0, false);
  RewardTable reward(H, S, A, 0.0);

  // Tree layers: nodes at depth d are states 0..width(d)-1.
  auto width = [&](int d) {
    std::int64_t w = 1;
    for (int i = 0; i < d && w < leaves; ++i) w *= A;
    return static_cast<int>(std::min<std::int64_t>(w, leaves));
  };
  for (int h = 0; h < depth; ++h) {
    const int here = width(h);
    const int next = width(h + 1);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        int target = sink;
        if (s < here) {
          const std::int64_t child = static_cast<std::int64_t>(s) * A + a;
          if (child < next) target = static_cast<int>(child);
        }
        kernel.set_prob(h, s, a, target, 1.0);
      }
    }
  }

  // Arm layers.
  std::uniform_int_distribution<int> pick_action(0, A - 1);
  for (int h = depth; h < H; ++h) {
    for (int s = 0; s < leaves; ++s) {
      const int stay = pick_action(rng);
      out.stay_action[static_cast<std::size_t>(h * S + s)] = stay;
      for (int a = 0; a < A; ++a) {
        if (a == stay) {
          kernel.set_prob(h, s, a, s, 1.0);
        } else {
          kernel.set_prob(h, s, a, sink, 1.0);
          out.arms.push_back({h, s, a, 0.0});
        }
      }
    }
    for (int a = 0; a < A; ++a) kernel.set_prob(h, sink, a, sink, 1.0);
  }

  if (arm_means) {
    if (arm_means->size() != out.arms.size()) {
      throw ConditionError("expected " + std::to_string(out.arms.size()) + " arm means, got " +
                           std::to_string(arm_means->size()));
    }
    for (std::size_t i = 0; i < out.arms.size(); ++i) out.arms[i].mean = (*arm_means)[i];
  } else {
    std::uniform_real_distribution<double> mean(0.0, 0.9);
    for (auto& arm : out.arms) arm.mean = mean(rng);
    if (!out.arms.empty()) {
      std::uniform_int_distribution<std::size_t> pick_arm(0, out.arms.size() - 1);
      out.arms[pick_arm(rng)].mean = 0.9;
    }
  }
  for (const auto& arm : out.arms) {
    if (!(arm.mean >= 0.0 && arm.mean <= 1.0)) throw ConditionError("arm means must be in [0, 1]");
    reward(arm.layer, arm.state, arm.action) = arm.mean;
  }

  out.mdp = TabularMDP(std::move(kernel), std::move(reward));
  return out;
}

}  // namespace lowswitch
