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

#include "lowswitch/oracles.hpp"

#include <algorithm>
#include <limits>

namespace lowswitch::oracles {

void for_each_path(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                   const std::function<void(const std::vector<int>&, double)>& visit) {
  const int H = kernel.horizon();
  const int W = kernel.width();
  std::vector<int> states(static_cast<std::size_t>(H) + 1, 0);
  states[0] = kernel.initial_state();
  // Odometer over s_2..s_{H+1}.
  std::vector<int> digits(static_cast<std::size_t>(H), 0);
  while (true) {
    double p = 1.0;
    for (int h = 0; h < H; ++h) {
      states[static_cast<std::size_t>(h) + 1] = digits[static_cast<std::size_t>(h)];
      const int s = states[static_cast<std::size_t>(h)];
      p *= kernel.prob(h, s, policy.action(h, s), states[static_cast<std::size_t>(h) + 1]);
    }
    visit(states, p);
    int i = H - 1;
    while (i >= 0 && ++digits[static_cast<std::size_t>(i)] == W) {
      digits[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
}

double brute_force_value(const LayeredKernel& kernel, const RewardTable& reward,
                         const DeterministicPolicy& policy) {
  const int S = kernel.num_states();
  double total = 0.0;
  for_each_path(kernel, policy, [&](const std::vector<int>& states, double p) {
    double ret = 0.0;
    for (int h = 0; h < kernel.horizon(); ++h) {
      const int s = states[static_cast<std::size_t>(h)];
      if (s < S) ret += reward(h, s, policy.action(h, s));
    }
    total += p * ret;
  });
  return total;
}

double brute_force_value(const LayeredKernel& kernel, const RewardTable& reward,
                         const MixturePolicy& policy) {
  double total = 0.0;
  for (const auto& c : policy.components()) {
    total += c.weight * brute_force_value(kernel, reward, c.policy);
  }
  return total;
}

double brute_force_visitation(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                              const IndicatorReward& target) {
  double total = 0.0;
  for_each_path(kernel, policy, [&](const std::vector<int>& states, double p) {
    const int s = states[static_cast<std::size_t>(target.layer)];
    if (s != target.state) return;
    if (target.kind == IndicatorReward::Kind::kStateAction &&
        policy.action(target.layer, s) != target.action) {
      return;
    }
    total += p;
  });
  return total;
}

double brute_force_absorption(const LayeredKernel& kernel, const DeterministicPolicy& policy) {
  if (!kernel.has_absorbing()) return 0.0;
  const int sink = kernel.absorbing_state();
  double total = 0.0;
  for_each_path(kernel, policy, [&](const std::vector<int>& states, double p) {
    if (std::find(states.begin() + 1, states.end(), sink) != states.end()) total += p;
  });
  return total;
}

double exhaustive_optimal_value(const LayeredKernel& kernel, const RewardTable& reward,
                                std::uint64_t cap) {
  PolicyEnumeration all(kernel.horizon(), kernel.num_states(), kernel.num_actions(), cap);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& policy : all) best = std::max(best, brute_force_value(kernel, reward, policy));
  return best;
}

}  // namespace lowswitch::oracles
