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

#include "lowswitch/dynamic_programming.hpp"

#include <utility>

#include "lowswitch/errors.hpp"

namespace lowswitch {
namespace {

// Action values closer than this are treated as tied.
constexpr double kTieTolerance = 1e-12;

double reward_at(const LayeredKernel& kernel, const RewardTable& reward, int h, int s, int a) {
  return s < kernel.num_states() ? reward(h, s, a) : 0.0;
}

}  // namespace

void check_dimensions(const LayeredKernel& kernel, const RewardTable& reward) {
  if (reward.horizon() != kernel.horizon() || reward.num_states() != kernel.num_states() ||
      reward.num_actions() != kernel.num_actions()) {
    throw DimensionError("reward table shape does not match the kernel");
  }
}

void check_dimensions(const LayeredKernel& kernel, const DeterministicPolicy& policy) {
  if (policy.horizon() != kernel.horizon() || policy.num_states() != kernel.num_states() ||
      policy.num_actions() != kernel.num_actions()) {
    throw DimensionError("policy shape does not match the kernel");
  }
}

double policy_value(const LayeredKernel& kernel, const RewardTable& reward,
                    const DeterministicPolicy& policy) {
  check_dimensions(kernel, reward);
  check_dimensions(kernel, policy);
  const int width = kernel.width();
  std::vector<double> next(static_cast<std::size_t>(width), 0.0);
  std::vector<double> current(static_cast<std::size_t>(width), 0.0);
  for (int h = kernel.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < width; ++s) {
      const int a = policy.action(h, s);
      double v = reward_at(kernel, reward, h, s, a);
      const auto row = kernel.row(h, s, a);
      for (int n = 0; n < width; ++n) v += row[static_cast<std::size_t>(n)] * next[static_cast<std::size_t>(n)];
      current[static_cast<std::size_t>(s)] = v;
    }
    std::swap(current, next);
  }
  return next[static_cast<std::size_t>(kernel.initial_state())];
}

double policy_value(const LayeredKernel& kernel, const RewardTable& reward,
                    const MixturePolicy& policy) {
  double value = 0.0;
  for (const auto& c : policy.components()) value += c.weight * policy_value(kernel, reward, c.policy);
  return value;
}

std::vector<double> policy_values(const LayeredKernel& kernel, const RewardTable& reward,
                                  const std::vector<DeterministicPolicy>& policies) {
  std::vector<double> values;
  values.reserve(policies.size());
  for (const auto& p : policies) values.push_back(policy_value(kernel, reward, p));
  return values;
}

Occupancy::Occupancy(int horizon, int width, int num_actions)
    : horizon_(horizon),
      width_(width),
      num_actions_(num_actions),
      state_(static_cast<std::size_t>(horizon + 1) * width, 0.0),
      state_action_(static_cast<std::size_t>(horizon) * width * num_actions, 0.0) {}

Occupancy occupancy(const LayeredKernel& kernel, const DeterministicPolicy& policy) {
  check_dimensions(kernel, policy);
  const int width = kernel.width();
  const int num_actions = kernel.num_actions();
  Occupancy occ(kernel.horizon(), width, num_actions);
  occ.state_[static_cast<std::size_t>(kernel.initial_state())] = 1.0;
  for (int h = 0; h < kernel.horizon(); ++h) {
    for (int s = 0; s < width; ++s) {
      const double mass = occ.state_[static_cast<std::size_t>(h * width + s)];
      if (mass == 0.0) continue;
      const int a = policy.action(h, s);
      occ.state_action_[static_cast<std::size_t>((h * width + s) * num_actions + a)] = mass;
      const auto row = kernel.row(h, s, a);
      for (int n = 0; n < width; ++n) {
        occ.state_[static_cast<std::size_t>((h + 1) * width + n)] += mass * row[static_cast<std::size_t>(n)];
      }
    }
  }
  return occ;
}

Occupancy occupancy(const LayeredKernel& kernel, const MixturePolicy& policy) {
  Occupancy total(kernel.horizon(), kernel.width(), kernel.num_actions());
  for (const auto& c : policy.components()) {
    const Occupancy part = occupancy(kernel, c.policy);
    for (std::size_t i = 0; i < total.state_.size(); ++i) total.state_[i] += c.weight * part.state_[i];
    for (std::size_t i = 0; i < total.state_action_.size(); ++i) {
      total.state_action_[i] += c.weight * part.state_action_[i];
    }
  }
  return total;
}

namespace {

template <typename Policy>
double visitation_impl(const LayeredKernel& kernel, const Policy& policy,
                       const IndicatorReward& target) {
  if (target.layer < 0 || target.layer >= kernel.horizon() || target.state < 0 ||
      target.state >= kernel.num_states() ||
      (target.kind == IndicatorReward::Kind::kStateAction &&
       (target.action < 0 || target.action >= kernel.num_actions()))) {
    throw DimensionError("indicator target out of range");
  }
  const Occupancy occ = occupancy(kernel, policy);
  if (target.kind == IndicatorReward::Kind::kState) return occ.state(target.layer, target.state);
  return occ.state_action(target.layer, target.state, target.action);
}

}  // namespace

double visitation_probability(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                              const IndicatorReward& target) {
  return visitation_impl(kernel, policy, target);
}

double visitation_probability(const LayeredKernel& kernel, const MixturePolicy& policy,
                              const IndicatorReward& target) {
  return visitation_impl(kernel, policy, target);
}

OptimalSolution optimal_value_and_policy(const LayeredKernel& kernel, const RewardTable& reward) {
  check_dimensions(kernel, reward);
  const int width = kernel.width();
  DeterministicPolicy policy(kernel.horizon(), kernel.num_states(), kernel.num_actions());
  std::vector<double> next(static_cast<std::size_t>(width), 0.0);
  std::vector<double> current(static_cast<std::size_t>(width), 0.0);
  for (int h = kernel.horizon() - 1; h >= 0; --h) {
    for (int s = 0; s < width; ++s) {
      double best = 0.0;
      int best_action = 0;
      for (int a = 0; a < kernel.num_actions(); ++a) {
        double q = reward_at(kernel, reward, h, s, a);
        const auto row = kernel.row(h, s, a);
        for (int n = 0; n < width; ++n) q += row[static_cast<std::size_t>(n)] * next[static_cast<std::size_t>(n)];
        if (a == 0 || q > best + kTieTolerance) {
          best = q;
          best_action = a;
        }
      }
      current[static_cast<std::size_t>(s)] = best;
      if (s < kernel.num_states()) policy.set_action(h, s, best_action);
    }
    std::swap(current, next);
  }
  return {next[static_cast<std::size_t>(kernel.initial_state())], std::move(policy)};
}

}  // namespace lowswitch
