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

#include "lowswitch/exploration.hpp"

#include <string>
#include <utility>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"

namespace lowswitch {

ExplorationBudget::ExplorationBudget(std::int64_t total, int horizon, int num_states,
                                     int num_actions)
    : total_(total),
      blocks_(static_cast<std::int64_t>(horizon) * num_states * num_actions) {
  if (blocks_ <= 0) throw DimensionError("budget dimensions must be positive");
  if (total < blocks_) {
    throw BudgetError("episode budget " + std::to_string(total) + " is below HSA = " +
                      std::to_string(blocks_));
  }
  per_policy_ = total / blocks_;
  remainder_ = total % blocks_;
}

std::int64_t ExplorationBudget::episodes_for(std::int64_t block_index) const {
  return per_policy_ + (block_index < remainder_ ? 1 : 0);
}

namespace {

void check_policy_shape(const PolicySet& policies, int H, int S, int A) {
  if (policies.horizon() != H || policies.num_states() != S || policies.num_actions() != A) {
    throw DimensionError("policy set shape does not match the environment");
  }
  if (policies.is_explicit() && policies.size() == 0) {
    throw DimensionError("explicit policy set is empty");
  }
}

PlannedPolicy solve_unconstrained(const LayeredKernel& kernel, int h, int s, int a) {
  const RewardTable indicator = IndicatorReward::state_action(h, s, a)
                                    .to_table(kernel.horizon(), kernel.num_states(),
                                              kernel.num_actions());
  OptimalSolution solution = optimal_value_and_policy(kernel, indicator);
  return {std::move(solution.policy), solution.value};
}

}  // namespace

PlannedPolicy plan_visitation_maximizer(const LayeredKernel& kernel, int h, int s, int a,
                                        const PolicySet& policies) {
  check_policy_shape(policies, kernel.horizon(), kernel.num_states(), kernel.num_actions());
  if (h < 0 || h >= kernel.horizon() || s < 0 || s >= kernel.num_states() || a < 0 ||
      a >= kernel.num_actions()) {
    throw DimensionError("planning target out of range");
  }
  if (!policies.is_explicit()) return solve_unconstrained(kernel, h, s, a);

  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const double v = occupancy(kernel, policies.policies()[i]).state_action(h, s, a);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return {policies.policies()[best], best_value};
}

std::vector<PlannedPolicy> plan_layer_maximizers(const LayeredKernel& kernel, int h,
                                                 const PolicySet& policies) {
  const int S = kernel.num_states();
  const int A = kernel.num_actions();
  check_policy_shape(policies, kernel.horizon(), S, A);
  std::vector<PlannedPolicy> out;
  out.reserve(static_cast<std::size_t>(S) * A);
  if (!policies.is_explicit()) {
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) out.push_back(solve_unconstrained(kernel, h, s, a));
    return out;
  }

  const std::size_t targets = static_cast<std::size_t>(S) * A;
  std::vector<std::size_t> best(targets, 0);
  std::vector<double> best_value(targets, -1.0);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const Occupancy occ = occupancy(kernel, policies.policies()[i]);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const std::size_t t = static_cast<std::size_t>(s) * A + a;
        const double v = occ.state_action(h, s, a);
        if (v > best_value[t]) {
          best_value[t] = v;
          best[t] = i;
        }
      }
    }
  }
  for (std::size_t t = 0; t < targets; ++t) out.push_back({policies.policies()[best[t]], best_value[t]});
  return out;
}

std::vector<PlannedPolicy> plan_all_maximizers(const LayeredKernel& kernel,
                                               const PolicySet& policies) {
  const int H = kernel.horizon();
  const int S = kernel.num_states();
  const int A = kernel.num_actions();
  check_policy_shape(policies, H, S, A);
  std::vector<PlannedPolicy> out;
  if (!policies.is_explicit()) {
    for (int h = 0; h < H; ++h) {
      auto layer = plan_layer_maximizers(kernel, h, policies);
      for (auto& p : layer) out.push_back(std::move(p));
    }
    return out;
  }
  const std::size_t targets = static_cast<std::size_t>(H) * S * A;
  std::vector<std::size_t> best(targets, 0);
  std::vector<double> best_value(targets, -1.0);
  for (std::size_t i = 0; i < policies.size(); ++i) {
    const Occupancy occ = occupancy(kernel, policies.policies()[i]);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          const std::size_t t = (static_cast<std::size_t>(h) * S + s) * A + a;
          const double v = occ.state_action(h, s, a);
          if (v > best_value[t]) {
            best_value[t] = v;
            best[t] = i;
          }
        }
      }
    }
  }
  out.reserve(targets);
  for (std::size_t t = 0; t < targets; ++t) out.push_back({policies.policies()[best[t]], best_value[t]});
  return out;
}

// Layer-major: one block of T/(HSA) episodes per (s, a) target, with F and
// P^int rebuilt after each layer. Layer h's maximisers only read layers < h
// of P^int, which are final by the time layer h is planned.
ExplorationResult run_exploration(EpisodeSimulator& env, const PolicySet& policies,
                                  const ExplorationBudget& budget, double iota_value, Rng& rng,
                                  const ExplorationOptions& options,
                                  std::int64_t episode_offset) {
  const int H = env.horizon();
  const int S = env.num_states();
  const int A = env.num_actions();
  check_policy_shape(policies, H, S, A);
  if (budget.num_blocks() != static_cast<std::int64_t>(H) * S * A) {
    throw BudgetError("budget was built for a different HSA");
  }

  ExplorationResult result;
  result.pint = AbsorbingKernel::all_absorbing(H, S, A, env.initial_state(),
                                               KernelKind::kExplorationEstimate);
  result.infrequent = InfrequentSet(H, S, A, infrequent_threshold(H, iota_value, options.c1));
  std::int64_t observed = episode_offset;

  for (int h = 0; h < H; ++h) {
    const std::vector<PlannedPolicy> planned = plan_layer_maximizers(result.pint, h, policies);
    const std::int64_t committed = observed;
    CountsTable layer_counts(H, S, A);
    std::int64_t layer_episodes = 0;
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const std::int64_t block = (static_cast<std::int64_t>(h) * S + s) * A + a;
        const std::int64_t n = budget.episodes_for(block);
        const DeterministicPolicy& policy = planned[static_cast<std::size_t>(s) * A + a].policy;
        Rng block_rng(rng());
        for (std::int64_t i = 0; i < n; ++i) {
          Trajectory t = env.run(policy, block_rng);
          t.block = block;
          layer_counts.add_layer(t, h);
          if (options.keep_dataset) result.dataset.push_back(std::move(t));
        }
        result.log.append({policy, n, committed,
                           "explore h=" + std::to_string(h) + " s=" + std::to_string(s) +
                               " a=" + std::to_string(a)});
        layer_episodes += n;
      }
    }
    observed += layer_episodes;

    const InfrequentSet layer_set = build_infrequent_set(layer_counts, H, iota_value, options.c1);
    result.infrequent.assign_layer(layer_set, h);
    result.pint = estimate_transition(layer_counts, result.infrequent, h, result.pint,
                                      &result.unvisited);
    result.layer_counts.push_back(std::move(layer_counts));
  }
  return result;
}

}  // namespace lowswitch
