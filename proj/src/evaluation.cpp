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

#include "lowswitch/evaluation.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"

namespace lowswitch {

// The HSA maximisers are planned once against P^int, so every block is
// committed before any evaluation data arrives (one batch). Each episode traverses every layer, so every layer of P-hat
// is estimated from the full pooled dataset.
EvaluationResult run_evaluation(EpisodeSimulator& env, const InfrequentSet& infrequent,
                                const AbsorbingKernel& pint, std::int64_t total,
                                const PolicySet& policies, Rng& rng,
                                const EvaluationOptions& options, std::int64_t episode_offset) {
  const int H = env.horizon();
  const int S = env.num_states();
  const int A = env.num_actions();
  if (pint.horizon() != H || pint.num_states() != S || pint.num_actions() != A) {
    throw DimensionError("P^int shape does not match the environment");
  }
  const ExplorationBudget budget(total, H, S, A);
  const std::vector<PlannedPolicy> planned = plan_all_maximizers(pint, policies);

  EvaluationResult result;
  result.counts = CountsTable(H, S, A);
  for (std::int64_t block = 0; block < budget.num_blocks(); ++block) {
    const DeterministicPolicy& policy = planned[static_cast<std::size_t>(block)].policy;
    const std::int64_t n = budget.episodes_for(block);
    Rng block_rng(rng());
    for (std::int64_t i = 0; i < n; ++i) {
      Trajectory t = env.run(policy, block_rng);
      t.block = block;
      result.counts.add(t);
      if (options.keep_dataset) result.dataset.push_back(std::move(t));
    }
    const int h = static_cast<int>(block / (S * A));
    const int s = static_cast<int>((block / A) % S);
    const int a = static_cast<int>(block % A);
    result.log.append({policy, n, episode_offset,
                       "evaluate h=" + std::to_string(h) + " s=" + std::to_string(s) +
                           " a=" + std::to_string(a)});
  }

  result.phat = AbsorbingKernel::all_absorbing(H, S, A, env.initial_state(),
                                               KernelKind::kEvaluationEstimate);
  for (int h = 0; h < H; ++h) {
    result.phat = estimate_transition(result.counts, infrequent, h, result.phat, &result.unvisited);
  }
  return result;
}

ValueGapReport value_gap_report(const LayeredKernel& estimate, const LayeredKernel& reference,
                                const PolicySet& policies,
                                const std::vector<RewardTable>& rewards) {
  if (!policies.is_explicit()) throw DimensionError("value gap report needs an explicit policy set");
  if (estimate.horizon() != reference.horizon() || estimate.num_states() != reference.num_states() ||
      estimate.num_actions() != reference.num_actions()) {
    throw DimensionError("kernels of different shapes");
  }
  ValueGapReport report;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& policy : policies.policies()) {
    std::vector<double> row;
    row.reserve(rewards.size());
    for (const auto& reward : rewards) {
      const double gap =
          std::abs(policy_value(estimate, reward, policy) - policy_value(reference, reward, policy));
      row.push_back(gap);
      report.max_gap = std::max(report.max_gap, gap);
      sum += gap;
      ++n;
    }
    report.gaps.push_back(std::move(row));
  }
  report.mean_gap = n == 0 ? 0.0 : sum / static_cast<double>(n);
  return report;
}

}  // namespace lowswitch
