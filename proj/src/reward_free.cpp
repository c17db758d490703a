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

#include "lowswitch/reward_free.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/evaluation.hpp"
#include "lowswitch/exploration.hpp"
#include "lowswitch/serialization.hpp"

namespace lowswitch {

namespace {

std::int64_t ceil_to_int(double x) {
  if (!(x < 9.0e18)) throw BudgetError("reward-free budget overflows");
  return static_cast<std::int64_t>(std::ceil(x));
}

}  // namespace

RewardFreeBudgets reward_free_budgets(int horizon, int num_states, int num_actions,
                                      const RewardFreeConfig& config) {
  if (!(config.epsilon > 0.0 && config.epsilon <= horizon)) {
    throw DomainError("epsilon must be in (0, H], got " + std::to_string(config.epsilon));
  }
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw DomainError("delta must be in (0, 1), got " + std::to_string(config.delta));
  }
  const double H = horizon;
  const double S = num_states;
  const double A = num_actions;
  const double h5 = std::pow(H, 5);
  const double explore_scale = config.c_rf * S * S * S * A * h5 / config.epsilon;
  const double evaluate_scale = config.c_rf * h5 * S * S * A / (config.epsilon * config.epsilon);

  RewardFreeBudgets budgets;
  if (config.mode == ThresholdMode::kTheory) {
    // iota depends on K = N0 + N; iterate to the fixed point.
    std::int64_t total = 1;
    for (int i = 0; i < 200; ++i) {
      budgets.iota = iota(horizon, num_actions, total, config.delta);
      budgets.exploration = ceil_to_int(explore_scale * budgets.iota);
      budgets.evaluation = ceil_to_int(evaluate_scale * budgets.iota);
      if (budgets.total() == total) break;
      total = budgets.total();
    }
  } else {
    const std::int64_t total = config.total_episodes;
    if (total < 2) throw BudgetError("reward-free run needs K >= 2");
    budgets.iota = iota(horizon, num_actions, total, config.delta);
    budgets.exploration =
        std::min<std::int64_t>(total / 2, ceil_to_int(explore_scale * budgets.iota));
    budgets.evaluation = total - budgets.exploration;
  }
  return budgets;
}

RewardFreeResult run_reward_free(EpisodeSimulator& env, const RewardFreeConfig& config, Rng& rng) {
  const int H = env.horizon();
  const int S = env.num_states();
  const int A = env.num_actions();
  const RewardFreeBudgets budgets = reward_free_budgets(H, S, A, config);
  const PolicySet all = PolicySet::unconstrained(H, S, A);

  ExplorationResult exploration =
      run_exploration(env, all, ExplorationBudget(budgets.exploration, H, S, A), budgets.iota, rng,
                      ExplorationOptions{config.c1, /*keep_dataset=*/false}, 0);
  EvaluationResult evaluation =
      run_evaluation(env, exploration.infrequent, exploration.pint, budgets.evaluation, all, rng,
                     EvaluationOptions{/*keep_dataset=*/false}, budgets.exploration);

  RewardFreeResult result;
  result.log = std::move(exploration.log);
  result.log.extend(evaluation.log);
  result.model.infrequent = std::move(exploration.infrequent);
  result.model.pint = std::move(exploration.pint);
  result.model.phat = std::move(evaluation.phat);
  result.model.budgets = budgets;
  result.model.epsilon = config.epsilon;
  result.model.seed = config.seed;
  return result;
}

DeterministicPolicy plan_for_reward(const RewardFreeModel& model, const RewardTable& reward) {
  if (model.phat.horizon() == 0) throw ModelNotFoundError("no stored reward-free model");
  check_dimensions(model.phat, reward);
  return optimal_value_and_policy(model.phat, reward).policy;
}

void save_reward_free_model(const RewardFreeModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_json_file(dir / "kernel.json", kernel_to_json(model.phat));
  write_json_file(dir / "exploration_kernel.json", kernel_to_json(model.pint));
  write_json_file(dir / "infrequent_set.json", infrequent_to_json(model.infrequent));
  write_json_file(dir / "metadata.json", Json{{"N0", model.budgets.exploration},
                                              {"N", model.budgets.evaluation},
                                              {"K", model.budgets.total()},
                                              {"iota", model.budgets.iota},
                                              {"epsilon", model.epsilon},
                                              {"seed", model.seed}});
}

RewardFreeModel load_reward_free_model(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ModelNotFoundError("no stored model at " + dir.string());
  }
  for (const char* name :
       {"kernel.json", "exploration_kernel.json", "infrequent_set.json", "metadata.json"}) {
    if (!std::filesystem::exists(dir / name)) {
      throw ModelNotFoundError("stored model is missing " + (dir / name).string());
    }
  }
  RewardFreeModel model;
  model.phat = kernel_from_json(read_json_file(dir / "kernel.json"));
  model.pint = kernel_from_json(read_json_file(dir / "exploration_kernel.json"));
  model.infrequent = infrequent_from_json(read_json_file(dir / "infrequent_set.json"));
  const Json meta = read_json_file(dir / "metadata.json");
  try {
    model.budgets.exploration = meta.at("N0").get<std::int64_t>();
    model.budgets.evaluation = meta.at("N").get<std::int64_t>();
    model.budgets.iota = meta.at("iota").get<double>();
    model.epsilon = meta.at("epsilon").get<double>();
    model.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw DimensionError(std::string("metadata: ") + e.what());
  }
  return model;
}

}  // namespace lowswitch
