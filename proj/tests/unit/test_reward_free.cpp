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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "helpers.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/reward_free.hpp"

using namespace lowswitch;

TEST_CASE("reward-free budgets") {
  RewardFreeConfig config;
  config.epsilon = 0.0;
  CHECK_THROWS_AS(reward_free_budgets(2, 2, 2, config), DomainError);
  config.epsilon = 2.5;
  CHECK_THROWS_AS(reward_free_budgets(2, 2, 2, config), DomainError);

  config.epsilon = 0.1;
  config.total_episodes = 200000;
  const auto calibrated = reward_free_budgets(2, 2, 2, config);
  const double i = iota(2, 2, 200000, 0.1);
  CHECK(calibrated.iota == doctest::Approx(i));
  CHECK(calibrated.exploration == static_cast<std::int64_t>(std::ceil(8.0 * 2 * 32 * i / 0.1)));
  CHECK(calibrated.total() == 200000);

  config.total_episodes = 20000;
  const auto halved = reward_free_budgets(2, 2, 2, config);
  CHECK(halved.exploration == 10000);
  CHECK(halved.evaluation == 10000);

  config.mode = ThresholdMode::kTheory;
  const auto theory = reward_free_budgets(2, 2, 2, config);
  const double ti = iota(2, 2, theory.total(), 0.1);
  CHECK(theory.iota == doctest::Approx(ti).epsilon(1e-6));
  CHECK(theory.exploration == static_cast<std::int64_t>(std::ceil(8.0 * 2 * 32 * theory.iota / 0.1)));
  CHECK(theory.evaluation == static_cast<std::int64_t>(std::ceil(32.0 * 4 * 2 * theory.iota / 0.01)));
}

TEST_CASE("reward-free run: switching cost and model contents") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 1);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EpisodeSimulator env(mdp);
    Rng rng(seed);
    RewardFreeConfig config;
    config.total_episodes = 20000;
    const auto result = run_reward_free(env, config, rng);
    CHECK(result.log.switching_cost() <= 16);
    CHECK(result.log.total_episodes() == 20000);
    result.model.phat.validate(result.model.infrequent);
    result.model.pint.validate(result.model.infrequent);
  }
}

TEST_CASE("S = A = 1: estimate is exact once counts clear the threshold") {
  const auto mdp = gen_random_mdp(3, 1, 1, 1.0, RewardLaw::kUniform, 2);
  EpisodeSimulator env(mdp);
  Rng rng(3);
  RewardFreeConfig config;
  // Per-layer blocks of N0 / 3 episodes must clear c1 H^2 iota (about 760).
  config.total_episodes = 20000;
  const auto result = run_reward_free(env, config, rng);
  CHECK(result.model.infrequent.empty());
  for (int h = 0; h < 3; ++h) CHECK(result.model.phat.prob(h, 0, 0, 0) == 1.0);
  const auto policy = plan_for_reward(result.model, gen_random_reward(3, 1, 1, 5));
  CHECK(policy == DeterministicPolicy(3, 1, 1, 0));
  CHECK(result.log.switching_cost() == 0);
}

TEST_CASE("plan_for_reward") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 4);
  RewardFreeModel model;
  CHECK_THROWS_AS(plan_for_reward(model, mdp.reward()), ModelNotFoundError);

  // Exact P-hat: absorbing copy of the true kernel.
  model.phat = absorbing_transform(mdp, InfrequentSet(2, 2, 2, 1.0));
  CHECK(plan_for_reward(model, RewardTable(2, 2, 2, 0.0)) == DeterministicPolicy(2, 2, 2, 0));
  CHECK(plan_for_reward(model, mdp.reward()) ==
        optimal_value_and_policy(mdp.kernel(), mdp.reward()).policy);
  const auto target = IndicatorReward::state_action(1, 1, 0);
  const auto visit = plan_for_reward(model, target.to_table(2, 2, 2));
  const double v = policy_value(model.phat, target.to_table(2, 2, 2), visit);
  CHECK(v <= 1.0 + 1e-12);
  CHECK(v == doctest::Approx(optimal_value_and_policy(model.phat, target.to_table(2, 2, 2)).value));
}

TEST_CASE("reward-free PAC on the 2x2x2 instance and suboptimality decomposition") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 1);
  const auto policies = PolicyEnumeration(2, 2, 2, 100).materialize();
  int good_seeds = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EpisodeSimulator env(mdp);
    Rng rng(seed);
    const auto result = run_reward_free(env, RewardFreeConfig{}, rng);
    int within = 0;
    for (int q = 0; q < 10; ++q) {
      const RewardTable r = gen_random_reward(2, 2, 2, 1000 * seed + q);
      const auto planned = plan_for_reward(result.model, r);
      const double sub = optimal_value_and_policy(mdp.kernel(), r).value -
                         policy_value(mdp.kernel(), r, planned);
      within += sub <= 0.1 ? 1 : 0;
      double worst = 0.0;
      for (const auto& p : policies) {
        worst = std::max(worst, std::abs(policy_value(result.model.phat, r, p) -
                                         policy_value(mdp.kernel(), r, p)));
      }
      CHECK(sub <= 2 * worst + 1e-12);
    }
    good_seeds += within == 10 ? 1 : 0;
  }
  CHECK(good_seeds >= 4);
}

TEST_CASE("stored model round trip") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 1);
  EpisodeSimulator env(mdp);
  Rng rng(0);
  RewardFreeConfig config;
  config.total_episodes = 4000;
  config.seed = 99;
  const auto result = run_reward_free(env, config, rng);
  const auto dir = std::filesystem::temp_directory_path() / "lowswitch_rf_model_test";
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_reward_free_model(dir), ModelNotFoundError);
  save_reward_free_model(result.model, dir);
  const auto back = load_reward_free_model(dir);
  CHECK(back.phat == result.model.phat);
  CHECK(back.pint == result.model.pint);
  CHECK(back.infrequent == result.model.infrequent);
  CHECK(back.budgets.exploration == result.model.budgets.exploration);
  CHECK(back.seed == 99);
  std::filesystem::remove(dir / "metadata.json");
  CHECK_THROWS_AS(load_reward_free_model(dir), ModelNotFoundError);
  std::filesystem::remove_all(dir);
}
