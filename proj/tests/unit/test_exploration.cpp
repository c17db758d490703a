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
#include <sstream>

#include "helpers.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/exploration.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/serialization.hpp"
#include "lowswitch/verify.hpp"

using namespace lowswitch;
using lowswitch::testing::median;

TEST_CASE("exploration budget") {
  CHECK_THROWS_AS(ExplorationBudget(7, 2, 2, 2), BudgetError);
  const ExplorationBudget even(800, 2, 2, 2);
  CHECK(even.per_policy() == 100);
  const ExplorationBudget odd(803, 2, 2, 2);
  CHECK(odd.episodes_for(0) == 101);
  CHECK(odd.episodes_for(2) == 101);
  CHECK(odd.episodes_for(3) == 100);
  std::int64_t total = 0;
  for (std::int64_t b = 0; b < odd.num_blocks(); ++b) total += odd.episodes_for(b);
  CHECK(total == 803);
}

TEST_CASE("visitation maximiser planning") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 3);
  const auto unconstrained = PolicySet::unconstrained(2, 2, 2);
  const auto first = plan_visitation_maximizer(mdp.kernel(), 0, 0, 1, unconstrained);
  CHECK(first.policy.action(0, 0) == 1);
  CHECK(first.visitation == doctest::Approx(1.0));

  const auto all = PolicySet::all_policies(2, 2, 2, 100);
  const auto lone = PolicySet::explicit_set({all.policies()[6]});
  CHECK(plan_visitation_maximizer(mdp.kernel(), 1, 1, 0, lone).policy == all.policies()[6]);

  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        const auto u = plan_visitation_maximizer(mdp.kernel(), h, s, a, unconstrained);
        const auto e = plan_visitation_maximizer(mdp.kernel(), h, s, a, all);
        CHECK(std::abs(u.visitation - e.visitation) <= 1e-12);
        const auto subset = PolicySet::explicit_set({all.policies()[1], all.policies()[10]});
        CHECK(u.visitation + 1e-12 >= plan_visitation_maximizer(mdp.kernel(), h, s, a, subset).visitation);
      }
}

TEST_CASE("run_exploration: block structure and switching cost") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 5);
  EpisodeSimulator env(mdp);
  Rng rng(1);
  const double i = iota(2, 2, 800, 0.1);
  const auto result = run_exploration(env, PolicySet::all_policies(2, 2, 2, 100),
                                      ExplorationBudget(800, 2, 2, 2), i, rng);
  CHECK(result.log.blocks().size() == 8);
  for (const auto& block : result.log.blocks()) CHECK(block.episodes == 100);
  CHECK(result.log.switching_cost() <= 8);
  CHECK(result.log.total_episodes() == 800);
  CHECK(result.dataset.size() == 800);
  CHECK(result.log.batch_count() == 2);
  result.pint.validate(result.infrequent);
  CHECK(result.pint.kind() == KernelKind::kExplorationEstimate);
}

TEST_CASE("P^int layer h is built from layer h's block only") {
  const auto mdp = gen_random_mdp(3, 2, 2, 1.0, RewardLaw::kUniform, 6);
  EpisodeSimulator env(mdp);
  Rng rng(2);
  const double i = iota(3, 2, 6000, 0.1);
  const auto result = run_exploration(env, PolicySet::unconstrained(3, 2, 2),
                                      ExplorationBudget(6000, 3, 2, 2), i, rng);
  REQUIRE(result.layer_counts.size() == 3);
  AbsorbingKernel rebuilt = AbsorbingKernel::all_absorbing(3, 2, 2, 0, KernelKind::kExplorationEstimate);
  for (int h = 0; h < 3; ++h) {
    CHECK(result.layer_counts[static_cast<std::size_t>(h)].episodes() == 2000);
    rebuilt = estimate_transition(result.layer_counts[static_cast<std::size_t>(h)], result.infrequent, h, rebuilt);
    // Other layers of the counts table are empty.
    for (int g = 0; g < 3; ++g) {
      if (g == h) continue;
      for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) CHECK(result.layer_counts[static_cast<std::size_t>(h)].count(g, s, a) == 0);
    }
  }
  CHECK(rebuilt == result.pint);
  // Data of block b at layer h really comes from layer h's episodes.
  std::vector<Trajectory> layer1;
  for (const auto& t : result.dataset)
    if (t.block / 4 == 1) layer1.push_back(t);
  CountsTable from_data(3, 2, 2);
  for (const auto& t : layer1) from_data.add_layer(t, 1);
  CHECK(from_data == result.layer_counts[1]);
}

TEST_CASE("forced chain: F empty once counts clear the threshold") {
  const LayeredKernel chain = lowswitch::testing::chain_kernel(2, 1);
  const TabularMDP mdp(chain, RewardTable(2, 1, 1, 0.5));
  EpisodeSimulator env(mdp);
  Rng rng(3);
  const double i = iota(2, 1, 2000, 0.1);
  REQUIRE(infrequent_threshold(2, i) < 1000);
  const auto result = run_exploration(env, PolicySet::unconstrained(2, 1, 1),
                                      ExplorationBudget(2000, 2, 1, 1), i, rng);
  CHECK(result.infrequent.empty());
  CHECK(result.pint.prob(0, 0, 0, 0) == 1.0);
  CHECK(result.pint.prob(1, 0, 0, 0) == 1.0);
}

TEST_CASE("a rare transition lands in F") {
  LayeredKernel p(1, 2, 1, 0, false);
  p.set_prob(0, 0, 0, 0, 0.999);
  p.set_prob(0, 0, 0, 1, 0.001);
  p.set_prob(0, 1, 0, 1, 1.0);
  const TabularMDP mdp(p, RewardTable(1, 2, 1));
  const double i = iota(1, 1, 1000, 0.1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EpisodeSimulator env(mdp);
    Rng rng(seed);
    const auto result = run_exploration(env, PolicySet::unconstrained(1, 2, 1),
                                        ExplorationBudget(1000, 1, 2, 1), i, rng);
    CHECK(result.infrequent.contains(0, 0, 0, 1));
    CHECK_FALSE(result.infrequent.contains(0, 0, 0, 0));
  }
}

TEST_CASE("sandwich holds whenever P^int is 1/H-accurate for P-tilde") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 7);
  const auto policies = PolicyEnumeration(2, 2, 2, 100).materialize();
  int accurate = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EpisodeSimulator env(mdp);
    Rng rng(seed);
    const double i = iota(2, 2, 40000, 0.1);
    const auto result = run_exploration(env, PolicySet::unconstrained(2, 2, 2),
                                        ExplorationBudget(40000, 2, 2, 2), i, rng,
                                        {kDefaultC1, false});
    const AbsorbingKernel tilde = absorbing_transform(mdp, result.infrequent);
    if (!multiplicative_accuracy(result.pint, tilde, 0.5)) continue;
    ++accurate;
    std::string detail;
    CHECK_MESSAGE(visitation_sandwich_holds(result.pint, tilde, policies, 1e-10, &detail), detail);
  }
  MESSAGE("accurate seeds: " << accurate << "/10");
  CHECK(accurate > 0);
}

TEST_CASE("bad-event probability falls as T grows") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 8);
  const auto policies = PolicyEnumeration(2, 2, 2, 100).materialize();
  std::vector<double> medians;
  for (std::int64_t T : {400, 4000, 40000}) {
    std::vector<double> worst;
    for (std::uint64_t seed = 0; seed < 9; ++seed) {
      EpisodeSimulator env(mdp);
      Rng rng(seed);
      const auto result = run_exploration(env, PolicySet::unconstrained(2, 2, 2),
                                          ExplorationBudget(T, 2, 2, 2), iota(2, 2, T, 0.1), rng,
                                          {kDefaultC1, false});
      const AbsorbingKernel tilde = absorbing_transform(mdp, result.infrequent);
      double sup = 0.0;
      for (const auto& pi : policies) sup = std::max(sup, absorption_probability(tilde, pi));
      worst.push_back(sup);
    }
    medians.push_back(median(worst));
  }
  MESSAGE("median sup P(B): " << medians[0] << " " << medians[1] << " " << medians[2]);
  CHECK(medians[1] <= medians[0]);
  CHECK(medians[2] <= medians[1]);
  CHECK(medians[2] < medians[0]);
}

TEST_CASE("dataset JSON lines round trip") {
  const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, 9);
  EpisodeSimulator env(mdp);
  Rng rng(4);
  const auto result = run_exploration(env, PolicySet::unconstrained(2, 2, 2),
                                      ExplorationBudget(80, 2, 2, 2), iota(2, 2, 80, 0.1), rng);
  std::stringstream buffer;
  write_dataset_jsonl(buffer, result.dataset);
  CHECK(read_dataset_jsonl(buffer) == result.dataset);
  CHECK(result.dataset.back().block == 7);
}
