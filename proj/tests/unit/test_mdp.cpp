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
#include <set>

#include "helpers.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/oracles.hpp"
#include "lowswitch/serialization.hpp"
#include "lowswitch/simulation.hpp"

using namespace lowswitch;
using lowswitch::testing::chain_kernel;
using lowswitch::testing::hand_mdp;

TEST_CASE("construction rejects bad tables") {
  LayeredKernel p(1, 2, 1, 0, false);
  p.set_prob(0, 0, 0, 0, 0.6);
  p.set_prob(0, 0, 0, 1, 0.3);
  p.set_prob(0, 1, 0, 1, 1.0);
  RewardTable r(1, 2, 1);
  CHECK_THROWS_AS(TabularMDP(p, r), DimensionError);
  p.set_prob(0, 0, 0, 1, 0.4);
  CHECK_NOTHROW(TabularMDP(p, r));
  r(0, 0, 0) = 1.5;
  CHECK_THROWS_AS(TabularMDP(p, r), DimensionError);
  r(0, 0, 0) = 0.5;
  p.set_prob(0, 1, 0, 0, -0.1);
  p.set_prob(0, 1, 0, 1, 1.1);
  CHECK_THROWS_AS(TabularMDP(p, r), DimensionError);
}

TEST_CASE("policy_value: trivial cases") {
  const TabularMDP mdp = hand_mdp();
  const RewardTable zero(2, 2, 2, 0.0);
  for (const auto& policy : PolicyEnumeration(2, 2, 2, 100)) {
    CHECK(policy_value(mdp.kernel(), zero, policy) == 0.0);
  }
  const LayeredKernel chain = chain_kernel(3, 1);
  const RewardTable ones(3, 1, 1, 1.0);
  CHECK(policy_value(chain, ones, DeterministicPolicy(3, 1, 1)) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("policy_value matches trajectory enumeration for all 16 policies") {
  const TabularMDP mdp = hand_mdp();
  int n = 0;
  for (const auto& policy : PolicyEnumeration(2, 2, 2, 100)) {
    const double dp = policy_value(mdp.kernel(), mdp.reward(), policy);
    const double brute = oracles::brute_force_value(mdp.kernel(), mdp.reward(), policy);
    CHECK(std::abs(dp - brute) <= 1e-12);
    ++n;
  }
  CHECK(n == 16);
  // One value computed by hand: policy (0,0,0,0) from s=0.
  // Layer 0: r=0.2, go to 0 w.p. 0.7 (r 0.5) or 1 w.p. 0.3 (r 0.3).
  const DeterministicPolicy zero_policy(2, 2, 2, 0);
  CHECK(policy_value(mdp.kernel(), mdp.reward(), zero_policy) ==
        doctest::Approx(0.2 + 0.7 * 0.5 + 0.3 * 0.3).epsilon(1e-14));
}

TEST_CASE("dimension mismatch is a structured error") {
  const TabularMDP mdp = hand_mdp();
  CHECK_THROWS_AS(policy_value(mdp.kernel(), RewardTable(3, 2, 2), DeterministicPolicy(2, 2, 2)),
                  DimensionError);
  CHECK_THROWS_AS(policy_value(mdp.kernel(), mdp.reward(), DeterministicPolicy(2, 3, 2)),
                  DimensionError);
  CHECK_THROWS_AS(DeterministicPolicy(2, 2, 2, 2), DimensionError);
}

TEST_CASE("visitation_probability") {
  const TabularMDP mdp = hand_mdp();
  DeterministicPolicy policy(2, 2, 2, 0);
  policy.set_action(0, 0, 1);
  CHECK(visitation_probability(mdp.kernel(), policy, IndicatorReward::state_action(0, 0, 1)) == 1.0);
  CHECK(visitation_probability(mdp.kernel(), policy, IndicatorReward::state_action(0, 1, 0)) == 0.0);

  // Action 1 is never played at layer 1 by the all-zero policy.
  LayeredKernel forced = chain_kernel(2, 2);
  CHECK(visitation_probability(forced, DeterministicPolicy(2, 1, 2, 0),
                               IndicatorReward::state_action(1, 0, 1)) == 0.0);
  LayeredKernel to_zero(2, 2, 1, 0, false);
  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 2; ++s) to_zero.set_prob(h, s, 0, 0, 1.0);
  CHECK(visitation_probability(to_zero, DeterministicPolicy(2, 2, 1),
                               IndicatorReward::state_only(1, 1)) == 0.0);

  for (const auto& pi : PolicyEnumeration(2, 2, 2, 100)) {
    for (int h = 0; h < 2; ++h)
      for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a) {
          const auto target = IndicatorReward::state_action(h, s, a);
          const double forward = visitation_probability(mdp.kernel(), pi, target);
          CHECK(std::abs(forward - oracles::brute_force_visitation(mdp.kernel(), pi, target)) <= 1e-12);
          const RewardTable indicator = target.to_table(2, 2, 2);
          CHECK(std::abs(forward - policy_value(mdp.kernel(), indicator, pi)) <= 1e-12);
          CHECK(forward >= 0.0);
          CHECK(forward <= 1.0 + kDerivedTolerance);
        }
    for (int h = 0; h < 2; ++h)
      for (int s = 0; s < 2; ++s) {
        const auto target = IndicatorReward::state_only(h, s);
        CHECK(std::abs(visitation_probability(mdp.kernel(), pi, target) -
                       oracles::brute_force_visitation(mdp.kernel(), pi, target)) <= 1e-12);
      }
  }
}

TEST_CASE("layer occupancy sums to one, absorbing state included") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mdp = gen_random_mdp(3, 3, 2, 0.6, RewardLaw::kUniform, rng());
    InfrequentSet f(3, 3, 2, 1.0);
    for (int h = 0; h < 3; ++h)
      for (int s = 0; s < 3; ++s)
        for (int a = 0; a < 2; ++a)
          if (rng() % 2) f.insert(h, s, a, static_cast<int>(rng() % 3));
    const auto tilde = absorbing_transform(mdp, f);
    PolicyEnumeration all(3, 3, 2, 1000);
    const auto pi = all.at(rng() % all.size());
    const Occupancy d = occupancy(tilde, pi);
    for (int h = 0; h <= 3; ++h) {
      double total = d.state(h, 3);
      for (int s = 0; s < 3; ++s) {
        if (h < 3) {
          double by_action = 0.0;
          for (int a = 0; a < 2; ++a) by_action += d.state_action(h, s, a);
          CHECK(std::abs(by_action - d.state(h, s)) <= 1e-12);
        }
        total += d.state(h, s);
      }
      CHECK(std::abs(total - 1.0) <= kDerivedTolerance);
    }
  }
}

TEST_CASE("mixture value is the weighted average; mixture visitation lower bound") {
  const TabularMDP mdp = hand_mdp();
  const auto all = PolicyEnumeration(2, 2, 2, 100).materialize();
  MixturePolicy m({{all[3], 0.25}, {all[9], 0.5}, {all[14], 0.25}});
  const double expected = 0.25 * policy_value(mdp.kernel(), mdp.reward(), all[3]) +
                          0.5 * policy_value(mdp.kernel(), mdp.reward(), all[9]) +
                          0.25 * policy_value(mdp.kernel(), mdp.reward(), all[14]);
  CHECK(std::abs(policy_value(mdp.kernel(), mdp.reward(), m) - expected) <= 1e-10);
  CHECK(std::abs(oracles::brute_force_value(mdp.kernel(), mdp.reward(), m) - expected) <= 1e-10);

  CHECK_THROWS_AS(MixturePolicy({{all[0], 0.5}, {all[1], 0.4}}), DimensionError);
  CHECK_THROWS_AS(MixturePolicy({{all[0], 1.5}, {all[1], -0.5}}), DimensionError);

  // Layer-h mixture of the SA visitation maximisers, weight 1/(SA) each.
  for (int h = 0; h < 2; ++h) {
    std::vector<DeterministicPolicy> maximisers;
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        const auto target = IndicatorReward::state_action(h, s, a);
        maximisers.push_back(optimal_value_and_policy(mdp.kernel(), target.to_table(2, 2, 2)).policy);
      }
    const MixturePolicy mix = MixturePolicy::uniform(maximisers);
    int i = 0;
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a, ++i) {
        const auto target = IndicatorReward::state_action(h, s, a);
        CHECK(visitation_probability(mdp.kernel(), mix, target) + 1e-12 >=
              0.25 * visitation_probability(mdp.kernel(), maximisers[static_cast<std::size_t>(i)], target));
      }
  }
}

TEST_CASE("optimal_value_and_policy") {
  const TabularMDP mdp = hand_mdp();
  const auto zero = optimal_value_and_policy(mdp.kernel(), RewardTable(2, 2, 2, 0.0));
  CHECK(zero.value == 0.0);
  CHECK(zero.policy == DeterministicPolicy(2, 2, 2, 0));

  const LayeredKernel chain = chain_kernel(4, 1);
  const RewardTable r(4, 1, 1, 0.25);
  const auto single = optimal_value_and_policy(chain, r);
  CHECK(single.policy == DeterministicPolicy(4, 1, 1, 0));
  CHECK(single.value == policy_value(chain, r, single.policy));

  // H=3, S=2, A=3: 729 policies, exhaustive.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto random = gen_random_mdp(3, 2, 3, 1.0, RewardLaw::kUniform, seed);
    const auto best = optimal_value_and_policy(random.kernel(), random.reward());
    double top = -1.0;
    for (const auto& pi : PolicyEnumeration(3, 2, 3, 1000)) {
      const double v = policy_value(random.kernel(), random.reward(), pi);
      CHECK(best.value + 1e-12 >= v);
      top = std::max(top, v);
    }
    CHECK(std::abs(best.value - top) <= 1e-12);
    CHECK(std::abs(policy_value(random.kernel(), random.reward(), best.policy) - best.value) <= 1e-12);
    CHECK(std::abs(oracles::exhaustive_optimal_value(random.kernel(), random.reward()) - best.value) <= 1e-12);
  }
}

TEST_CASE("simulate_episode") {
  const LayeredKernel chain = chain_kernel(5, 2);
  Rng a(1), b(999);
  const DeterministicPolicy pi(5, 1, 2, 1);
  CHECK(simulate_episode(chain, pi, a) == simulate_episode(chain, pi, b));

  const TabularMDP mdp = hand_mdp();
  const DeterministicPolicy zero(2, 2, 2);
  Rng c(42), d(42);
  for (int i = 0; i < 10; ++i) {
    CHECK(simulate_episode(mdp.kernel(), zero, c) == simulate_episode(mdp.kernel(), zero, d));
  }

  // Bernoulli(0.3) transition into state 1.
  LayeredKernel coin(1, 2, 1, 0, false);
  coin.set_prob(0, 0, 0, 0, 0.7);
  coin.set_prob(0, 0, 0, 1, 0.3);
  coin.set_prob(0, 1, 0, 1, 1.0);
  Rng rng(7);
  const int n = 100000;
  int hits = 0;
  const DeterministicPolicy only(1, 2, 1);
  for (int i = 0; i < n; ++i) hits += simulate_episode(coin, only, rng).states[1] == 1 ? 1 : 0;
  const double sigma = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(hits / static_cast<double>(n) - 0.3) <= 3 * sigma);
}

TEST_CASE("trajectory shape and probability") {
  const TabularMDP mdp = hand_mdp();
  Rng rng(3);
  const DeterministicPolicy pi(2, 2, 2, 1);
  const Trajectory t = simulate_episode(mdp.kernel(), pi, rng);
  CHECK(t.states.size() == 3);
  CHECK(t.actions.size() == 2);
  CHECK(t.states[0] == 0);
  CHECK(trajectory_probability(mdp.kernel(), pi, t) > 0.0);
}

TEST_CASE("policy enumeration") {
  CHECK(PolicyEnumeration(1, 1, 2, 100).size() == 2);
  CHECK(PolicyEnumeration(2, 2, 2, 100).size() == 16);
  const auto all = PolicyEnumeration(3, 3, 2, 1000).materialize();
  CHECK(all.size() == 512);
  CHECK(std::set<DeterministicPolicy>(all.begin(), all.end()).size() == 512);
  CHECK(std::is_sorted(all.begin(), all.end()));
  // Last table entry is least significant.
  CHECK(all[1].action(2, 2) == 1);
  CHECK(all[1].action(0, 0) == 0);

  try {
    PolicyEnumeration(3, 3, 3, 1000);
    FAIL("expected CapExceededError");
  } catch (const CapExceededError& e) {
    CHECK(e.count() == 19683);
    CHECK(e.exact());
    CHECK(std::string(e.what()).find("19683") != std::string::npos);
  }
  bool exact = true;
  count_policies(40, 40, 10, &exact);
  CHECK_FALSE(exact);
}

TEST_CASE("policy sets") {
  const auto all = PolicyEnumeration(2, 2, 2, 100).materialize();
  const PolicySet set = PolicySet::explicit_set({all[2], all[5], all[2]});
  CHECK(set.size() == 2);
  CHECK(set.policies()[0] == all[2]);
  CHECK_THROWS_AS(PolicySet::explicit_set({}), DimensionError);
  CHECK_FALSE(PolicySet::unconstrained(2, 2, 2).is_explicit());
  CHECK(PolicySet::all_policies(2, 2, 2, 100).size() == 16);
}

TEST_CASE("MDP JSON round trip is bit-faithful") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto mdp = gen_random_mdp(3, 3, 2, 0.7, RewardLaw::kUniform, seed);
    const TabularMDP back = mdp_from_json(Json::parse(mdp_to_json(mdp).dump()));
    CHECK(back == mdp);
  }
  Json bad = mdp_to_json(hand_mdp());
  bad["P"][0][0][0] = Json::array({0.5});
  CHECK_THROWS_AS(mdp_from_json(bad), DimensionError);
}
