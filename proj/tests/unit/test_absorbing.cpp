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

#include "helpers.hpp"
#include "lowswitch/absorbing.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/oracles.hpp"
#include "lowswitch/serialization.hpp"
#include "lowswitch/verify.hpp"

using namespace lowswitch;
using lowswitch::testing::hand_mdp;

// Independent value: ln(8000) evaluated in double precision.
constexpr double kLn8000 = 8.987196820661973;

TEST_CASE("iota") {
  CHECK(iota(2, 2, 100, 0.1) == doctest::Approx(kLn8000).epsilon(1e-14));
  CHECK(iota(2, 2, 100, 800.0) == doctest::Approx(0.0));
  CHECK(iota(3, 2, 2000, 0.05) - iota(3, 2, 1000, 0.05) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(iota(0, 2, 100, 0.1), DomainError);
  CHECK_THROWS_AS(iota(2, 2, 0, 0.1), DomainError);
  CHECK_THROWS_AS(iota(2, 2, 100, 0.0), DomainError);
}

TEST_CASE("infrequent set threshold is strict") {
  const double i = iota(2, 2, 100, 0.1);
  CHECK(infrequent_threshold(2, i) == doctest::Approx(215.69272369588737).epsilon(1e-14));
  CountsTable counts(2, 1, 1);
  counts.set_count(0, 0, 0, 0, 215);
  counts.set_count(1, 0, 0, 0, 216);
  const InfrequentSet f = build_infrequent_set(counts, 2, i);
  CHECK(f.contains(0, 0, 0, 0));
  CHECK_FALSE(f.contains(1, 0, 0, 0));

  const CountsTable empty(2, 2, 2);
  CHECK(build_infrequent_set(empty, 2, i).size() == 2 * 2 * 2 * 2);
  CountsTable many(2, 2, 2);
  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a)
        for (int n = 0; n < 2; ++n) many.set_count(h, s, a, n, 1000);
  CHECK(build_infrequent_set(many, 2, i).empty());
}

TEST_CASE("counts table sums and merge") {
  const TabularMDP mdp = hand_mdp();
  Rng rng(11);
  std::vector<Trajectory> first, second;
  const DeterministicPolicy pi(2, 2, 2, 1);
  for (int i = 0; i < 300; ++i) first.push_back(simulate_episode(mdp.kernel(), pi, rng));
  for (int i = 0; i < 200; ++i) second.push_back(simulate_episode(mdp.kernel(), DeterministicPolicy(2, 2, 2), rng));
  CountsTable a = count_transitions(first, 2, 2, 2);
  const CountsTable b = count_transitions(second, 2, 2, 2);
  std::vector<Trajectory> all = first;
  all.insert(all.end(), second.begin(), second.end());
  const CountsTable pooled = count_transitions(all, 2, 2, 2);
  a.merge(b);
  CHECK(a == pooled);
  CHECK(pooled.episodes() == 500);
  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 2; ++s)
      for (int act = 0; act < 2; ++act) {
        std::int64_t total = 0;
        for (int n = 0; n < 2; ++n) total += pooled.count(h, s, act, n);
        CHECK(total == pooled.count(h, s, act));
      }
}

TEST_CASE("absorbing transform") {
  const TabularMDP mdp = hand_mdp();
  const AbsorbingKernel identity = absorbing_transform(mdp, InfrequentSet(2, 2, 2, 1.0));
  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) {
        for (int n = 0; n < 2; ++n) CHECK(identity.prob(h, s, a, n) == mdp.kernel().prob(h, s, a, n));
        CHECK(identity.prob(h, s, a, 2) == 0.0);
      }
  for (const auto& pi : PolicyEnumeration(2, 2, 2, 100)) {
    CHECK(absorption_probability(identity, pi) <= 1e-15);
    CHECK(std::abs(policy_value(identity, mdp.reward(), pi) - policy_value(mdp.kernel(), mdp.reward(), pi)) <= 1e-15);
  }

  InfrequentSet layer(2, 2, 2, 1.0);
  for (int n = 0; n < 2; ++n) layer.insert(0, 0, 1, n);
  const AbsorbingKernel absorbed = absorbing_transform(mdp, layer);
  CHECK(absorbed.prob(0, 0, 1, 2) == 1.0);
  absorbed.validate(layer);

  InfrequentSet first_layer(2, 2, 2, 1.0);
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int n = 0; n < 2; ++n) first_layer.insert(0, s, a, n);
  const AbsorbingKernel dead = absorbing_transform(mdp, first_layer);
  for (const auto& pi : PolicyEnumeration(2, 2, 2, 100)) CHECK(absorption_probability(dead, pi) == 1.0);
}

TEST_CASE("partial F lowers every visitation and is dominated entrywise") {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto mdp = gen_random_mdp(2, 2, 2, 1.0, RewardLaw::kUniform, rng());
    InfrequentSet f(2, 2, 2, 1.0);
    for (int h = 0; h < 2; ++h)
      for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
          for (int n = 0; n < 2; ++n)
            if (rng() % 3 == 0) f.insert(h, s, a, n);
    const AbsorbingKernel tilde = absorbing_transform(mdp, f);
    tilde.validate(f);
    for (int h = 0; h < 2; ++h)
      for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
          for (int n = 0; n < 2; ++n) CHECK(tilde.prob(h, s, a, n) <= mdp.kernel().prob(h, s, a, n));
    for (const auto& pi : PolicyEnumeration(2, 2, 2, 100)) {
      const Occupancy dt = occupancy(tilde, pi);
      const Occupancy dp = occupancy(mdp.kernel(), pi);
      for (int h = 0; h < 2; ++h)
        for (int s = 0; s < 2; ++s)
          for (int a = 0; a < 2; ++a) CHECK(dt.state_action(h, s, a) <= dp.state_action(h, s, a) + 1e-15);
    }
  }
}

TEST_CASE("estimate_transition follows the counting procedure") {
  CountsTable counts(1, 3, 1);
  counts.set_count(0, 0, 0, 1, 2);
  counts.set_count(0, 0, 0, 2, 2);
  const AbsorbingKernel base = AbsorbingKernel::all_absorbing(1, 3, 1, 0, KernelKind::kEvaluationEstimate);

  InfrequentSet none(1, 3, 1, 1.0);
  std::vector<UnvisitedRow> unvisited;
  const AbsorbingKernel plain = estimate_transition(counts, none, 0, base, &unvisited);
  CHECK(plain.prob(0, 0, 0, 0) == 0.0);
  CHECK(plain.prob(0, 0, 0, 1) == 0.5);
  CHECK(plain.prob(0, 0, 0, 2) == 0.5);
  CHECK(plain.prob(0, 0, 0, 3) == 0.0);
  // States 1 and 2 have no data: point mass on s+, reported.
  CHECK(plain.prob(0, 1, 0, 3) == 1.0);
  CHECK(unvisited.size() == 2);
  CHECK(unvisited[0] == UnvisitedRow{0, 1, 0});

  InfrequentSet one(1, 3, 1, 1.0);
  one.insert(0, 0, 0, 1);
  const AbsorbingKernel held = estimate_transition(counts, one, 0, base);
  CHECK(held.prob(0, 0, 0, 1) == 0.0);
  CHECK(held.prob(0, 0, 0, 2) == 0.5);
  CHECK(held.prob(0, 0, 0, 3) == 0.5);
  held.validate(one);
  for (int a = 0; a < 1; ++a) CHECK(held.prob(0, 3, a, 3) == 1.0);
}

TEST_CASE("estimate_transition leaves other layers and always yields a valid kernel") {
  const TabularMDP mdp = hand_mdp();
  Rng rng(4);
  std::vector<Trajectory> data;
  for (int i = 0; i < 400; ++i) data.push_back(simulate_episode(mdp.kernel(), DeterministicPolicy(2, 2, 2, i % 2), rng));
  InfrequentSet f(2, 2, 2, 50.0);
  f.insert(1, 0, 0, 1);
  const AbsorbingKernel base = absorbing_transform(mdp, InfrequentSet(2, 2, 2, 1.0));
  const AbsorbingKernel out = estimate_transition(data, f, 1, base);
  out.validate(f);
  for (int s = 0; s < 2; ++s)
    for (int a = 0; a < 2; ++a)
      for (int n = 0; n < 3; ++n) CHECK(out.prob(0, s, a, n) == base.prob(0, s, a, n));
}

TEST_CASE("multiplicative accuracy") {
  Rng rng(8);
  const AbsorbingKernel pa = random_absorbing_kernel(3, 2, 2, rng);
  CHECK(multiplicative_accuracy(pa, pa, 0.0));
  CHECK(multiplicative_accuracy(pa, pa, 0.3));

  const double theta = 0.1;
  AbsorbingKernel scaled = pa;
  const double p = pa.prob(1, 0, 1, 0);
  REQUIRE(p > 0.0);
  scaled.set_prob(1, 0, 1, 0, p * (1 + 2 * theta));
  CHECK_FALSE(multiplicative_accuracy(pa, scaled, theta));

  AbsorbingKernel sink_only = pa;
  sink_only.set_prob(2, 1, 0, 2, pa.prob(2, 1, 0, 2) * 5.0);
  CHECK(multiplicative_accuracy(pa, sink_only, theta));
}

TEST_CASE("absorption probability") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int H = 1 + trial % 3;
    const AbsorbingKernel k = random_absorbing_kernel(H, 2, 2, rng);
    PolicyEnumeration all(H, 2, 2, 1000);
    const auto pi = all.at(rng() % all.size());
    const double exact = absorption_probability(k, pi);
    CHECK(std::abs(exact - oracles::brute_force_absorption(k, pi)) <= 1e-12);
    double non_absorbed = 0.0;
    oracles::for_each_path(k, pi, [&](const std::vector<int>& states, double prob) {
      if (std::find(states.begin(), states.end(), 2) == states.end()) non_absorbed += prob;
    });
    CHECK(std::abs(exact - (1.0 - non_absorbed)) <= 1e-12);
    const auto parts = first_absorption_probabilities(k, pi);
    double sum = 0.0;
    for (double x : parts) sum += x;
    CHECK(parts.size() == static_cast<std::size_t>(H));
    CHECK(std::abs(sum - exact) <= 1e-12);
  }
}

TEST_CASE("visitation sandwich and trajectory-ratio bound on perturbed kernels") {
  Rng rng(12);
  int accepted = 0;
  while (accepted < 30) {
    const int H = 2 + accepted % 3;
    const AbsorbingKernel pa = random_absorbing_kernel(H, 2, 2, rng);
    const AbsorbingKernel pb = perturb_multiplicative(pa, 1.0 / H, rng);
    if (!multiplicative_accuracy(pa, pb, 1.0 / H)) continue;
    ++accepted;
    const auto policies = PolicyEnumeration(H, 2, 2, 1u << 12).materialize();
    std::string detail;
    CHECK_MESSAGE(visitation_sandwich_holds(pa, pb, policies, 1e-10, &detail), detail);
    const double lo = std::pow(1.0 - 1.0 / H, H);
    const double hi = std::pow(1.0 + 1.0 / H, H);
    for (int i = 0; i < 5; ++i) {
      const auto& pi = policies[rng() % policies.size()];
      const Trajectory t = simulate_episode(pa, pi, rng);
      if (t.states.back() == 2) continue;
      const double ratio = trajectory_probability(pb, pi, t) / trajectory_probability(pa, pi, t);
      CHECK(ratio >= lo - 1e-12);
      CHECK(ratio <= hi + 1e-12);
    }
  }
}

TEST_CASE("infrequent set JSON") {
  InfrequentSet f(2, 2, 2, 215.5);
  f.insert(0, 1, 0, 1);
  f.insert(1, 0, 1, 0);
  const Json json = infrequent_to_json(f);
  CHECK(json["tuples"].size() == 2);
  CHECK(json["tuples"][0] == Json::array({0, 1, 0, 1}));
  CHECK(infrequent_from_json(json) == f);
  Rng rng(1);
  const AbsorbingKernel k = random_absorbing_kernel(2, 2, 2, rng);
  CHECK(kernel_from_json(Json::parse(kernel_to_json(k).dump())) == k);
}
