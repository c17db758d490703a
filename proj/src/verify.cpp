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

#include "lowswitch/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/elimination.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/oracles.hpp"
#include "lowswitch/reward_free.hpp"

namespace lowswitch {

AbsorbingKernel random_absorbing_kernel(int horizon, int num_states, int num_actions, Rng& rng) {
  AbsorbingKernel kernel(horizon, num_states, num_actions, 0, KernelKind::kTrueTransform);
  std::exponential_distribution<double> exponential(1.0);
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_actions; ++a) {
        auto row = kernel.mutable_row(h, s, a);
        double total = 0.0;
        for (auto& p : row) {
          p = exponential(rng);
          total += p;
        }
        for (auto& p : row) p /= total;
      }
    }
  }
  return kernel;
}

AbsorbingKernel perturb_multiplicative(const AbsorbingKernel& kernel, double theta, Rng& rng) {
  AbsorbingKernel out = kernel;
  std::uniform_real_distribution<double> factor(1.0 - theta, 1.0 + theta);
  const int S = kernel.num_states();
  for (int h = 0; h < kernel.horizon(); ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < kernel.num_actions(); ++a) {
        auto row = out.mutable_row(h, s, a);
        double total = 0.0;
        for (int n = 0; n < S; ++n) {
          row[static_cast<std::size_t>(n)] *= factor(rng);
          total += row[static_cast<std::size_t>(n)];
        }
        if (total > 1.0) {
          for (int n = 0; n < S; ++n) row[static_cast<std::size_t>(n)] /= total;
          total = 1.0;
        }
        row[static_cast<std::size_t>(S)] = std::max(0.0, 1.0 - total);
      }
    }
  }
  return out;
}

bool visitation_sandwich_holds(const LayeredKernel& pa, const LayeredKernel& pb,
                               const std::vector<DeterministicPolicy>& policies, double slack,
                               std::string* detail) {
  for (const auto& policy : policies) {
    const Occupancy da = occupancy(pa, policy);
    const Occupancy db = occupancy(pb, policy);
    for (int h = 0; h < pa.horizon(); ++h) {
      for (int s = 0; s < pa.num_states(); ++s) {
        for (int a = 0; a < pa.num_actions(); ++a) {
          const double va = da.state_action(h, s, a);
          const double vb = db.state_action(h, s, a);
          if (0.25 * va <= vb + slack && vb <= 3.0 * va + slack) continue;
          if (detail) {
            std::ostringstream out;
            out << "policy " << policy.to_string() << " target (" << h << "," << s << "," << a
                << "): " << va << " vs " << vb;
            *detail = out.str();
          }
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

template <typename F>
CheckResult check(const std::string& name, F&& body) {
  CheckResult result{name, true, ""};
  try {
    body(result);
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  return result;
}

void fail(CheckResult& r, const std::string& detail) {
  if (r.passed) r.detail = detail;
  r.passed = false;
}

void check_stochasticity(CheckResult& r, const SuiteOptions& o) {
  Rng rng(o.seed);
  for (int i = 0; i < o.instances; ++i) {
    const int H = 1 + static_cast<int>(rng() % 3);
    const int S = 1 + static_cast<int>(rng() % 3);
    const int A = 1 + static_cast<int>(rng() % 3);
    const auto mdp = gen_random_mdp(H, S, A, 0.5 + 0.5 * static_cast<double>(i % 2), RewardLaw::kUniform, rng());
    mdp.kernel().validate();
    InfrequentSet f(H, S, A, 1.0);
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) {
          for (int n = 0; n < S; ++n) {
            if (rng() % 3 == 0) f.insert(h, s, a, n);
          }
        }
      }
    }
    const auto tilde = absorbing_transform(mdp, f);
    tilde.validate(f);
    std::vector<Trajectory> data;
    const auto policies = PolicyEnumeration(H, S, A, 1'000'000).at(0);
    for (int k = 0; k < 50; ++k) data.push_back(simulate_episode(mdp.kernel(), policies, rng));
    const CountsTable counts = count_transitions(data, H, S, A);
    AbsorbingKernel estimate =
        AbsorbingKernel::all_absorbing(H, S, A, 0, KernelKind::kEvaluationEstimate);
    for (int h = 0; h < H; ++h) estimate = estimate_transition(counts, f, h, estimate);
    estimate.validate(f);
  }
  r.detail = std::to_string(o.instances) + " instances";
}

void check_oracles(CheckResult& r, const SuiteOptions& o) {
  Rng rng(o.seed + 1);
  int compared = 0;
  for (int i = 0; i < o.instances; ++i) {
    const int H = 1 + static_cast<int>(rng() % 3);
    const int S = 1 + static_cast<int>(rng() % 3);
    const int A = 1 + static_cast<int>(rng() % 3);
    const AbsorbingKernel kernel = random_absorbing_kernel(H, S, A, rng);
    const RewardTable reward = gen_random_reward(H, S, A, rng());
    PolicyEnumeration all(H, S, A, 1'000'000);
    for (int j = 0; j < 4; ++j) {
      const auto policy = all.at(rng() % all.size());
      const double v = policy_value(kernel, reward, policy);
      const double bv = oracles::brute_force_value(kernel, reward, policy);
      if (std::abs(v - bv) > 1e-9) fail(r, "value mismatch " + std::to_string(v - bv));
      const double ab = absorption_probability(kernel, policy);
      const double bab = oracles::brute_force_absorption(kernel, policy);
      if (std::abs(ab - bab) > 1e-9) fail(r, "absorption mismatch " + std::to_string(ab - bab));
      const auto target = IndicatorReward::state_action(static_cast<int>(rng() % H),
                                                        static_cast<int>(rng() % S),
                                                        static_cast<int>(rng() % A));
      const double vis = visitation_probability(kernel, policy, target);
      const double bvis = oracles::brute_force_visitation(kernel, policy, target);
      if (std::abs(vis - bvis) > 1e-9) fail(r, "visitation mismatch " + std::to_string(vis - bvis));
      ++compared;
    }
    const double star = optimal_value_and_policy(kernel, reward).value;
    const double exhaustive = oracles::exhaustive_optimal_value(kernel, reward);
    if (std::abs(star - exhaustive) > 1e-9) fail(r, "optimal value mismatch");
  }
  if (r.passed) r.detail = std::to_string(compared) + " policy comparisons";
}

void check_sandwich(CheckResult& r, const SuiteOptions& o) {
  Rng rng(o.seed + 2);
  int accepted = 0;
  while (accepted < o.instances) {
    const int H = 2 + accepted % 3;
    const AbsorbingKernel pa = random_absorbing_kernel(H, 2, 2, rng);
    const AbsorbingKernel pb = perturb_multiplicative(pa, 1.0 / H, rng);
    if (!multiplicative_accuracy(pa, pb, 1.0 / H)) continue;
    ++accepted;
    std::string detail;
    const auto policies = PolicyEnumeration(H, 2, 2, 1'000'000).materialize();
    if (!visitation_sandwich_holds(pa, pb, policies, 1e-10, &detail)) fail(r, detail);
  }
  if (r.passed) r.detail = std::to_string(accepted) + " kernel pairs";
}

void check_switching(CheckResult& r, const SuiteOptions& o) {
  const int H = 2, S = 2, A = 2;
  const std::int64_t hsa = H * S * A;
  for (int i = 0; i < 3; ++i) {
    const auto mdp = gen_random_mdp(H, S, A, 1.0, RewardLaw::kUniform, o.seed + 10 + i);
    Rng rng(o.seed + 20 + i);
    {
      EpisodeSimulator env(mdp);
      ApeveConfig config;
      config.total_episodes = 4096;
      const ApeveRun run = run_apeve(env, config, rng);
      const std::int64_t bound = 2 * hsa * run.schedule.num_stages();
      if (run.log.switching_cost() > bound) fail(r, "APEVE switching cost above 2HSA*K0");
      if (run.log.total_episodes() != config.total_episodes) fail(r, "APEVE did not use exactly K");
    }
    {
      EpisodeSimulator env(mdp);
      ApeveConfig config;
      config.total_episodes = 4096;
      const ApeveRun run = run_apeve_plus(env, config, rng);
      if (run.log.batch_count() > 2 * H + run.schedule.num_stages()) {
        fail(r, "APEVE+ batch count above 2H + K0");
      }
    }
    {
      EpisodeSimulator env(mdp);
      RewardFreeConfig config;
      config.total_episodes = 4000;
      const auto result = run_reward_free(env, config, rng);
      if (result.log.switching_cost() > 2 * hsa) fail(r, "reward-free switching cost above 2HSA");
    }
  }
  if (r.passed) r.detail = "3 instances, S=A=H=2";
}

void check_schedule(CheckResult& r, const SuiteOptions&) {
  for (int e = 4; e <= 20; ++e) {
    const std::int64_t K = std::int64_t{1} << e;
    for (auto kind : {ScheduleKind::kApeve, ScheduleKind::kApevePlus}) {
      const StageSchedule schedule = make_schedule(K, kind);
      if (schedule.consumed() != K) fail(r, "schedule does not sum to K at K=2^" + std::to_string(e));
      for (const auto& stage : schedule.stages) {
        const auto expected = std::llround(std::pow(static_cast<double>(K), 1.0 - std::ldexp(1.0, -stage.k)));
        if (stage.nominal != expected) fail(r, "T^(k) mismatch");
      }
      if (kind == ScheduleKind::kApeve &&
          schedule.num_stages() > static_cast<int>(std::ceil(std::log2(std::log2(static_cast<double>(K)))))) {
        fail(r, "K0 above ceil(log2 log2 K) at K=2^" + std::to_string(e));
      }
    }
  }
  if (r.passed) r.detail = "K = 2^4 .. 2^20";
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(check("kernel stochasticity", [&](CheckResult& r) { check_stochasticity(r, options); }));
  results.push_back(check("brute-force DP oracles", [&](CheckResult& r) { check_oracles(r, options); }));
  results.push_back(check("visitation sandwich", [&](CheckResult& r) { check_sandwich(r, options); }));
  results.push_back(check("switching and batch bounds", [&](CheckResult& r) { check_switching(r, options); }));
  results.push_back(check("schedule arithmetic", [&](CheckResult& r) { check_schedule(r, options); }));
  return results;
}

}  // namespace lowswitch
