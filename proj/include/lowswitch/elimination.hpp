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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lowswitch/absorbing.hpp"
#include "lowswitch/deployment.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/evaluation.hpp"
#include "lowswitch/exploration.hpp"
#include "lowswitch/policy.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

// ---------------------------------------------------------------------------
// Stage schedule
// ---------------------------------------------------------------------------

// APEVE stages spend 2 T^(k) episodes (exploration + evaluation). APEVE+
// does the same for stages 1-2 and spends T^(k) (evaluation only) after.
enum class ScheduleKind { kApeve, kApevePlus };

struct StageBudget {
  int k = 0;                       // 1-based stage index
  std::int64_t nominal = 0;        // round(K^(1 - 2^-k))
  std::int64_t explore_episodes = 0;
  std::int64_t evaluate_episodes = 0;
  bool truncated = false;          // shortened (or lengthened, see below) to exhaust K

  std::int64_t consumed() const { return explore_episodes + evaluate_episodes; }
};

struct StageSchedule {
  std::int64_t total = 0;
  ScheduleKind kind = ScheduleKind::kApeve;
  std::vector<StageBudget> stages;
  bool final_truncated = false;

  int num_stages() const { return static_cast<int>(stages.size()); }
  std::int64_t consumed() const;
};

std::int64_t nominal_stage_length(std::int64_t total, int k);

// T^(k) = round(K^(1-1/2^k)); K0 = min{j : cumulative consumption >= K};
// the last stage is cut so the total is exactly K. If the cut would leave a
// pass with fewer than `min_pass` episodes, the leftover is folded into the
// previous stage instead. Throws BudgetError when K < 4 or the first stage
// cannot meet `min_pass`.
StageSchedule make_schedule(std::int64_t total, ScheduleKind kind = ScheduleKind::kApeve,
                            std::int64_t min_pass = 1);

// ---------------------------------------------------------------------------
// Elimination threshold
// ---------------------------------------------------------------------------

enum class ThresholdMode { kTheory, kCalibrated };

inline constexpr double kTheoryConstant = 1.0;
inline constexpr double kCalibratedConstant = 0.05;

double default_constant(ThresholdMode mode);
const char* to_string(ThresholdMode mode);

// 2C( sqrt(H^5 S^2 A iota / T_k) + S^3 A^2 H^5 iota / T_additive ).
// APEVE and the first two APEVE+ stages use T_additive = T_k; later APEVE+
// stages use T^(2).
double elimination_gap(int horizon, int num_states, int num_actions, double iota_value,
                       double constant, std::int64_t stage_episodes,
                       std::int64_t additive_episodes);

struct EliminationOutcome {
  PolicySet survivors;
  std::vector<double> values;  // V^pi(r, P-hat) per input policy
  double sup = 0.0;
  std::size_t argmax = 0;
};

// Keeps pi iff V^pi(r, P-hat) > sup - gap, or V^pi equals the sup (so the
// argmax always survives, including for gap = 0). Throws DimensionError on
// an empty or unconstrained set.
EliminationOutcome eliminate_detailed(const PolicySet& policies, const LayeredKernel& phat,
                                      const RewardTable& reward, double gap);
PolicySet eliminate(const PolicySet& policies, const LayeredKernel& phat,
                    const RewardTable& reward, double gap);

// Survivors of a run. Explicit runs materialise the set; relaxed runs keep
// the stage tests and answer membership as a predicate.
class SurvivorSet {
 public:
  struct StageTest {
    AbsorbingKernel phat;
    double sup;
    double gap;
  };

  SurvivorSet() = default;
  static SurvivorSet from_explicit(PolicySet set);
  static SurvivorSet from_predicate(RewardTable reward);

  void add_test(StageTest test) { tests_.push_back(std::move(test)); }

  bool is_explicit() const { return explicit_.has_value(); }
  const PolicySet& explicit_set() const { return *explicit_; }
  // Unknown (nullopt) for predicate form.
  std::optional<std::size_t> size() const;
  bool contains(const DeterministicPolicy& policy) const;

 private:
  std::optional<PolicySet> explicit_;
  RewardTable reward_;
  std::vector<StageTest> tests_;
};

// ---------------------------------------------------------------------------
// APEVE / APEVE+
// ---------------------------------------------------------------------------

struct ApeveConfig {
  std::int64_t total_episodes = 0;  // K
  double delta = 0.1;
  ThresholdMode mode = ThresholdMode::kCalibrated;
  std::optional<double> constant;  // C; defaults per mode
  double c1 = kDefaultC1;
  std::uint64_t cap = 1'000'000;
  // Above the cap, run with unconstrained planning and predicate survivors
  // instead of failing.
  bool allow_relaxed = false;
  // Keep per-stage policy sets and infrequent sets (tests, diagnostics).
  bool keep_stage_sets = false;

  double resolved_constant() const;
};

struct StageRecord {
  int k = 0;
  std::int64_t nominal = 0;
  std::int64_t explore_episodes = 0;
  std::int64_t evaluate_episodes = 0;
  bool explored = false;
  std::int64_t phi_size = -1;        // |phi^k| before elimination; -1 if relaxed
  std::int64_t survivors = -1;       // |phi^(k+1)|; -1 if relaxed
  double gap = 0.0;
  double empirical_sup = 0.0;
  std::int64_t episodes_so_far = 0;
  std::int64_t switch_cost_so_far = 0;
  std::int64_t batches_so_far = 0;
  std::optional<double> regret_so_far;  // filled by compute_metrics
};

struct ApeveRun {
  std::string algorithm;  // "apeve" or "apeve-plus"
  StageSchedule schedule;
  double iota = 0.0;
  double constant = 0.0;
  ThresholdMode mode = ThresholdMode::kCalibrated;
  bool relaxed = false;
  DeploymentLog log;
  std::vector<StageRecord> stages;
  SurvivorSet survivors;
  // Only populated with keep_stage_sets: phi^k before stage k's
  // elimination, and the F used in stage k's evaluation.
  std::vector<PolicySet> stage_sets;
  std::vector<InfrequentSet> stage_infrequent;
  std::vector<std::size_t> stage_argmax;  // index into stage_sets[k]
};

// Throws CapExceededError when A^(SH) > cap and relaxed mode is not allowed,
// BudgetError when the first stage is shorter than HSA.
ApeveRun run_apeve(EpisodeSimulator& env, const ApeveConfig& config, Rng& rng);
ApeveRun run_apeve_plus(EpisodeSimulator& env, const ApeveConfig& config, Rng& rng);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

// Exact V* - V^pi on the true MDP, cached per policy. Not thread-safe.
class RegretMeter {
 public:
  explicit RegretMeter(const TabularMDP& truth);
  double optimal_value() const { return optimal_.value; }
  const DeterministicPolicy& optimal_policy() const { return optimal_.policy; }
  double value(const DeterministicPolicy& policy);
  double gap(const DeterministicPolicy& policy) { return optimal_.value - value(policy); }
  double pseudo_regret(const DeploymentLog& log, std::int64_t up_to_episode);

 private:
  const TabularMDP* truth_;
  OptimalSolution optimal_;
  std::unordered_map<DeterministicPolicy, double, DeterministicPolicyHash> cache_;
};

struct RunMetrics {
  std::int64_t total_episodes = 0;
  double regret = 0.0;
  std::int64_t switch_cost = 0;
  std::int64_t batches = 0;
  int num_stages = 0;           // K0 of the executed schedule
  std::int64_t survivors = -1;  // -1 if relaxed
  bool optimal_survived = false;
  std::vector<std::int64_t> surviving_counts;
};

// Fills every StageRecord::regret_so_far and summarises the run.
RunMetrics compute_metrics(ApeveRun& run, const TabularMDP& truth);

// Uniform mixture over the first K deployed episodes, compressed to distinct
// policies weighted by multiplicity.
MixturePolicy pac_extract(const DeploymentLog& log, std::int64_t total_episodes);

}  // namespace lowswitch
