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

#include "lowswitch/elimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"

namespace lowswitch {

// ---------------------------------------------------------------------------
// Schedule

std::int64_t StageSchedule::consumed() const {
  std::int64_t total_consumed = 0;
  for (const auto& s : stages) total_consumed += s.consumed();
  return total_consumed;
}

std::int64_t nominal_stage_length(std::int64_t total, int k) {
  const double exponent = 1.0 - std::ldexp(1.0, -k);
  return std::llround(std::pow(static_cast<double>(total), exponent));
}

StageSchedule make_schedule(std::int64_t total, ScheduleKind kind, std::int64_t min_pass) {
  if (total < 4) throw BudgetError("schedule needs K >= 4, got " + std::to_string(total));
  StageSchedule schedule;
  schedule.total = total;
  schedule.kind = kind;

  std::int64_t consumed = 0;
  for (int k = 1;; ++k) {
    const std::int64_t nominal = nominal_stage_length(total, k);
    const bool two_passes = kind == ScheduleKind::kApeve || k <= 2;
    const std::int64_t cost = (two_passes ? 2 : 1) * nominal;
    if (k == 1 && nominal < min_pass) {
      throw BudgetError("first stage T^(1) = " + std::to_string(nominal) +
                        " is below the minimum pass length " + std::to_string(min_pass));
    }
    if (consumed + cost < total) {
      schedule.stages.push_back({k, nominal, two_passes ? nominal : 0, nominal, false});
      consumed += cost;
      continue;
    }

    const std::int64_t rest = total - consumed;
    StageBudget last{k, nominal, 0, 0, rest != cost};
    if (two_passes) {
      last.explore_episodes = rest - rest / 2;
      last.evaluate_episodes = rest / 2;
    } else {
      last.evaluate_episodes = rest;
    }
    const std::int64_t shortest =
        two_passes ? std::min(last.explore_episodes, last.evaluate_episodes) : last.evaluate_episodes;
    if (shortest >= min_pass) {
      schedule.stages.push_back(last);
    } else {
      if (schedule.stages.empty()) {
        throw BudgetError("K = " + std::to_string(total) + " cannot fill one stage");
      }
      StageBudget& previous = schedule.stages.back();
      if (previous.explore_episodes > 0) {
        previous.explore_episodes += rest - rest / 2;
        previous.evaluate_episodes += rest / 2;
      } else {
        previous.evaluate_episodes += rest;
      }
      previous.truncated = true;
    }
    schedule.final_truncated = schedule.stages.back().truncated;
    break;
  }
  return schedule;
}

// ---------------------------------------------------------------------------
// Threshold and elimination

double default_constant(ThresholdMode mode) {
  return mode == ThresholdMode::kTheory ? kTheoryConstant : kCalibratedConstant;
}

const char* to_string(ThresholdMode mode) {
  return mode == ThresholdMode::kTheory ? "theory" : "calibrated";
}

double ApeveConfig::resolved_constant() const { return constant.value_or(default_constant(mode)); }

double elimination_gap(int horizon, int num_states, int num_actions, double iota_value,
                       double constant, std::int64_t stage_episodes,
                       std::int64_t additive_episodes) {
  if (stage_episodes <= 0 || additive_episodes <= 0) {
    throw BudgetError("elimination gap needs positive stage lengths");
  }
  const double H = horizon;
  const double S = num_states;
  const double A = num_actions;
  const double h5 = std::pow(H, 5);
  const double root = std::sqrt(h5 * S * S * A * iota_value / static_cast<double>(stage_episodes));
  const double additive = S * S * S * A * A * h5 * iota_value / static_cast<double>(additive_episodes);
  return 2.0 * constant * (root + additive);
}

EliminationOutcome eliminate_detailed(const PolicySet& policies, const LayeredKernel& phat,
                                      const RewardTable& reward, double gap) {
  if (!policies.is_explicit()) throw DimensionError("elimination needs an explicit policy set");
  if (policies.size() == 0) throw DimensionError("elimination over an empty policy set");
  EliminationOutcome outcome;
  outcome.values = policy_values(phat, reward, policies.policies());
  outcome.sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < outcome.values.size(); ++i) {
    if (outcome.values[i] > outcome.sup) {
      outcome.sup = outcome.values[i];
      outcome.argmax = i;
    }
  }
  std::vector<DeterministicPolicy> kept;
  for (std::size_t i = 0; i < outcome.values.size(); ++i) {
    const double v = outcome.values[i];
    if (v > outcome.sup - gap || v == outcome.sup) kept.push_back(policies.policies()[i]);
  }
  outcome.survivors = PolicySet::explicit_set(std::move(kept));
  return outcome;
}

PolicySet eliminate(const PolicySet& policies, const LayeredKernel& phat,
                    const RewardTable& reward, double gap) {
  return eliminate_detailed(policies, phat, reward, gap).survivors;
}

SurvivorSet SurvivorSet::from_explicit(PolicySet set) {
  SurvivorSet out;
  out.explicit_ = std::move(set);
  return out;
}

SurvivorSet SurvivorSet::from_predicate(RewardTable reward) {
  SurvivorSet out;
  out.reward_ = std::move(reward);
  return out;
}

std::optional<std::size_t> SurvivorSet::size() const {
  if (explicit_) return explicit_->size();
  return std::nullopt;
}

bool SurvivorSet::contains(const DeterministicPolicy& policy) const {
  if (explicit_) {
    const auto& members = explicit_->policies();
    return std::find(members.begin(), members.end(), policy) != members.end();
  }
  for (const auto& test : tests_) {
    const double v = policy_value(test.phat, reward_, policy);
    if (!(v > test.sup - test.gap || v == test.sup)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Staged elimination

namespace {

ApeveRun run_staged(EpisodeSimulator& env, const ApeveConfig& config, Rng& rng, bool plus) {
  const int H = env.horizon();
  const int S = env.num_states();
  const int A = env.num_actions();
  const std::int64_t hsa = static_cast<std::int64_t>(H) * S * A;

  ApeveRun run;
  run.algorithm = plus ? "apeve-plus" : "apeve";
  run.mode = config.mode;
  run.constant = config.resolved_constant();

  bool exact = true;
  const std::uint64_t count = count_policies(H, S, A, &exact);
  if (!exact || count > config.cap) {
    if (!config.allow_relaxed) throw CapExceededError(count, exact, config.cap);
    run.relaxed = true;
  }

  run.schedule = make_schedule(config.total_episodes,
                               plus ? ScheduleKind::kApevePlus : ScheduleKind::kApeve, hsa);
  run.iota = iota(H, A, config.total_episodes, config.delta);

  PolicySet phi = run.relaxed ? PolicySet::unconstrained(H, S, A)
                              : PolicySet::all_policies(H, S, A, config.cap);
  if (run.relaxed) run.survivors = SurvivorSet::from_predicate(env.reward());

  const ExplorationOptions exploration_options{config.c1, /*keep_dataset=*/false};
  const EvaluationOptions evaluation_options{/*keep_dataset=*/false};

  std::int64_t observed = 0;
  InfrequentSet kept_infrequent;
  AbsorbingKernel kept_pint;
  std::int64_t second_stage_length = 0;

  for (const StageBudget& stage : run.schedule.stages) {
    const bool explore = !plus || stage.k <= 2;
    InfrequentSet infrequent;
    AbsorbingKernel pint;
    if (explore) {
      ExplorationResult exploration =
          run_exploration(env, phi, ExplorationBudget(stage.explore_episodes, H, S, A), run.iota,
                          rng, exploration_options, observed);
      run.log.extend(exploration.log);
      observed += stage.explore_episodes;
      infrequent = std::move(exploration.infrequent);
      pint = std::move(exploration.pint);
      if (plus && stage.k == 2) {
        kept_infrequent = infrequent;
        kept_pint = pint;
      }
    } else {
      infrequent = kept_infrequent;
      pint = kept_pint;
    }

    EvaluationResult evaluation = run_evaluation(env, infrequent, pint, stage.evaluate_episodes,
                                                 phi, rng, evaluation_options, observed);
    run.log.extend(evaluation.log);
    observed += stage.evaluate_episodes;
    if (stage.k == 2) second_stage_length = stage.evaluate_episodes;

    const std::int64_t additive = plus && stage.k >= 3 ? second_stage_length : stage.evaluate_episodes;
    const double gap =
        elimination_gap(H, S, A, run.iota, run.constant, stage.evaluate_episodes, additive);

    StageRecord record;
    record.k = stage.k;
    record.nominal = stage.nominal;
    record.explore_episodes = stage.explore_episodes;
    record.evaluate_episodes = stage.evaluate_episodes;
    record.explored = explore;
    record.gap = gap;

    if (config.keep_stage_sets) run.stage_infrequent.push_back(infrequent);
    if (!run.relaxed) {
      EliminationOutcome outcome = eliminate_detailed(phi, evaluation.phat, env.reward(), gap);
      record.phi_size = static_cast<std::int64_t>(phi.size());
      record.survivors = static_cast<std::int64_t>(outcome.survivors.size());
      record.empirical_sup = outcome.sup;
      if (config.keep_stage_sets) {
        run.stage_sets.push_back(phi);
        run.stage_argmax.push_back(outcome.argmax);
      }
      phi = std::move(outcome.survivors);
    } else {
      const double sup = optimal_value_and_policy(evaluation.phat, env.reward()).value;
      record.empirical_sup = sup;
      run.survivors.add_test({std::move(evaluation.phat), sup, gap});
    }
    record.episodes_so_far = observed;
    record.switch_cost_so_far = run.log.switching_cost();
    record.batches_so_far = run.log.batch_count();
    run.stages.push_back(record);
  }
  if (!run.relaxed) run.survivors = SurvivorSet::from_explicit(std::move(phi));
  return run;
}

}  // namespace

ApeveRun run_apeve(EpisodeSimulator& env, const ApeveConfig& config, Rng& rng) {
  return run_staged(env, config, rng, /*plus=*/false);
}

ApeveRun run_apeve_plus(EpisodeSimulator& env, const ApeveConfig& config, Rng& rng) {
  return run_staged(env, config, rng, /*plus=*/true);
}

// ---------------------------------------------------------------------------
// Metrics

RegretMeter::RegretMeter(const TabularMDP& truth)
    : truth_(&truth), optimal_(optimal_value_and_policy(truth.kernel(), truth.reward())) {}

double RegretMeter::value(const DeterministicPolicy& policy) {
  auto it = cache_.find(policy);
  if (it != cache_.end()) return it->second;
  const double v = policy_value(truth_->kernel(), truth_->reward(), policy);
  cache_.emplace(policy, v);
  return v;
}

double RegretMeter::pseudo_regret(const DeploymentLog& log, std::int64_t up_to_episode) {
  double regret = 0.0;
  std::int64_t remaining = up_to_episode;
  for (const auto& block : log.blocks()) {
    if (remaining <= 0) break;
    const std::int64_t n = std::min(remaining, block.episodes);
    regret += static_cast<double>(n) * gap(block.policy);
    remaining -= n;
  }
  return regret;
}

RunMetrics compute_metrics(ApeveRun& run, const TabularMDP& truth) {
  RegretMeter meter(truth);
  RunMetrics metrics;
  for (auto& record : run.stages) {
    record.regret_so_far = meter.pseudo_regret(run.log, record.episodes_so_far);
    metrics.surviving_counts.push_back(record.survivors);
  }
  metrics.total_episodes = run.log.total_episodes();
  metrics.regret = meter.pseudo_regret(run.log, metrics.total_episodes);
  metrics.switch_cost = run.log.switching_cost();
  metrics.batches = run.log.batch_count();
  metrics.num_stages = run.schedule.num_stages();
  const auto size = run.survivors.size();
  metrics.survivors = size ? static_cast<std::int64_t>(*size) : -1;
  metrics.optimal_survived = run.survivors.contains(meter.optimal_policy());
  return metrics;
}

MixturePolicy pac_extract(const DeploymentLog& log, std::int64_t total_episodes) {
  if (total_episodes <= 0 || log.total_episodes() < total_episodes) {
    throw BudgetError("log holds fewer than K episodes");
  }
  std::vector<DeterministicPolicy> order;
  std::unordered_map<DeterministicPolicy, std::int64_t, DeterministicPolicyHash> multiplicity;
  std::int64_t remaining = total_episodes;
  for (const auto& block : log.blocks()) {
    if (remaining <= 0) break;
    const std::int64_t n = std::min(remaining, block.episodes);
    if (n == 0) continue;
    auto [it, inserted] = multiplicity.emplace(block.policy, 0);
    if (inserted) order.push_back(block.policy);
    it->second += n;
    remaining -= n;
  }
  std::vector<MixturePolicy::Component> components;
  components.reserve(order.size());
  for (auto& p : order) {
    const double w = static_cast<double>(multiplicity[p]) / static_cast<double>(total_episodes);
    components.push_back({std::move(p), w});
  }
  return MixturePolicy(std::move(components));
}

}  // namespace lowswitch
