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

#include "lowswitch/absorbing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"

namespace lowswitch {

// ---------------------------------------------------------------------------
// CountsTable

CountsTable::CountsTable(int horizon, int num_states, int num_actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("count table dimensions must be positive");
  }
  const std::size_t rows = static_cast<std::size_t>(horizon) * num_states * num_actions;
  visits_.assign(rows, 0);
  transitions_.assign(rows * static_cast<std::size_t>(num_states), 0);
}

void CountsTable::add_transition(int h, int s, int a, int next) {
  if (s >= num_states_ || next >= num_states_) return;
  ++visits_[index(h, s, a)];
  ++transitions_[index(h, s, a) * static_cast<std::size_t>(num_states_) +
                 static_cast<std::size_t>(next)];
}

void CountsTable::add(const Trajectory& trajectory) {
  if (trajectory.horizon() != horizon_) throw DimensionError("trajectory horizon mismatch");
  for (int h = 0; h < horizon_; ++h) {
    add_transition(h, trajectory.states[static_cast<std::size_t>(h)],
                   trajectory.actions[static_cast<std::size_t>(h)],
                   trajectory.states[static_cast<std::size_t>(h) + 1]);
  }
  ++episodes_;
}

void CountsTable::add_layer(const Trajectory& trajectory, int h) {
  if (trajectory.horizon() != horizon_) throw DimensionError("trajectory horizon mismatch");
  add_transition(h, trajectory.states[static_cast<std::size_t>(h)],
                 trajectory.actions[static_cast<std::size_t>(h)],
                 trajectory.states[static_cast<std::size_t>(h) + 1]);
  ++episodes_;
}

void CountsTable::merge(const CountsTable& other) {
  if (other.horizon_ != horizon_ || other.num_states_ != num_states_ ||
      other.num_actions_ != num_actions_) {
    throw DimensionError("cannot merge count tables of different shapes");
  }
  for (std::size_t i = 0; i < visits_.size(); ++i) visits_[i] += other.visits_[i];
  for (std::size_t i = 0; i < transitions_.size(); ++i) transitions_[i] += other.transitions_[i];
  episodes_ += other.episodes_;
}

void CountsTable::set_count(int h, int s, int a, int next, std::int64_t n) {
  auto& cell = transitions_[index(h, s, a) * static_cast<std::size_t>(num_states_) +
                            static_cast<std::size_t>(next)];
  visits_[index(h, s, a)] += n - cell;
  cell = n;
}

CountsTable count_transitions(const std::vector<Trajectory>& data, int horizon, int num_states,
                              int num_actions) {
  CountsTable counts(horizon, num_states, num_actions);
  for (const auto& t : data) counts.add(t);
  return counts;
}

// ---------------------------------------------------------------------------
// InfrequentSet

InfrequentSet::InfrequentSet(int horizon, int num_states, int num_actions, double threshold)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions), threshold_(threshold) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("infrequent set dimensions must be positive");
  }
  member_.assign(static_cast<std::size_t>(horizon) * num_states * num_actions * num_states, 0);
}

InfrequentSet InfrequentSet::full(int horizon, int num_states, int num_actions, double threshold) {
  InfrequentSet set(horizon, num_states, num_actions, threshold);
  std::fill(set.member_.begin(), set.member_.end(), 1);
  return set;
}

void InfrequentSet::assign_layer(const InfrequentSet& other, int h) {
  if (other.horizon_ != horizon_ || other.num_states_ != num_states_ ||
      other.num_actions_ != num_actions_) {
    throw DimensionError("infrequent sets of different shapes");
  }
  const std::size_t begin = index(h, 0, 0, 0);
  const std::size_t end = begin + static_cast<std::size_t>(num_states_) * num_actions_ * num_states_;
  std::copy(other.member_.begin() + static_cast<std::ptrdiff_t>(begin),
            other.member_.begin() + static_cast<std::ptrdiff_t>(end),
            member_.begin() + static_cast<std::ptrdiff_t>(begin));
}

std::size_t InfrequentSet::size() const {
  return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), 1));
}

std::vector<Tuple> InfrequentSet::tuples() const {
  std::vector<Tuple> out;
  for (int h = 0; h < horizon_; ++h)
    for (int s = 0; s < num_states_; ++s)
      for (int a = 0; a < num_actions_; ++a)
        for (int n = 0; n < num_states_; ++n)
          if (contains(h, s, a, n)) out.push_back({h, s, a, n});
  return out;
}

// ---------------------------------------------------------------------------
// AbsorbingKernel

const char* to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kTrueTransform: return "true_transform";
    case KernelKind::kExplorationEstimate: return "exploration_estimate";
    case KernelKind::kEvaluationEstimate: return "evaluation_estimate";
  }
  return "unknown";
}

AbsorbingKernel::AbsorbingKernel(int horizon, int num_states, int num_actions, int initial_state,
                                 KernelKind kind)
    : LayeredKernel(horizon, num_states, num_actions, initial_state, /*with_absorbing=*/true),
      kind_(kind) {}

AbsorbingKernel AbsorbingKernel::all_absorbing(int horizon, int num_states, int num_actions,
                                               int initial_state, KernelKind kind) {
  AbsorbingKernel kernel(horizon, num_states, num_actions, initial_state, kind);
  for (int h = 0; h < horizon; ++h)
    for (int s = 0; s < num_states; ++s)
      for (int a = 0; a < num_actions; ++a) kernel.set_prob(h, s, a, num_states, 1.0);
  return kernel;
}

void AbsorbingKernel::validate(const InfrequentSet& infrequent) const {
  LayeredKernel::validate();
  if (infrequent.horizon() != horizon() || infrequent.num_states() != num_states() ||
      infrequent.num_actions() != num_actions()) {
    throw DimensionError("infrequent set shape does not match the kernel");
  }
  for (const auto& [h, s, a, n] : infrequent.tuples()) {
    if (prob(h, s, a, n) != 0.0) throw DimensionError("infrequent tuple has non-zero mass");
  }
}

// ---------------------------------------------------------------------------
// Operations

double iota(int horizon, int num_actions, std::int64_t total_episodes, double delta) {
  if (horizon <= 0 || num_actions <= 0 || total_episodes <= 0 || !(delta > 0.0)) {
    throw DomainError("iota needs positive H, A, K and delta");
  }
  return std::log(2.0 * horizon * num_actions * static_cast<double>(total_episodes) / delta);
}

double infrequent_threshold(int horizon, double iota_value, double c1) {
  return c1 * static_cast<double>(horizon) * static_cast<double>(horizon) * iota_value;
}

InfrequentSet build_infrequent_set(const CountsTable& counts, int horizon, double iota_value,
                                   double c1) {
  const double threshold = infrequent_threshold(horizon, iota_value, c1);
  InfrequentSet set(counts.horizon(), counts.num_states(), counts.num_actions(), threshold);
  for (int h = 0; h < counts.horizon(); ++h)
    for (int s = 0; s < counts.num_states(); ++s)
      for (int a = 0; a < counts.num_actions(); ++a)
        for (int n = 0; n < counts.num_states(); ++n)
          if (static_cast<double>(counts.count(h, s, a, n)) < threshold) set.insert(h, s, a, n);
  return set;
}

AbsorbingKernel absorbing_transform(const LayeredKernel& kernel, const InfrequentSet& infrequent) {
  if (kernel.has_absorbing()) throw DimensionError("input kernel already has an absorbing state");
  if (infrequent.horizon() != kernel.horizon() || infrequent.num_states() != kernel.num_states() ||
      infrequent.num_actions() != kernel.num_actions()) {
    throw DimensionError("infrequent set shape does not match the kernel");
  }
  const int S = kernel.num_states();
  AbsorbingKernel out(kernel.horizon(), S, kernel.num_actions(), kernel.initial_state(),
                      KernelKind::kTrueTransform);
  for (int h = 0; h < kernel.horizon(); ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < kernel.num_actions(); ++a) {
        double moved = 0.0;
        for (int n = 0; n < S; ++n) {
          const double p = kernel.prob(h, s, a, n);
          if (infrequent.contains(h, s, a, n)) {
            moved += p;
          } else {
            out.set_prob(h, s, a, n, p);
          }
        }
        out.set_prob(h, s, a, S, moved);
      }
    }
  }
  return out;
}

AbsorbingKernel absorbing_transform(const TabularMDP& mdp, const InfrequentSet& infrequent) {
  return absorbing_transform(mdp.kernel(), infrequent);
}

AbsorbingKernel estimate_transition(const CountsTable& counts, const InfrequentSet& infrequent,
                                    int h, const AbsorbingKernel& base,
                                    std::vector<UnvisitedRow>* unvisited) {
  const int S = base.num_states();
  const int A = base.num_actions();
  if (counts.horizon() != base.horizon() || counts.num_states() != S || counts.num_actions() != A ||
      infrequent.horizon() != base.horizon() || infrequent.num_states() != S ||
      infrequent.num_actions() != A) {
    throw DimensionError("counts / infrequent set / kernel shapes disagree");
  }
  if (h < 0 || h >= base.horizon()) throw DimensionError("target layer out of range");

  AbsorbingKernel out = base;
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      auto row = out.mutable_row(h, s, a);
      const std::int64_t visits = counts.count(h, s, a);
      if (visits == 0) {
        std::fill(row.begin(), row.end(), 0.0);
        row[static_cast<std::size_t>(S)] = 1.0;
        if (unvisited != nullptr) unvisited->push_back({h, s, a});
        continue;
      }
      double kept = 0.0;
      for (int n = 0; n < S; ++n) {
        if (infrequent.contains(h, s, a, n)) {
          row[static_cast<std::size_t>(n)] = 0.0;
        } else {
          const double p = static_cast<double>(counts.count(h, s, a, n)) / static_cast<double>(visits);
          row[static_cast<std::size_t>(n)] = p;
          kept += p;
        }
      }
      row[static_cast<std::size_t>(S)] = std::max(0.0, 1.0 - kept);
    }
  }
  for (int a = 0; a < A; ++a) {
    auto row = out.mutable_row(h, S, a);
    std::fill(row.begin(), row.end(), 0.0);
    row[static_cast<std::size_t>(S)] = 1.0;
  }
  return out;
}

AbsorbingKernel estimate_transition(const std::vector<Trajectory>& data,
                                    const InfrequentSet& infrequent, int h,
                                    const AbsorbingKernel& base,
                                    std::vector<UnvisitedRow>* unvisited) {
  CountsTable counts(base.horizon(), base.num_states(), base.num_actions());
  for (const auto& t : data) counts.add_layer(t, h);
  return estimate_transition(counts, infrequent, h, base, unvisited);
}

bool multiplicative_accuracy(const LayeredKernel& pa, const LayeredKernel& pb, double theta) {
  if (!pa.same_shape(pb)) throw DimensionError("kernels of different shapes");
  const int S = pa.num_states();
  for (int h = 0; h < pa.horizon(); ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < pa.num_actions(); ++a) {
        for (int n = 0; n < S; ++n) {
          const double x = pa.prob(h, s, a, n);
          const double y = pb.prob(h, s, a, n);
          if (y < (1.0 - theta) * x - kAccuracySlack) return false;
          if (y > (1.0 + theta) * x + kAccuracySlack) return false;
        }
      }
    }
  }
  return true;
}

namespace {

double absorbed_mass(const LayeredKernel& kernel, const Occupancy& occ) {
  if (!kernel.has_absorbing()) return 0.0;
  double alive = 0.0;
  for (int s = 0; s < kernel.num_states(); ++s) alive += occ.state(kernel.horizon(), s);
  return std::clamp(1.0 - alive, 0.0, 1.0);
}

}  // namespace

double absorption_probability(const LayeredKernel& kernel, const DeterministicPolicy& policy) {
  return absorbed_mass(kernel, occupancy(kernel, policy));
}

double absorption_probability(const LayeredKernel& kernel, const MixturePolicy& policy) {
  return absorbed_mass(kernel, occupancy(kernel, policy));
}

std::vector<double> first_absorption_probabilities(const LayeredKernel& kernel,
                                                   const DeterministicPolicy& policy) {
  std::vector<double> out(static_cast<std::size_t>(kernel.horizon()), 0.0);
  if (!kernel.has_absorbing()) return out;
  const Occupancy occ = occupancy(kernel, policy);
  const int dagger = kernel.absorbing_state();
  for (int h = 0; h < kernel.horizon(); ++h) {
    double p = 0.0;
    for (int s = 0; s < kernel.num_states(); ++s)
      for (int a = 0; a < kernel.num_actions(); ++a)
        p += occ.state_action(h, s, a) * kernel.prob(h, s, a, dagger);
    out[static_cast<std::size_t>(h)] = p;
  }
  return out;
}

}  // namespace lowswitch
