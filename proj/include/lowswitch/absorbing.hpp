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

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "lowswitch/kernel.hpp"
#include "lowswitch/policy.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

// Transition counts N_h(s,a,s') and N_h(s,a) over original states.
// Counting is an associative fold: tables built on disjoint data merge by
// addition.
class CountsTable {
 public:
  CountsTable() = default;
  CountsTable(int horizon, int num_states, int num_actions);

  // Adds every transition of the trajectory taken from an original state
  // into an original state. Transitions into the absorbing index are not
  // counted (they cannot occur when simulating the true MDP).
  void add(const Trajectory& trajectory);
  // Adds only the layer-h transition.
  void add_layer(const Trajectory& trajectory, int h);
  void merge(const CountsTable& other);

  std::int64_t count(int h, int s, int a, int next) const {
    return transitions_[index(h, s, a) * static_cast<std::size_t>(num_states_) +
                        static_cast<std::size_t>(next)];
  }
  std::int64_t count(int h, int s, int a) const { return visits_[index(h, s, a)]; }
  std::int64_t episodes() const { return episodes_; }

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  void set_count(int h, int s, int a, int next, std::int64_t n);

  friend bool operator==(const CountsTable&, const CountsTable&) = default;

 private:
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * static_cast<std::size_t>(num_states_) +
            static_cast<std::size_t>(s)) *
               static_cast<std::size_t>(num_actions_) +
           static_cast<std::size_t>(a);
  }
  void add_transition(int h, int s, int a, int next);

  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::int64_t episodes_ = 0;
  std::vector<std::int64_t> transitions_;
  std::vector<std::int64_t> visits_;
};

CountsTable count_transitions(const std::vector<Trajectory>& data, int horizon, int num_states,
                              int num_actions);

using Tuple = std::array<int, 4>;  // (h, s, a, s')

// Infrequent tuples F: (h,s,a,s') seen fewer than `threshold` times.
class InfrequentSet {
 public:
  InfrequentSet() = default;
  InfrequentSet(int horizon, int num_states, int num_actions, double threshold);

  bool contains(int h, int s, int a, int next) const {
    return member_[index(h, s, a, next)] != 0;
  }
  void insert(int h, int s, int a, int next) { member_[index(h, s, a, next)] = 1; }
  void erase(int h, int s, int a, int next) { member_[index(h, s, a, next)] = 0; }

  // Replaces this set's layer-h membership with `other`'s.
  void assign_layer(const InfrequentSet& other, int h);

  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<Tuple> tuples() const;

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  // Every tuple at every layer.
  static InfrequentSet full(int horizon, int num_states, int num_actions, double threshold);

  friend bool operator==(const InfrequentSet&, const InfrequentSet&) = default;

 private:
  std::size_t index(int h, int s, int a, int next) const {
    return ((static_cast<std::size_t>(h) * static_cast<std::size_t>(num_states_) +
             static_cast<std::size_t>(s)) *
                static_cast<std::size_t>(num_actions_) +
            static_cast<std::size_t>(a)) *
               static_cast<std::size_t>(num_states_) +
           static_cast<std::size_t>(next);
  }

  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  double threshold_ = 0.0;
  std::vector<unsigned char> member_;
};

// Which object an absorbing kernel stands for.
enum class KernelKind {
  kTrueTransform,        // P-tilde: the true kernel with F mass rerouted
  kExplorationEstimate,  // P^int
  kEvaluationEstimate,   // P-hat
};

const char* to_string(KernelKind kind);

// Kernel over S+1 states; index S is the zero-reward absorbing state s+.
class AbsorbingKernel : public LayeredKernel {
 public:
  AbsorbingKernel() = default;
  AbsorbingKernel(int horizon, int num_states, int num_actions, int initial_state,
                  KernelKind kind);

  KernelKind kind() const { return kind_; }
  void set_kind(KernelKind kind) { kind_ = kind; }

  // Every original row points to s+; used as the starting P^int.
  static AbsorbingKernel all_absorbing(int horizon, int num_states, int num_actions,
                                       int initial_state, KernelKind kind);

  // LayeredKernel::validate plus: F entries are exactly zero.
  void validate(const InfrequentSet& infrequent) const;
  using LayeredKernel::validate;

  friend bool operator==(const AbsorbingKernel&, const AbsorbingKernel&) = default;

 private:
  KernelKind kind_ = KernelKind::kTrueTransform;
};

// iota = ln(2 H A K / delta). Throws DomainError unless every argument is
// positive. Run configurations additionally restrict delta to (0, 1).
double iota(int horizon, int num_actions, std::int64_t total_episodes, double delta);

inline constexpr double kDefaultC1 = 6.0;

double infrequent_threshold(int horizon, double iota_value, double c1 = kDefaultC1);

// F = {(h,s,a,s') : N_h(s,a,s') < c1 * H^2 * iota}.
InfrequentSet build_infrequent_set(const CountsTable& counts, int horizon, double iota_value,
                                   double c1 = kDefaultC1);

// P-tilde: copies P outside F, zeroes F entries, and routes their mass to s+.
AbsorbingKernel absorbing_transform(const TabularMDP& mdp, const InfrequentSet& infrequent);
// Same, for a plain kernel.
AbsorbingKernel absorbing_transform(const LayeredKernel& kernel, const InfrequentSet& infrequent);

struct UnvisitedRow {
  int layer;
  int state;
  int action;
  friend bool operator==(const UnvisitedRow&, const UnvisitedRow&) = default;
};

// Rewrites layer h of `base` from data, the EstimateTransition procedure:
// F entries 0, empirical ratio elsewhere, leftover mass to s+, s+ absorbing.
// Rows with N_h(s,a) = 0 become a point mass on s+ and are reported through
// `unvisited` when given.
AbsorbingKernel estimate_transition(const CountsTable& counts, const InfrequentSet& infrequent,
                                    int h, const AbsorbingKernel& base,
                                    std::vector<UnvisitedRow>* unvisited = nullptr);
AbsorbingKernel estimate_transition(const std::vector<Trajectory>& data,
                                    const InfrequentSet& infrequent, int h,
                                    const AbsorbingKernel& base,
                                    std::vector<UnvisitedRow>* unvisited = nullptr);

inline constexpr double kAccuracySlack = 1e-12;

// (1-theta) Pa <= Pb <= (1+theta) Pa on every original-state column; the s+
// column is not constrained.
bool multiplicative_accuracy(const LayeredKernel& pa, const LayeredKernel& pb, double theta);

// Probability that the trajectory ever enters s+ (bad event B).
double absorption_probability(const LayeredKernel& kernel, const DeterministicPolicy& policy);
double absorption_probability(const LayeredKernel& kernel, const MixturePolicy& policy);

// P(B_h) for h = 0..H-1: first entry into s+ at step h+1. Sums to
// absorption_probability.
std::vector<double> first_absorption_probabilities(const LayeredKernel& kernel,
                                                   const DeterministicPolicy& policy);

}  // namespace lowswitch
