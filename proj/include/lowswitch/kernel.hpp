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

#include <cstddef>
#include <span>
#include <vector>

namespace lowswitch {

// Tolerance for row sums and reward ranges when a table is constructed.
inline constexpr double kConstructionTolerance = 1e-12;
// Tolerance for quantities derived from valid tables (values, visitations).
inline constexpr double kDerivedTolerance = 1e-10;

// Layered transition table P_h(s'|s,a) for a finite-horizon MDP.
//
// Layers are 0-based: h = 0 is the first decision step, h = H-1 the last.
// `num_states()` counts the original states only. When the kernel carries an
// absorbing state, its index is `num_states()` and every row has
// `width() == num_states() + 1` entries. Storage is dense, row-major in
// (h, s, a, s').
class LayeredKernel {
 public:
  LayeredKernel() = default;
  LayeredKernel(int horizon, int num_states, int num_actions, int initial_state,
                bool with_absorbing);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int initial_state() const { return initial_state_; }
  bool has_absorbing() const { return with_absorbing_; }
  int absorbing_state() const { return num_states_; }
  // Number of states a row ranges over (original states + absorbing if any).
  int width() const { return num_states_ + (with_absorbing_ ? 1 : 0); }

  double prob(int h, int s, int a, int next) const {
    return p_[offset(h, s, a) + static_cast<std::size_t>(next)];
  }
  std::span<const double> row(int h, int s, int a) const {
    return {p_.data() + offset(h, s, a), static_cast<std::size_t>(width())};
  }
  std::span<double> mutable_row(int h, int s, int a) {
    return {p_.data() + offset(h, s, a), static_cast<std::size_t>(width())};
  }
  void set_prob(int h, int s, int a, int next, double value) {
    p_[offset(h, s, a) + static_cast<std::size_t>(next)] = value;
  }

  // Throws DimensionError on a non-stochastic row, a negative entry, or
  // an absorbing state that is not a self-loop.
  void validate() const;

  bool same_shape(const LayeredKernel& other) const;

  const std::vector<double>& data() const { return p_; }

  friend bool operator==(const LayeredKernel&, const LayeredKernel&) = default;

 protected:
  std::size_t offset(int h, int s, int a) const {
    return ((static_cast<std::size_t>(h) * static_cast<std::size_t>(width()) +
             static_cast<std::size_t>(s)) *
                static_cast<std::size_t>(num_actions_) +
            static_cast<std::size_t>(a)) *
           static_cast<std::size_t>(width());
  }

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  int initial_state_ = 0;
  bool with_absorbing_ = false;
  std::vector<double> p_;
};

// Reward table r_h(s,a) over the original states. Any absorbing state is
// implicitly zero-reward.
class RewardTable {
 public:
  RewardTable() = default;
  RewardTable(int horizon, int num_states, int num_actions, double fill = 0.0);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double operator()(int h, int s, int a) const { return r_[index(h, s, a)]; }
  double& operator()(int h, int s, int a) { return r_[index(h, s, a)]; }

  // Throws DimensionError when an entry is outside [0, 1].
  void validate() const;

  const std::vector<double>& data() const { return r_; }

  friend bool operator==(const RewardTable&, const RewardTable&) = default;

 private:
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * static_cast<std::size_t>(num_states_) +
            static_cast<std::size_t>(s)) *
               static_cast<std::size_t>(num_actions_) +
           static_cast<std::size_t>(a);
  }

  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<double> r_;
};

// Indicator reward 1_{h,s,a} or 1_{h,s}. Its value under a policy is the
// visitation probability of the target.
struct IndicatorReward {
  enum class Kind { kStateAction, kState };

  Kind kind = Kind::kStateAction;
  int layer = 0;
  int state = 0;
  int action = 0;  // ignored for kState

  static IndicatorReward state_action(int h, int s, int a) {
    return {Kind::kStateAction, h, s, a};
  }
  static IndicatorReward state_only(int h, int s) { return {Kind::kState, h, s, 0}; }

  RewardTable to_table(int horizon, int num_states, int num_actions) const;
};

// Finite-horizon tabular MDP with a fixed initial state.
class TabularMDP {
 public:
  TabularMDP() = default;
  // Validates both tables; the kernel must not carry an absorbing state.
  TabularMDP(LayeredKernel kernel, RewardTable reward);

  const LayeredKernel& kernel() const { return kernel_; }
  const RewardTable& reward() const { return reward_; }

  int horizon() const { return kernel_.horizon(); }
  int num_states() const { return kernel_.num_states(); }
  int num_actions() const { return kernel_.num_actions(); }
  int initial_state() const { return kernel_.initial_state(); }

  friend bool operator==(const TabularMDP&, const TabularMDP&) = default;

 private:
  LayeredKernel kernel_;
  RewardTable reward_;
};

}  // namespace lowswitch
