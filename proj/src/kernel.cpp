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

#include "lowswitch/kernel.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "lowswitch/errors.hpp"

namespace lowswitch {
namespace {

std::string where(int h, int s, int a) {
  std::ostringstream out;
  out << "(h=" << h << ", s=" << s << ", a=" << a << ")";
  return out.str();
}

}  // namespace

LayeredKernel::LayeredKernel(int horizon, int num_states, int num_actions, int initial_state,
                             bool with_absorbing)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      initial_state_(initial_state),
      with_absorbing_(with_absorbing) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("kernel dimensions must be positive");
  }
  if (initial_state < 0 || initial_state >= num_states) {
    throw DimensionError("initial state out of range");
  }
  p_.assign(static_cast<std::size_t>(horizon) * width() * num_actions * width(), 0.0);
  if (with_absorbing) {
    for (int h = 0; h < horizon; ++h) {
      for (int a = 0; a < num_actions; ++a) set_prob(h, absorbing_state(), a, absorbing_state(), 1.0);
    }
  }
}

void LayeredKernel::validate() const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < width(); ++s) {
      for (int a = 0; a < num_actions_; ++a) {
        double sum = 0.0;
        for (double p : row(h, s, a)) {
          if (!(p >= 0.0) || !std::isfinite(p)) {
            throw DimensionError("negative or non-finite probability at " + where(h, s, a));
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > kConstructionTolerance) {
          throw DimensionError("row does not sum to 1 at " + where(h, s, a));
        }
      }
    }
    if (with_absorbing_) {
      for (int a = 0; a < num_actions_; ++a) {
        if (prob(h, absorbing_state(), a, absorbing_state()) != 1.0) {
          throw DimensionError("absorbing state is not a self-loop at " +
                               where(h, absorbing_state(), a));
        }
      }
    }
  }
}

bool LayeredKernel::same_shape(const LayeredKernel& other) const {
  return horizon_ == other.horizon_ && num_states_ == other.num_states_ &&
         num_actions_ == other.num_actions_ && width() == other.width();
}

RewardTable::RewardTable(int horizon, int num_states, int num_actions, double fill)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("reward dimensions must be positive");
  }
  r_.assign(static_cast<std::size_t>(horizon) * num_states * num_actions, fill);
}

void RewardTable::validate() const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      for (int a = 0; a < num_actions_; ++a) {
        const double r = (*this)(h, s, a);
        if (!(r >= -kConstructionTolerance && r <= 1.0 + kConstructionTolerance)) {
          throw DimensionError("reward outside [0, 1] at " + where(h, s, a));
        }
      }
    }
  }
}

RewardTable IndicatorReward::to_table(int horizon, int num_states, int num_actions) const {
  if (layer < 0 || layer >= horizon || state < 0 || state >= num_states ||
      (kind == Kind::kStateAction && (action < 0 || action >= num_actions))) {
    throw DimensionError("indicator target out of range");
  }
  RewardTable table(horizon, num_states, num_actions);
  if (kind == Kind::kStateAction) {
    table(layer, state, action) = 1.0;
  } else {
    for (int a = 0; a < num_actions; ++a) table(layer, state, a) = 1.0;
  }
  return table;
}

TabularMDP::TabularMDP(LayeredKernel kernel, RewardTable reward)
    : kernel_(std::move(kernel)), reward_(std::move(reward)) {
  if (kernel_.has_absorbing()) {
    throw DimensionError("a TabularMDP kernel has no absorbing column");
  }
  if (reward_.horizon() != kernel_.horizon() || reward_.num_states() != kernel_.num_states() ||
      reward_.num_actions() != kernel_.num_actions()) {
    throw DimensionError("reward table shape does not match the kernel");
  }
  kernel_.validate();
  reward_.validate();
}

}  // namespace lowswitch
