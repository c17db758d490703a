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

#include <algorithm>
#include <cmath>
#include <vector>

#include "lowswitch/kernel.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch::testing {

// 2-state, 2-action, H=2 MDP with hand-set transitions and rewards.
inline TabularMDP hand_mdp() {
  LayeredKernel p(2, 2, 2, 0, false);
  const double rows[2][2][2][2] = {
      {{{0.7, 0.3}, {0.2, 0.8}}, {{0.5, 0.5}, {1.0, 0.0}}},
      {{{0.1, 0.9}, {0.6, 0.4}}, {{0.0, 1.0}, {0.35, 0.65}}},
  };
  for (int h = 0; h < 2; ++h)
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a)
        for (int n = 0; n < 2; ++n) p.set_prob(h, s, a, n, rows[h][s][a][n]);
  RewardTable r(2, 2, 2);
  r(0, 0, 0) = 0.2;
  r(0, 0, 1) = 0.6;
  r(0, 1, 0) = 1.0;
  r(0, 1, 1) = 0.0;
  r(1, 0, 0) = 0.5;
  r(1, 0, 1) = 0.9;
  r(1, 1, 0) = 0.3;
  r(1, 1, 1) = 0.75;
  return TabularMDP(p, r);
}

// Single-state chain with A actions: every action self-loops.
inline LayeredKernel chain_kernel(int horizon, int num_actions) {
  LayeredKernel p(horizon, 1, num_actions, 0, false);
  for (int h = 0; h < horizon; ++h)
    for (int a = 0; a < num_actions; ++a) p.set_prob(h, 0, a, 0, 1.0);
  return p;
}

inline double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace lowswitch::testing
