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

#include "lowswitch/simulation.hpp"

#include "lowswitch/dynamic_programming.hpp"

namespace lowswitch {

Trajectory simulate_episode(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                            Rng& rng) {
  check_dimensions(kernel, policy);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Trajectory trajectory;
  trajectory.states.reserve(static_cast<std::size_t>(kernel.horizon()) + 1);
  trajectory.actions.reserve(static_cast<std::size_t>(kernel.horizon()));
  int s = kernel.initial_state();
  trajectory.states.push_back(s);
  for (int h = 0; h < kernel.horizon(); ++h) {
    const int a = policy.action(h, s);
    const auto row = kernel.row(h, s, a);
    // Inverse-CDF draw; falls back to the last positive entry on rounding.
    const double u = uniform(rng);
    double cumulative = 0.0;
    int next = -1;
    int last_positive = 0;
    for (int n = 0; n < kernel.width(); ++n) {
      const double p = row[static_cast<std::size_t>(n)];
      if (p <= 0.0) continue;
      last_positive = n;
      cumulative += p;
      if (u < cumulative) {
        next = n;
        break;
      }
    }
    if (next < 0) next = last_positive;
    trajectory.actions.push_back(a);
    trajectory.states.push_back(next);
    s = next;
  }
  return trajectory;
}

double trajectory_probability(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                              const Trajectory& trajectory) {
  check_dimensions(kernel, policy);
  if (trajectory.states.empty() || trajectory.states.front() != kernel.initial_state()) return 0.0;
  double p = 1.0;
  for (int h = 0; h < trajectory.horizon(); ++h) {
    const int s = trajectory.states[static_cast<std::size_t>(h)];
    const int a = trajectory.actions[static_cast<std::size_t>(h)];
    if (policy.action(h, s) != a) return 0.0;
    p *= kernel.prob(h, s, a, trajectory.states[static_cast<std::size_t>(h) + 1]);
  }
  return p;
}

Trajectory EpisodeSimulator::run(const DeterministicPolicy& policy, Rng& rng) {
  Trajectory t = simulate_episode(mdp_->kernel(), policy, rng);
  t.episode = episodes_++;
  return t;
}

}  // namespace lowswitch
