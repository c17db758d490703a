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
#include <random>
#include <vector>

#include "lowswitch/kernel.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch {

using Rng = std::mt19937_64;

// One episode (s_1, a_1, ..., s_H, a_H, s_{H+1}); `states` has H+1 entries
// and `actions` H. A state may equal the absorbing index when the episode
// was simulated against an absorbing kernel.
struct Trajectory {
  std::vector<int> states;
  std::vector<int> actions;
  std::int64_t episode = 0;
  // Identifier of the deployed policy block that produced the episode.
  std::int64_t block = 0;

  int horizon() const { return static_cast<int>(actions.size()); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Samples one episode. Deterministic given (kernel, policy, rng state).
Trajectory simulate_episode(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                            Rng& rng);

// Probability of the exact trajectory under a deterministic policy.
double trajectory_probability(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                              const Trajectory& trajectory);

// Environment handle given to the learning procedures: they may run
// episodes and read the known reward, but never the transition table.
class EpisodeSimulator {
 public:
  explicit EpisodeSimulator(const TabularMDP& mdp) : mdp_(&mdp) {}

  Trajectory run(const DeterministicPolicy& policy, Rng& rng);

  int horizon() const { return mdp_->horizon(); }
  int num_states() const { return mdp_->num_states(); }
  int num_actions() const { return mdp_->num_actions(); }
  int initial_state() const { return mdp_->initial_state(); }
  const RewardTable& reward() const { return mdp_->reward(); }

  // Episodes simulated so far through this handle.
  std::int64_t episodes() const { return episodes_; }

 private:
  const TabularMDP* mdp_;
  std::int64_t episodes_ = 0;
};

}  // namespace lowswitch
