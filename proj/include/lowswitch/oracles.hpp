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
#include <functional>
#include <vector>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/kernel.hpp"
#include "lowswitch/policy.hpp"

// Reference computations by explicit enumeration of every state sequence.
// Exponential in H; for desk-scale cross-checks only.
namespace lowswitch::oracles {

// Calls `visit(states, probability)` for each of the width^H sequences
// s_1..s_{H+1} starting at the initial state (probability may be zero).
void for_each_path(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                   const std::function<void(const std::vector<int>&, double)>& visit);

double brute_force_value(const LayeredKernel& kernel, const RewardTable& reward,
                         const DeterministicPolicy& policy);
double brute_force_value(const LayeredKernel& kernel, const RewardTable& reward,
                         const MixturePolicy& policy);

double brute_force_visitation(const LayeredKernel& kernel, const DeterministicPolicy& policy,
                              const IndicatorReward& target);

// Probability that some s_{h+1} equals the absorbing index.
double brute_force_absorption(const LayeredKernel& kernel, const DeterministicPolicy& policy);

// max over every enumerated deterministic policy (refuses above `cap`).
double exhaustive_optimal_value(const LayeredKernel& kernel, const RewardTable& reward,
                                std::uint64_t cap = 1'000'000);

}  // namespace lowswitch::oracles
