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
#include <iosfwd>
#include <string>
#include <vector>

#include "lowswitch/absorbing.hpp"
#include "lowswitch/policy.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 2024;
  int instances = 10;
};

// Invariant suite for `lowswitch verify`: kernel stochasticity, oracle
// cross-checks, the visitation sandwich, switching-cost and batch bounds,
// and schedule arithmetic.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options = {});

// Random absorbing kernel whose rows put Dirichlet(1) mass on all S+1
// states.
AbsorbingKernel random_absorbing_kernel(int horizon, int num_states, int num_actions, Rng& rng);

// Scales every original-state entry by an independent factor in
// [1 - theta, 1 + theta], renormalising only if a row would exceed 1, and
// puts the rest on s+. The result may fail the accuracy test after
// renormalisation; callers filter with multiplicative_accuracy.
AbsorbingKernel perturb_multiplicative(const AbsorbingKernel& kernel, double theta, Rng& rng);

// (1/4) V^pi(1_{h,s,a}, pa) <= V^pi(1_{h,s,a}, pb) <= 3 V^pi(1_{h,s,a}, pa)
// for every policy and target, with additive `slack`. The first violation
// is described in `detail`.
bool visitation_sandwich_holds(const LayeredKernel& pa, const LayeredKernel& pb,
                               const std::vector<DeterministicPolicy>& policies, double slack,
                               std::string* detail = nullptr);

}  // namespace lowswitch
