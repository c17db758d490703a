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

#include "lowswitch/policy.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "lowswitch/errors.hpp"
#include "lowswitch/kernel.hpp"

namespace lowswitch {

DeterministicPolicy::DeterministicPolicy(int horizon, int num_states, int num_actions, int fill)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      actions_(static_cast<std::size_t>(horizon) * num_states, fill) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("policy dimensions must be positive");
  }
  if (fill < 0 || fill >= num_actions) throw DimensionError("policy action out of range");
}

DeterministicPolicy::DeterministicPolicy(int horizon, int num_states, int num_actions,
                                         std::vector<int> actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions),
      actions_(std::move(actions)) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("policy dimensions must be positive");
  }
  if (actions_.size() != static_cast<std::size_t>(horizon) * num_states) {
    throw DimensionError("policy table has the wrong size");
  }
  for (int a : actions_) {
    if (a < 0 || a >= num_actions) throw DimensionError("policy action out of range");
  }
}

void DeterministicPolicy::set_action(int h, int s, int a) {
  if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_ || a < 0 || a >= num_actions_) {
    throw DimensionError("policy entry out of range");
  }
  actions_[static_cast<std::size_t>(h * num_states_ + s)] = a;
}

std::string DeterministicPolicy::to_string() const {
  std::ostringstream out;
  for (int h = 0; h < horizon_; ++h) {
    if (h > 0) out << '|';
    for (int s = 0; s < num_states_; ++s) out << action(h, s) << (s + 1 < num_states_ ? "," : "");
  }
  return out.str();
}

std::size_t DeterministicPolicyHash::operator()(const DeterministicPolicy& policy) const {
  // FNV-1a over the action table.
  std::uint64_t hash = 1469598103934665603ull;
  for (int a : policy.actions()) {
    hash ^= static_cast<std::uint64_t>(a) + 1;
    hash *= 1099511628211ull;
  }
  return static_cast<std::size_t>(hash);
}

MixturePolicy::MixturePolicy(std::vector<Component> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DimensionError("mixture needs at least one component");
  double total = 0.0;
  const auto& first = components_.front().policy;
  for (const auto& c : components_) {
    if (!(c.weight >= 0.0)) throw DimensionError("mixture weight is negative");
    if (c.policy.horizon() != first.horizon() || c.policy.num_states() != first.num_states() ||
        c.policy.num_actions() != first.num_actions()) {
      throw DimensionError("mixture components disagree on shape");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kConstructionTolerance) {
    throw DimensionError("mixture weights do not sum to 1");
  }
}

MixturePolicy MixturePolicy::uniform(const std::vector<DeterministicPolicy>& policies) {
  std::vector<Component> components;
  components.reserve(policies.size());
  for (const auto& p : policies) {
    components.push_back({p, 1.0 / static_cast<double>(policies.size())});
  }
  return MixturePolicy(std::move(components));
}

std::uint64_t count_policies(int horizon, int num_states, int num_actions, bool* exact) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("policy dimensions must be positive");
  }
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  bool is_exact = true;
  const std::int64_t digits = static_cast<std::int64_t>(horizon) * num_states;
  for (std::int64_t i = 0; i < digits; ++i) {
    if (count > kMax / static_cast<std::uint64_t>(num_actions)) {
      count = kMax;
      is_exact = false;
      break;
    }
    count *= static_cast<std::uint64_t>(num_actions);
  }
  if (exact != nullptr) *exact = is_exact;
  return count;
}

PolicyEnumeration::PolicyEnumeration(int horizon, int num_states, int num_actions,
                                     std::uint64_t cap)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions) {
  bool exact = true;
  count_ = count_policies(horizon, num_states, num_actions, &exact);
  if (!exact || count_ > cap) throw CapExceededError(count_, exact, cap);
}

DeterministicPolicy PolicyEnumeration::at(std::uint64_t index) const {
  const std::size_t digits = static_cast<std::size_t>(horizon_) * num_states_;
  std::vector<int> actions(digits, 0);
  for (std::size_t i = digits; i-- > 0;) {
    actions[i] = static_cast<int>(index % static_cast<std::uint64_t>(num_actions_));
    index /= static_cast<std::uint64_t>(num_actions_);
  }
  return DeterministicPolicy(horizon_, num_states_, num_actions_, std::move(actions));
}

std::vector<DeterministicPolicy> PolicyEnumeration::materialize() const {
  std::vector<DeterministicPolicy> out;
  out.reserve(count_);
  for (DeterministicPolicy p : *this) out.push_back(std::move(p));
  return out;
}

PolicySet PolicySet::explicit_set(std::vector<DeterministicPolicy> policies) {
  if (policies.empty()) throw DimensionError("explicit policy set is empty");
  PolicySet set;
  set.mode_ = Mode::kExplicit;
  set.horizon_ = policies.front().horizon();
  set.num_states_ = policies.front().num_states();
  set.num_actions_ = policies.front().num_actions();
  std::set<DeterministicPolicy> seen;
  set.policies_.reserve(policies.size());
  for (auto& p : policies) {
    if (p.horizon() != set.horizon_ || p.num_states() != set.num_states_ ||
        p.num_actions() != set.num_actions_) {
      throw DimensionError("explicit policy set mixes shapes");
    }
    if (seen.insert(p).second) set.policies_.push_back(std::move(p));
  }
  return set;
}

PolicySet PolicySet::unconstrained(int horizon, int num_states, int num_actions) {
  if (horizon <= 0 || num_states <= 0 || num_actions <= 0) {
    throw DimensionError("policy dimensions must be positive");
  }
  PolicySet set;
  set.mode_ = Mode::kUnconstrained;
  set.horizon_ = horizon;
  set.num_states_ = num_states;
  set.num_actions_ = num_actions;
  return set;
}

PolicySet PolicySet::all_policies(int horizon, int num_states, int num_actions,
                                  std::uint64_t cap) {
  PolicyEnumeration enumeration(horizon, num_states, num_actions, cap);
  // Enumeration is already distinct; skip the dedup pass.
  PolicySet set;
  set.mode_ = Mode::kExplicit;
  set.horizon_ = horizon;
  set.num_states_ = num_states;
  set.num_actions_ = num_actions;
  set.policies_ = enumeration.materialize();
  return set;
}

}  // namespace lowswitch
