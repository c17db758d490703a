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
#include <cstdint>
#include <functional>
#include <iterator>
#include <string>
#include <utility>
#include <vector>

namespace lowswitch {

// Deterministic Markov policy: table (h, s) -> a over the original states.
// At an absorbing state every policy plays action 0.
class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  DeterministicPolicy(int horizon, int num_states, int num_actions, int fill = 0);
  DeterministicPolicy(int horizon, int num_states, int num_actions,
                      std::vector<int> actions);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  int action(int h, int s) const {
    if (s >= num_states_) return 0;
    return actions_[static_cast<std::size_t>(h * num_states_ + s)];
  }
  void set_action(int h, int s, int a);

  const std::vector<int>& actions() const { return actions_; }
  std::string to_string() const;

  friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;
  friend auto operator<=>(const DeterministicPolicy& x, const DeterministicPolicy& y) {
    return x.actions_ <=> y.actions_;
  }

 private:
  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<int> actions_;
};

struct DeterministicPolicyHash {
  std::size_t operator()(const DeterministicPolicy& policy) const;
};

// Finite probability mixture of deterministic policies: one component is
// drawn at the start of the episode and followed throughout.
class MixturePolicy {
 public:
  struct Component {
    DeterministicPolicy policy;
    double weight = 0.0;
  };

  MixturePolicy() = default;
  // Throws DimensionError if weights are negative, do not sum to 1, or the
  // components disagree on shape.
  explicit MixturePolicy(std::vector<Component> components);

  static MixturePolicy uniform(const std::vector<DeterministicPolicy>& policies);

  const std::vector<Component>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

 private:
  std::vector<Component> components_;
};

// A^(S*H), saturating at UINT64_MAX. `exact` is cleared on saturation.
std::uint64_t count_policies(int horizon, int num_states, int num_actions, bool* exact);

// All A^(S*H) deterministic policies in lexicographic order of the flattened
// (h, s) table, h-major, with the first entry most significant.
class PolicyEnumeration {
 public:
  // Throws CapExceededError with the exact count when A^(S*H) > cap.
  PolicyEnumeration(int horizon, int num_states, int num_actions, std::uint64_t cap);

  std::uint64_t size() const { return count_; }
  DeterministicPolicy at(std::uint64_t index) const;
  std::vector<DeterministicPolicy> materialize() const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = DeterministicPolicy;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const PolicyEnumeration* owner, std::uint64_t index) : owner_(owner), index_(index) {}
    DeterministicPolicy operator*() const { return owner_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      iterator copy = *this;
      ++index_;
      return copy;
    }
    friend bool operator==(const iterator& x, const iterator& y) { return x.index_ == y.index_; }

   private:
    const PolicyEnumeration* owner_ = nullptr;
    std::uint64_t index_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }

 private:
  int horizon_;
  int num_states_;
  int num_actions_;
  std::uint64_t count_;
};

// The policy class phi a procedure optimises over: either an explicit,
// deduplicated list, or every deterministic policy of the given shape.
class PolicySet {
 public:
  enum class Mode { kExplicit, kUnconstrained };

  // Throws DimensionError on an empty list or mixed shapes. Duplicates are
  // dropped, first occurrence wins.
  static PolicySet explicit_set(std::vector<DeterministicPolicy> policies);
  static PolicySet unconstrained(int horizon, int num_states, int num_actions);
  // Explicit enumeration of all policies (subject to `cap`).
  static PolicySet all_policies(int horizon, int num_states, int num_actions, std::uint64_t cap);

  Mode mode() const { return mode_; }
  bool is_explicit() const { return mode_ == Mode::kExplicit; }
  const std::vector<DeterministicPolicy>& policies() const { return policies_; }
  std::size_t size() const { return policies_.size(); }

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

 private:
  Mode mode_ = Mode::kUnconstrained;
  int horizon_ = 0;
  int num_states_ = 0;
  int num_actions_ = 0;
  std::vector<DeterministicPolicy> policies_;
};

}  // namespace lowswitch
