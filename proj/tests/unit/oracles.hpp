// Copyright 2026 The ITL Authors. All Rights Reserved.
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

#include <map>
#include <set>
#include <vector>

#include "itl/knowledge_base.hpp"
#include "itl/logic.hpp"

namespace itl::testing {

// Enumerates every action sequence of length <= max_depth depth-first and
// records the shortest prefix length at which each state is reached. A
// (state, remaining depth) pair already explored is not re-enumerated, since
// its subtree is identical.
class SequenceEnumerationOracle {
 public:
  SequenceEnumerationOracle(const KnowledgeBase& kb, const State& initial, std::size_t max_depth)
      : kb_(kb), actions_(ground_actions(kb.domain)), max_depth_(max_depth) {
    dfs(initial, 0);
  }

  // Shortest sequence length reaching a state satisfying `goal`, if any.
  std::optional<std::size_t> optimum(const std::vector<Literal>& goal) const {
    std::optional<std::size_t> best;
    for (const auto& [s, depth] : shortest_) {
      if (holds(s, goal) && (!best || depth < *best)) best = depth;
    }
    return best;
  }

  const std::map<State, std::size_t>& reached() const { return shortest_; }

 private:
  void dfs(const State& s, std::size_t depth) {
    auto it = shortest_.find(s);
    if (it == shortest_.end() || depth < it->second) shortest_[s] = depth;
    if (depth == max_depth_) return;
    std::size_t remaining = max_depth_ - depth;
    auto& done = explored_[s];
    if (done >= remaining) return;
    done = remaining;
    for (const auto& a : actions_) dfs(apply_schema(kb_, s, a), depth + 1);
  }

  const KnowledgeBase& kb_;
  std::vector<Atom> actions_;
  std::size_t max_depth_;
  std::map<State, std::size_t> shortest_;
  std::map<State, std::size_t> explored_;
};

}  // namespace itl::testing
