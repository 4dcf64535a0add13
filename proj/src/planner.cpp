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

#include "itl/planner.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "itl/error.hpp"

namespace itl {

namespace {

struct Node {
  State state;
  std::size_t parent;
  std::size_t action;
  std::size_t depth;
};

constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

}  // namespace

std::optional<Plan> plan(const PlanRequest& req) {
  if (req.bounds.max_depth == 0 || req.bounds.max_expansions == 0) {
    throw ContractViolation("plan bounds must be positive");
  }
  for (const auto& l : req.goal) {
    if (!req.kb.has_predicate(l.atom.predicate)) {
      throw UnknownPredicate("goal uses unregistered predicate " + l.atom.predicate);
    }
    if (!l.atom.is_ground()) throw ContractViolation("goal literal not ground: " + l.to_string());
  }
  if (holds(req.initial, req.goal)) return Plan{{}, req.goal};

  const std::vector<Atom> actions = ground_actions(req.kb.domain);
  std::vector<Node> nodes{{req.initial, kRoot, 0, 0}};
  std::unordered_set<std::string> seen{req.initial.key()};
  std::deque<std::size_t> frontier{0};
  std::size_t expansions = 0;

  while (!frontier.empty()) {
    std::size_t current = frontier.front();
    frontier.pop_front();
    if (nodes[current].depth >= req.bounds.max_depth) continue;
    if (++expansions > req.bounds.max_expansions) return std::nullopt;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      State next = apply_schema(req.kb, nodes[current].state, actions[i]);
      if (!seen.insert(next.key()).second) continue;
      nodes.push_back({std::move(next), current, i, nodes[current].depth + 1});
      std::size_t id = nodes.size() - 1;
      if (holds(nodes[id].state, req.goal)) {
        Plan p;
        p.achieved_goal = req.goal;
        for (std::size_t n = id; n != 0; n = nodes[n].parent) p.steps.push_back(actions[nodes[n].action]);
        std::reverse(p.steps.begin(), p.steps.end());
        return p;
      }
      frontier.push_back(id);
    }
  }
  return std::nullopt;
}

PlanCheck validate_plan(const KnowledgeBase& kb, const State& initial, const std::vector<Atom>& steps,
                        const std::vector<Literal>& goal) {
  PlanCheck out;
  out.final_state = initial;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      out.final_state = apply_schema(kb, out.final_state, steps[i]);
    } catch (const Error&) {
      out.failure_step = i;
      return out;
    }
  }
  out.valid = holds(out.final_state, goal);
  return out;
}

std::vector<Literal> diff_goal(const State& initial, const State& final_state) {
  StateDiff d = diff_states(initial, final_state);
  std::vector<Literal> goal;
  for (const auto& a : d.added) goal.push_back(Literal::pos(a));
  for (const auto& a : d.removed) goal.push_back(Literal::neg(a));
  return goal;
}

std::optional<Plan> retrospective_plan(const KnowledgeBase& kb, const State& initial_observed,
                                       const State& final_observed, PlanBounds bounds) {
  return plan({kb, initial_observed, diff_goal(initial_observed, final_observed), bounds});
}

}  // namespace itl
