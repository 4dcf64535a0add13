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

#include <optional>
#include <vector>

#include "itl/knowledge_base.hpp"
#include "itl/logic.hpp"

namespace itl {

struct PlanBounds {
  std::size_t max_depth = 8;
  std::size_t max_expansions = 100000;
};

struct Plan {
  std::vector<Atom> steps;
  std::vector<Literal> achieved_goal;
};

struct PlanRequest {
  const KnowledgeBase& kb;
  State initial;
  std::vector<Literal> goal;
  PlanBounds bounds{};
};

// Breadth-first search over eagerly grounded actions with duplicate-state
// pruning; successors are tried in canonical text order, so the result is a
// shortest plan and identical requests give identical plans.
// Throws UnknownPredicate for goals over unregistered predicates and
// ContractViolation for non-positive bounds.
std::optional<Plan> plan(const PlanRequest& req);

struct PlanCheck {
  bool valid = false;
  std::optional<std::size_t> failure_step;  // first step that could not run
  State final_state;
};

PlanCheck validate_plan(const KnowledgeBase& kb, const State& initial, const std::vector<Atom>& steps,
                        const std::vector<Literal>& goal);

// The literals a retrospective plan must achieve: additions as positive
// literals, removals as negative ones.
std::vector<Literal> diff_goal(const State& initial, const State& final_state);

std::optional<Plan> retrospective_plan(const KnowledgeBase& kb, const State& initial_observed,
                                       const State& final_observed, PlanBounds bounds = {});

}  // namespace itl
