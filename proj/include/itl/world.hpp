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

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "itl/domain.hpp"
#include "itl/logic.hpp"

namespace itl {

// Complete, unfiltered snapshot of the world.
struct RawPercept {
  State atoms;
  std::size_t step_index = 0;

  bool operator==(const RawPercept&) const = default;
};

// Optional perception corruption; disabled unless set.
using PerceptNoise = std::function<State(const State&, std::size_t step_index)>;

// The ground-truth kitchen: richer than what the robot knows.
struct WorldModel {
  Domain domain;
  State state;
  std::size_t step_index = 0;
  PerceptNoise noise;

  RawPercept percept() const;
};

// Throws UnknownAction or SortError.
std::pair<WorldModel, RawPercept> execute(const WorldModel& world, const Atom& action);

// Throws ParseError (with line:column for malformed JSON), SortError, or
// UnknownPredicate for ill-formed declarations.
WorldModel load_domain(std::string_view text);
std::string save_domain(const WorldModel& world);
WorldModel load_domain_file(const std::string& path);

// Well-sortedness of every state atom plus one value per functional key.
// Throws SortError or ContractViolation.
void check_world_invariants(const WorldModel& world);

// Sub-instance over a subset of the objects; atoms mentioning dropped objects
// are removed from the state.
WorldModel restrict_objects(const WorldModel& world, const std::set<std::string>& keep);

std::string read_file(const std::string& path);

}  // namespace itl
