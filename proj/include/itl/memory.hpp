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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "itl/domain.hpp"
#include "itl/logic.hpp"
#include "itl/parser.hpp"
#include "itl/world.hpp"

namespace itl {

struct EpisodeStep {
  std::size_t index = 0;
  std::optional<std::string> human_utterance;
  std::optional<DialogueAct> act;
  std::optional<Atom> executed_action;
  RawPercept pre_percept;
  RawPercept post_percept;

  bool operator==(const EpisodeStep&) const = default;
};

enum class Outcome { Completed, Aborted };

struct TaughtVerb {
  std::string verb;
  std::vector<std::string> args;

  bool operator==(const TaughtVerb&) const = default;
};

// One teaching interaction. `outcome` stays empty while it is in progress.
struct Episode {
  std::string id;
  std::optional<TaughtVerb> verb_being_taught;
  std::vector<EpisodeStep> steps;
  std::optional<Outcome> outcome;

  bool completed() const { return outcome.has_value(); }
  bool operator==(const Episode&) const = default;
};

// Appends `step`. Throws ContiguityError when the index or the percept chain
// does not continue the episode, and ContractViolation once it is completed.
Episode record_step(Episode episode, EpisodeStep step);

Episode complete(Episode episode, Outcome outcome = Outcome::Completed);

// Reads the atoms of one predicate off a raw percept.
using Detector = std::function<State(const RawPercept&, const PredicateSignature&)>;

State exact_readout(const RawPercept& percept, const PredicateSignature& sig);

// Per step, the atoms of `sig` true in the stored post-percept.
std::vector<std::pair<std::size_t, State>> redetect(const Episode& episode, const PredicateSignature& sig,
                                                    const Detector& detector = exact_readout);

// JSON-lines: a header record followed by one record per step.
std::string save_episode_log(const Episode& episode);
// Throws ParseError.
Episode load_episode_log(std::string_view text);

}  // namespace itl
