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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "itl/domain.hpp"
#include "itl/knowledge_base.hpp"
#include "itl/logic.hpp"
#include "itl/memory.hpp"
#include "itl/parser.hpp"
#include "itl/planner.hpp"
#include "itl/world.hpp"

namespace itl {

struct Abnormality {
  std::vector<Atom> demonstrated;
  std::optional<std::vector<Atom>> planned;
  std::vector<Atom> missing_actions;
  StateDiff unexplained;  // observed final against the KB's simulation of the demonstration

  bool operator==(const Abnormality&) const = default;
};

std::vector<Atom> demonstrated_actions(const Episode& episode);

// First pre-percept and last post-percept as the robot sees them.
std::pair<State, State> observed_endpoints(const KnowledgeBase& kb, const Episode& episode);

// `demonstrated` minus a longest common subsequence with `planned`.
std::vector<Atom> sequence_difference(const std::vector<Atom>& demonstrated, const std::vector<Atom>& planned);

// Frame roles used when lifting verb arguments: theme, target, instrument, ...
std::string frame_role(std::size_t position);

// Goal of a verb from the observed change over a completed episode, restricted
// to atoms that mention an argument and otherwise only fixed objects or values.
// Throws NoStateChange or ContractViolation.
VerbEntry learn_verb(const KnowledgeBase& kb, const Episode& episode, const std::string& verb,
                     const std::vector<std::string>& args);

// A demonstration that is itself a shortest plan for the observed change is
// preferred over the planner's own choice, so permutations are not flagged.
std::optional<Abnormality> detect_abnormality(const KnowledgeBase& kb, const Episode& episode,
                                              PlanBounds bounds = {});

struct Acquisition {
  KnowledgeBase kb;
  Lexicon lexicon;
  PredicateSignature signature;
  Atom atom;
  bool registered = false;  // false when the predicate was already known
};

// Throws UnknownObject or ContractViolation.
Acquisition acquire_predicate(const KnowledgeBase& kb, const Lexicon& lex, const DialogueAct& effect_description);

struct CauseStep {
  std::size_t index = 0;
  Atom action;

  bool operator==(const CauseStep&) const = default;
};

// Earliest step whose pre-percept lacks `atom` and whose post-percept has it.
// Throws NoCauseFound.
CauseStep localize_cause(const Episode& episode, const Atom& atom, const Detector& detector = exact_readout);

struct ConditionEvidence {
  State context;
  Substitution binding;
  Atom action;
  bool effect_observed = false;

  bool operator==(const ConditionEvidence&) const = default;
};

using ConditionMask = std::uint32_t;

inline constexpr std::size_t kMaxCandidates = 8;

struct ConditionHypothesisSpace {
  Literal effect;  // lifted
  std::vector<TypedVar> vars;
  std::string action;
  Atom cause;
  Substitution primary;  // binding under which the effect was described
  State primary_context;
  std::vector<Literal> candidates;           // bit i of a mask is candidates[i]
  std::vector<ConditionMask> version_space;  // ascending
  std::vector<ConditionEvidence> evidence;
  std::optional<std::size_t> coinciding_rule;  // top-level rule whose guard held at the cause step

  std::vector<Literal> members(ConditionMask mask) const;
  bool operator==(const ConditionHypothesisSpace&) const = default;
};

// Candidates come from the observed pre-state of the cause step; evidence is
// one point per binding of the effect's sort at that step.
ConditionHypothesisSpace build_hypothesis_space(const KnowledgeBase& kb, const Episode& episode,
                                                std::size_t cause_step, const Atom& effect_atom,
                                                const Detector& detector = exact_readout);

// Space over explicit candidates and evidence; the first evidence point is
// the one questions are asked about.
ConditionHypothesisSpace make_hypothesis_space(Literal effect, std::vector<TypedVar> vars, Atom cause,
                                               std::vector<Literal> candidates,
                                               std::vector<ConditionEvidence> evidence);

bool consistent(const ConditionHypothesisSpace& space, ConditionMask mask, const ConditionEvidence& ev);

struct Question {
  Literal literal;  // lifted candidate
  std::size_t candidate = 0;
  RobotAct ask;
  double gain = 0.0;  // binary entropy of the split, in bits
};

// The candidate whose answer most nearly halves the version space, ties by
// literal text; absent once a single member remains. Throws
// InconsistentEvidence when no member remains.
std::optional<Question> select_question(const ConditionHypothesisSpace& space);

// "Does the effect happen only if <literal>?": yes means it would not happen
// with <literal> false, no means it still would.
ConditionHypothesisSpace incorporate_answer(ConditionHypothesisSpace space, const Question& question, bool answer);

// Fewest literals, ties by text. Throws InconsistentEvidence when empty.
std::vector<Literal> learned_condition(const ConditionHypothesisSpace& space);

struct SchemaUpdate {
  std::string action;
  EffectRule rule;
  std::optional<std::size_t> attach_under;

  bool operator==(const SchemaUpdate&) const = default;
};

// Requires a singleton version space. Non-empty conditions nest under the
// rule that fired at the cause step.
SchemaUpdate propose_schema_update(const ConditionHypothesisSpace& space);

// The teacher, answering from ground-truth dynamics: would the effect fail
// to happen if `literal` were false in `pre`?
bool simulated_answer(const Domain& truth, const RawPercept& pre, const Atom& action, const Literal& ground_literal,
                      const Literal& ground_effect);

namespace io {
nlohmann::json to_json(const Abnormality& a);
nlohmann::json to_json(const ConditionHypothesisSpace& space);
nlohmann::json to_json(const Question& q);
nlohmann::json to_json(const SchemaUpdate& u);
}  // namespace io

}  // namespace itl
