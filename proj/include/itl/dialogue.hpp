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

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "itl/knowledge_base.hpp"
#include "itl/learner.hpp"
#include "itl/memory.hpp"
#include "itl/parser.hpp"
#include "itl/planner.hpp"
#include "itl/world.hpp"

namespace itl {

enum class Phase {
  Idle,
  AwaitingSteps,
  Retrospection,
  ExplainAndAskEffect,
  PredicateAcquisition,
  CauseLocalization,
  ConditionQuery,
  SchemaUpdate,
  VerbCommit,
  Confirming,
};

std::string to_string(Phase p);
Phase phase_from_string(std::string_view text);

// The documented transition table.
bool transition_allowed(Phase from, Phase to);

// Something that changed during a turn. `type` is phase, kb_delta, episode or
// plan; kb_delta kinds are register_predicate, update_schema, add_verb and
// rollback.
struct SessionEvent {
  std::string type;
  std::string kind;
  nlohmann::json payload;

  bool operator==(const SessionEvent&) const = default;
};

struct SessionState {
  Phase phase = Phase::Idle;
  KnowledgeBase kb;
  WorldModel world;
  Lexicon lexicon;
  Episode episode;
  std::optional<ConditionHypothesisSpace> space;
  std::optional<Abnormality> pending_abnormality;
  PlanBounds bounds;

  std::optional<Question> question;
  std::deque<Atom> effect_queue;
  std::vector<Atom> explained;  // effects already taken through a query round
  std::optional<Atom> current_effect;
  std::size_t current_cause = 0;
  std::vector<std::string> updated_schemas;
  std::size_t kb_version_at_start = 0;
  Lexicon lexicon_at_start;
  std::vector<Episode> memory;  // completed episodes
  std::size_t episodes_started = 0;

  std::vector<std::string> transcript;
  std::vector<nlohmann::json> learner_trace;
};

SessionState new_session(KnowledgeBase kb, WorldModel world, Lexicon lexicon);

struct TurnResult {
  SessionState session;
  std::string reply;
  std::vector<RobotAct> acts;
  std::vector<SessionEvent> events;
};

// One human turn. Never throws for bad input: unparseable or out-of-phase
// utterances get a clarification and leave the phase unchanged.
TurnResult step(SessionState session, const std::string& human_input);

// `H:`/`R:` lines with `E:` event annotations between them.
std::string transcript_text(const SessionState& session);
// The human turns of a transcript, in order.
std::vector<std::string> human_turns(std::string_view transcript);

std::string learner_trace_text(const SessionState& session);

}  // namespace itl
