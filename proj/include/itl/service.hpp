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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "itl/dialogue.hpp"

namespace itl {

// Terminal assertions of a scripted session, all in canonical text.
struct Expectations {
  std::optional<std::vector<std::string>> missing_actions;  // of the first abnormality
  std::vector<std::string> predicates;
  std::vector<std::string> verbs;
  std::map<std::string, std::vector<std::string>> verb_goals;  // "heat(Water)" -> literals
  std::map<std::string, std::string> schemas;                  // name -> rendered schema
  std::optional<std::vector<std::string>> plan;                // last plan the robot reported
  std::vector<std::string> observed_atoms;
  std::optional<std::string> phase;
};

struct SessionScript {
  std::string name;
  std::string domain_path;  // resolved against the script's directory
  std::string kb_path;
  std::string lexicon_path;
  std::vector<std::string> turns;
  Expectations expect;
};

// YAML with keys name, domain, kb, lexicon, turns, expect. Throws ParseError.
SessionScript parse_script(std::string_view yaml, const std::string& base_dir = ".");
SessionScript load_script(const std::string& path);

SessionState start_session(const SessionScript& script);

struct TurnRecord {
  std::string human;
  std::string reply;
  std::vector<RobotAct> acts;
  std::vector<SessionEvent> events;
  Phase phase = Phase::Idle;
};

struct ScriptRun {
  SessionState session;
  std::vector<TurnRecord> turns;
  std::optional<Abnormality> first_abnormality;
  std::optional<std::vector<Atom>> last_plan;
  nlohmann::json failures = nlohmann::json::array();

  bool ok() const { return failures.empty(); }
  // Machine-readable summary, including every expectation miss.
  nlohmann::json report(const std::string& name) const;
};

ScriptRun run_turns(SessionState session, const std::vector<std::string>& turns);
ScriptRun run_script(const SessionScript& script);

struct ReplayResult {
  bool identical = false;
  std::optional<std::size_t> first_difference;  // 1-based transcript line
  std::string expected_line;
  std::string actual_line;
  std::string transcript;
  std::string kb;
};

// Re-derives every robot turn from the human turns of `transcript`.
ReplayResult replay_transcript(const SessionScript& setup, std::string_view transcript);

// The demonstration a script teaches: the first command for an unknown verb
// and the step instructions up to the first "done".
struct Demonstration {
  std::string script;
  WorldModel world;  // before the first step
  std::string verb;
  std::vector<std::string> args;
  std::vector<Atom> steps;
};

Demonstration demonstration_of(const SessionScript& script);

struct TeachingOutcome {
  SessionState session;
  bool abnormality_detected = false;
  std::size_t questions = 0;
};

// Drives a session with a teacher who knows the true dynamics: it demonstrates
// `demo`, describes unexplained additions it can phrase, answers condition
// questions from ground truth and confirms.
TeachingOutcome teach_with_simulated_human(SessionState session, const Domain& truth, const Demonstration& demo,
                                           std::size_t max_turns = 64);

struct Mutation {
  std::string id;  // action/rule[/nested]
  std::string action;
  std::vector<std::size_t> path;
  KnowledgeBase kb;
};

// Every single effect-rule deletion, nested rules included.
std::vector<Mutation> effect_rule_deletions(const KnowledgeBase& complete);

struct MutationRow {
  std::string mutation;
  std::string script;
  bool detected = false;
  std::size_t questions = 0;
};

// Deletions are taken from the complete model of each demonstration's world.
std::vector<MutationRow> evaluate_mutations(const Lexicon& lexicon, const std::vector<Demonstration>& demos);

std::string format_mutation_table(const std::vector<MutationRow>& rows);

}  // namespace itl
