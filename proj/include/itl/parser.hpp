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

#include "itl/domain.hpp"
#include "itl/knowledge_base.hpp"
#include "itl/logic.hpp"

namespace itl {

enum class ActKind { Command, StepInstruction, Done, EffectDescription, ConditionAnswer, Confirm, Deny, Unknown };

std::string to_string(ActKind kind);
// Throws ParseError.
ActKind act_kind_from_string(std::string_view text);

// Character range into the normalized utterance.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

// What the human meant. Only the fields of `kind` are populated.
struct DialogueAct {
  ActKind kind = ActKind::Unknown;
  std::string verb;                   // Command
  std::vector<std::string> args;      // Command
  std::optional<Atom> action;         // StepInstruction
  std::optional<Literal> effect;      // EffectDescription
  std::optional<std::string> novel;   // word naming a predicate the KB lacks
  bool answer = false;                // ConditionAnswer
  std::optional<Span> diagnostic;     // Unknown

  bool operator==(const DialogueAct&) const = default;
};

struct ActionPhrase {
  std::string action;   // schema name
  std::string pattern;  // e.g. "move the {a} to the {b}", placeholders are schema params
  std::string past;

  bool operator==(const ActionPhrase&) const = default;
};

struct AttributeEntry {
  std::string word;
  std::string predicate;
  std::string sort;
  std::map<std::string, std::string> values;      // surface -> value constant
  std::map<std::string, std::string> adjectives;  // surface -> value constant

  bool operator==(const AttributeEntry&) const = default;
};

// Surface forms for everything the robot can talk about.
struct Lexicon {
  std::map<std::string, std::string> nouns;  // surface -> object
  std::vector<ActionPhrase> actions;
  std::vector<AttributeEntry> attributes;
  std::map<std::string, std::string> relations;  // surface -> binary predicate

  const AttributeEntry* attribute_by_word(std::string_view word) const;
  const AttributeEntry* attribute_by_predicate(std::string_view predicate) const;
  const ActionPhrase* phrase_for(std::string_view action) const;
  // Lowercased object name when no noun is listed.
  std::string noun_for(std::string_view object) const;

  bool operator==(const Lexicon&) const = default;
};

Lexicon load_lexicon(std::string_view text);
Lexicon load_lexicon_file(const std::string& path);
std::string save_lexicon(const Lexicon& lex);

// Adds an attribute entry for a predicate learned from `word`; a no-op when
// the word is already listed.
Lexicon extend_lexicon(Lexicon lex, const std::string& word, const PredicateSignature& sig,
                       const std::string& value_word, const std::string& value);

// Lowercase, drop trailing punctuation and commas, collapse blanks.
std::string normalize_utterance(std::string_view text);

// Every act the grammar derives; the shipped grammar yields at most one.
std::vector<DialogueAct> parse_all(std::string_view utterance, const KnowledgeBase& kb, const Lexicon& lex);
// The unique derivation, or Unknown with the span of the first unrecognized
// word (the whole utterance when every word is known).
DialogueAct parse(std::string_view utterance, const KnowledgeBase& kb, const Lexicon& lex);

// Surface forms that parse back to the same act.
std::string render_action(const Atom& action, const Lexicon& lex);
std::string render_action_past(const Atom& action, const Lexicon& lex);
std::string render_literal(const Literal& lit, const Lexicon& lex);
// Prefers "the <attribute> of the <object> is <value>".
std::string render_effect(const Literal& lit, const Lexicon& lex);
std::string render_command(const std::string& verb, const std::vector<std::string>& args, const Lexicon& lex);
// Text for the human-side acts that have a grammar rule.
std::string render(const DialogueAct& act, const Lexicon& lex);

enum class RobotActKind {
  AskDemonstration,
  AcknowledgeStep,
  ExplainLimitation,
  AskMissingEffect,
  EffectNotObserved,
  AcquiredPredicate,
  AskCondition,
  ConfirmUpdate,
  ConfirmVerb,
  AskConfirmation,
  ReportPlan,
  NoPlan,
  NoStateChange,
  Clarify,
  Apologize,
  NoConditionFits,
  Thanks,
  Forget,
};

std::string to_string(RobotActKind kind);
RobotActKind robot_act_kind_from_string(std::string_view text);

struct RobotAct {
  RobotActKind kind = RobotActKind::Clarify;
  std::string verb;
  std::vector<std::string> args;
  std::vector<Atom> actions;
  std::optional<Literal> effect;
  std::optional<Literal> literal;
  std::string schema;

  bool operator==(const RobotAct&) const = default;
};

// Template realization. Throws ContractViolation for an unknown template.
std::string generate(const RobotAct& act, const Lexicon& lex);
// Templates joined by single spaces.
std::string generate(const std::vector<RobotAct>& acts, const Lexicon& lex);

namespace io {
nlohmann::json to_json(const DialogueAct& act);
DialogueAct dialogue_act_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RobotAct& act);
RobotAct robot_act_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Lexicon& lex);
Lexicon lexicon_from_json(const nlohmann::json& j);
}  // namespace io

}  // namespace itl
