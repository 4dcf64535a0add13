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
#include <utility>
#include <vector>

#include "itl/domain.hpp"
#include "itl/logic.hpp"
#include "itl/world.hpp"

namespace itl {

// A verb's meaning as the goal state it brings about.
struct VerbEntry {
  std::string verb;
  std::vector<std::string> frame;  // role variables, e.g. `theme`
  std::vector<Literal> goal;       // over frame variables and constants

  bool operator==(const VerbEntry&) const = default;
};

// One append-only record per knowledge change. `before`/`after` hold the JSON
// of the touched item ("null" when absent) so any version can be restored.
struct AuditEntry {
  std::size_t version = 0;
  std::string kind;  // register_predicate | update_schema | add_verb
  std::string subject;
  std::string before;
  std::string after;

  bool operator==(const AuditEntry&) const = default;
};

using VerbKey = std::pair<std::string, std::size_t>;

struct KnowledgeBase {
  Domain domain;
  std::map<VerbKey, VerbEntry> lexicon;
  std::vector<AuditEntry> audit_log;

  std::size_t version() const { return audit_log.empty() ? 0 : audit_log.back().version; }
  bool has_predicate(const std::string& name) const { return domain.signatures.count(name) != 0; }
  bool operator==(const KnowledgeBase&) const = default;
};

// Progression under the robot's schemas. Throws UnknownAction.
State apply_schema(const KnowledgeBase& kb, const State& state, const Atom& action);

// What the robot can represent of a percept: atoms of registered predicates.
State observe(const KnowledgeBase& kb, const RawPercept& percept);
State observe(const KnowledgeBase& kb, const State& raw);

// Throws DuplicatePredicate or SortError.
KnowledgeBase register_predicate(KnowledgeBase kb, const PredicateSignature& sig);

// Appends `rule` to the action, or nests it under rule `attach_under`.
// Throws UnknownAction, ContractViolation or ConflictError.
KnowledgeBase update_schema(KnowledgeBase kb, const std::string& action_name, const EffectRule& rule,
                            std::optional<std::size_t> attach_under = std::nullopt);

// Adds or replaces the entry for (verb, frame arity).
KnowledgeBase add_verb(KnowledgeBase kb, const VerbEntry& entry);

// Goal literals with the frame bound to `args`. Throws UnknownVerb.
std::vector<Literal> lookup_verb(const KnowledgeBase& kb, const std::string& verb,
                                 const std::vector<std::string>& args);

// Undoes every audit entry newer than `version`.
KnowledgeBase rollback(KnowledgeBase kb, std::size_t version);

// A knowledge base that knows everything the world does; no verbs.
KnowledgeBase kb_from_world(const WorldModel& world);

KnowledgeBase load_kb(std::string_view text);
KnowledgeBase load_kb_file(const std::string& path);
std::string save_kb(const KnowledgeBase& kb);

}  // namespace itl
