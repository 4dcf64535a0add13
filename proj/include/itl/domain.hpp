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
#include <set>
#include <string>
#include <vector>

#include "itl/logic.hpp"

namespace itl {

// Sort that admits value symbols (High, On, ...) rather than objects.
inline constexpr const char* kValueSort = "Value";

struct SortInfo {
  std::vector<std::string> parents;
  // Objects of a fixed sort never move; they stay constants when lifting.
  bool fixed = false;

  bool operator==(const SortInfo&) const = default;
};

class TypeSystem {
 public:
  void add_sort(const std::string& name, std::vector<std::string> parents = {}, bool fixed = false);
  // Unknown sorts are declared on the fly as roots.
  void add_object(const std::string& name, const std::string& sort);

  bool has_sort(const std::string& sort) const { return sorts_.count(sort) != 0; }
  bool has_object(const std::string& obj) const { return objects_.count(obj) != 0; }
  // Reflexive, transitive.
  bool is_subsort(const std::string& sub, const std::string& super) const;
  bool object_has_sort(const std::string& obj, const std::string& sort) const;
  bool is_fixed(const std::string& obj) const;
  std::optional<std::string> sort_of(const std::string& obj) const;
  // Sorted by name.
  std::vector<std::string> objects_of(const std::string& sort) const;

  const std::map<std::string, SortInfo>& sorts() const { return sorts_; }
  const std::map<std::string, std::string>& objects() const { return objects_; }

  // Keeps only the listed objects; used to carve sub-instances.
  TypeSystem restricted_to(const std::set<std::string>& keep) const;

  bool operator==(const TypeSystem&) const = default;

 private:
  std::map<std::string, SortInfo> sorts_;
  std::map<std::string, std::string> objects_;
};

struct PredicateSignature {
  std::string name;
  std::vector<std::string> arg_sorts;
  // Index of a mutually exclusive value argument; `values` lists its domain.
  std::optional<std::size_t> value_position;
  std::vector<std::string> values;

  std::size_t arity() const { return arg_sorts.size(); }
  bool is_functional() const { return value_position.has_value(); }
  bool operator==(const PredicateSignature&) const = default;
};

using SignatureTable = std::map<std::string, PredicateSignature>;

// Throws UnknownPredicate or SortError. Variables are skipped.
void check_atom(const TypeSystem& types, const SignatureTable& sigs, const Atom& a);

struct TypedVar {
  std::string name;
  std::string sort;
  bool operator==(const TypedVar&) const = default;
  auto operator<=>(const TypedVar&) const = default;
};

struct EffectRule {
  std::vector<TypedVar> forall_vars;
  std::vector<Literal> when;
  std::vector<Literal> then;
  // Evaluated only under bindings where this rule's `when` holds.
  std::vector<EffectRule> nested;

  bool operator==(const EffectRule&) const = default;
};

enum class Provenance { Authored, Learned, Updated };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct ActionSchema {
  std::string name;
  std::vector<TypedVar> params;
  std::vector<EffectRule> rules;
  Provenance provenance = Provenance::Authored;

  bool operator==(const ActionSchema&) const = default;
};

// Shared by the ground-truth world and the robot's knowledge base.
struct Domain {
  TypeSystem types;
  SignatureTable signatures;
  std::map<std::string, ActionSchema> schemas;

  bool operator==(const Domain&) const = default;
};

// Checks variable scoping, nesting depth, predicate use and sibling conflicts.
// Throws ContractViolation, UnknownPredicate, SortError or ConflictError.
void validate_schema(const Domain& d, const ActionSchema& schema);

// Binds the schema parameters to the action's arguments.
// Throws UnknownAction or SortError.
Substitution bind_action(const Domain& d, const Atom& action);

struct Effects {
  std::set<Atom> adds;
  std::set<Atom> deletes;
};

// Every effect whose guard holds in `pre`. Positive guard literals are joined
// against the state; unconstrained quantified variables range over their sort.
Effects collect_effects(const Domain& d, const State& pre, const Atom& action);

// Deletes then adds. For functional predicates an added value displaces the
// other values of the same key, and deleting one value of a two-valued
// predicate asserts the other one.
State apply_effects(const SignatureTable& sigs, const State& pre, const Effects& eff);

State progress(const Domain& d, const State& pre, const Atom& action);

// All well-sorted ground actions with pairwise-distinct arguments, ordered by
// canonical text.
std::vector<Atom> ground_actions(const Domain& d);

// Objects mentioned as constants anywhere in the schema's rules.
std::set<std::string> constants_in(const ActionSchema& schema);

// Human-readable rendering in the `if ..., then: ...` layout.
std::string render_schema(const ActionSchema& schema);

// Equality up to consistent renaming of quantified variables; the order of
// literals inside a guard or effect list is irrelevant.
bool structurally_equal(const ActionSchema& a, const ActionSchema& b);

}  // namespace itl
