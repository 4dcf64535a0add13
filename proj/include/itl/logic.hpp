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

#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itl {

// A flat term. Lowercase-initial symbols are variables, everything else is a
// constant; there are no function symbols.
struct Term {
  enum class Kind { Constant, Variable };

  Kind kind = Kind::Constant;
  std::string name;

  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }
  // Classifies by the lexical rule.
  static Term symbol(std::string name);
  static bool is_variable_name(std::string_view name);

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_constant() const { return kind == Kind::Constant; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> a) : predicate(std::move(pred)), args(std::move(a)) {}
  // Convenience: each symbol classified lexically.
  Atom(std::string pred, std::initializer_list<const char*> symbols);

  bool is_ground() const;
  std::string to_string() const;

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

struct Literal {
  Atom atom;
  bool positive = true;

  static Literal pos(Atom a) { return {std::move(a), true}; }
  static Literal neg(Atom a) { return {std::move(a), false}; }

  Literal negated() const { return {atom, !positive}; }
  std::string to_string() const;

  auto operator<=>(const Literal&) const = default;
  bool operator==(const Literal&) const = default;
};

using LiteralSet = std::set<Literal>;

// Closed-world set of ground atoms.
class State {
 public:
  using const_iterator = std::set<Atom>::const_iterator;

  State() = default;
  State(std::initializer_list<Atom> atoms);
  explicit State(std::set<Atom> atoms);

  bool contains(const Atom& a) const { return atoms_.count(a) != 0; }
  // Throws ContractViolation on non-ground atoms.
  void insert(Atom a);
  void erase(const Atom& a) { atoms_.erase(a); }

  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }
  const std::set<Atom>& atoms() const { return atoms_; }

  // Atoms in canonical order, one per element.
  std::vector<std::string> to_strings() const;
  // Single-line canonical key, used for duplicate detection.
  std::string key() const;

  auto operator<=>(const State&) const = default;
  bool operator==(const State&) const = default;

 private:
  std::set<Atom> atoms_;
};

using Substitution = std::map<std::string, std::string>;

Term substitute(const Substitution& sub, const Term& t);
Atom substitute(const Substitution& sub, const Atom& a);
Literal substitute(const Substitution& sub, const Literal& l);

std::optional<Substitution> unify(const Atom& pattern, const Atom& ground,
                                  const Substitution& seed = {});

// Conjunction of literals under closed-world semantics.
bool holds(const State& state, const LiteralSet& literals, const Substitution& sub = {});
bool holds(const State& state, const std::vector<Literal>& literals, const Substitution& sub = {});

struct StateDiff {
  std::set<Atom> added;
  std::set<Atom> removed;

  bool empty() const { return added.empty() && removed.empty(); }
  bool operator==(const StateDiff&) const = default;
};

StateDiff diff_states(const State& initial, const State& final_state);

// Canonical text forms: `Pred(A,b)` and `not Pred(A,b)`. Whitespace around
// tokens is tolerated on input. Throws ParseError.
Atom parse_atom(std::string_view text);
Literal parse_literal(std::string_view text);
State parse_state(const std::vector<std::string>& atoms);

std::vector<std::string> variables_of(const Atom& a);

}  // namespace itl
