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

#include "itl/logic.hpp"

#include <cctype>

#include "itl/error.hpp"

namespace itl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s.front())) || s.front() == '_')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

}  // namespace

bool Term::is_variable_name(std::string_view name) {
  return !name.empty() && std::islower(static_cast<unsigned char>(name.front()));
}

Term Term::symbol(std::string name) {
  return is_variable_name(name) ? variable(std::move(name)) : constant(std::move(name));
}

Atom::Atom(std::string pred, std::initializer_list<const char*> symbols)
    : predicate(std::move(pred)) {
  for (const char* s : symbols) args.push_back(Term::symbol(s));
}

bool Atom::is_ground() const {
  for (const auto& t : args) {
    if (t.is_variable()) return false;
  }
  return true;
}

std::string Atom::to_string() const {
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i].name;
  }
  out += ')';
  return out;
}

std::string Literal::to_string() const {
  return positive ? atom.to_string() : "not " + atom.to_string();
}

State::State(std::initializer_list<Atom> atoms) {
  for (const auto& a : atoms) insert(a);
}

State::State(std::set<Atom> atoms) {
  for (const auto& a : atoms) {
    if (!a.is_ground()) throw ContractViolation("state atom is not ground: " + a.to_string());
  }
  atoms_ = std::move(atoms);
}

void State::insert(Atom a) {
  if (!a.is_ground()) throw ContractViolation("state atom is not ground: " + a.to_string());
  atoms_.insert(std::move(a));
}

std::vector<std::string> State::to_strings() const {
  std::vector<std::string> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.to_string());
  return out;
}

std::string State::key() const {
  std::string out;
  for (const auto& a : atoms_) {
    out += a.to_string();
    out += ';';
  }
  return out;
}

Term substitute(const Substitution& sub, const Term& t) {
  if (!t.is_variable()) return t;
  auto it = sub.find(t.name);
  return it == sub.end() ? t : Term::constant(it->second);
}

Atom substitute(const Substitution& sub, const Atom& a) {
  Atom out;
  out.predicate = a.predicate;
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(substitute(sub, t));
  return out;
}

Literal substitute(const Substitution& sub, const Literal& l) { return {substitute(sub, l.atom), l.positive}; }

std::optional<Substitution> unify(const Atom& pattern, const Atom& ground, const Substitution& seed) {
  if (pattern.predicate != ground.predicate || pattern.args.size() != ground.args.size()) {
    return std::nullopt;
  }
  Substitution sub = seed;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& p = pattern.args[i];
    const Term& g = ground.args[i];
    if (g.is_variable()) return std::nullopt;
    if (p.is_constant()) {
      if (p.name != g.name) return std::nullopt;
      continue;
    }
    auto [it, inserted] = sub.emplace(p.name, g.name);
    if (!inserted && it->second != g.name) return std::nullopt;
  }
  return sub;
}

namespace {

template <typename Range>
bool holds_impl(const State& state, const Range& literals, const Substitution& sub) {
  for (const auto& lit : literals) {
    Atom g = substitute(sub, lit.atom);
    if (!g.is_ground()) {
      throw ContractViolation("literal not ground under substitution: " + lit.to_string());
    }
    if (state.contains(g) != lit.positive) return false;
  }
  return true;
}

}  // namespace

bool holds(const State& state, const LiteralSet& literals, const Substitution& sub) {
  return holds_impl(state, literals, sub);
}

bool holds(const State& state, const std::vector<Literal>& literals, const Substitution& sub) {
  return holds_impl(state, literals, sub);
}

StateDiff diff_states(const State& initial, const State& final_state) {
  StateDiff d;
  for (const auto& a : final_state) {
    if (!initial.contains(a)) d.added.insert(a);
  }
  for (const auto& a : initial) {
    if (!final_state.contains(a)) d.removed.insert(a);
  }
  return d;
}

Atom parse_atom(std::string_view text) {
  std::string_view s = trim(text);
  auto open = s.find('(');
  if (open == std::string_view::npos || s.back() != ')') {
    throw ParseError("malformed atom '" + std::string(text) + "'");
  }
  std::string_view pred = trim(s.substr(0, open));
  if (!is_identifier(pred)) throw ParseError("bad predicate name in '" + std::string(text) + "'");
  Atom a;
  a.predicate = std::string(pred);
  std::string_view inner = trim(s.substr(open + 1, s.size() - open - 2));
  if (inner.empty()) return a;
  while (true) {
    auto comma = inner.find(',');
    std::string_view tok = trim(inner.substr(0, comma));
    if (!is_identifier(tok)) {
      throw ParseError("bad argument '" + std::string(tok) + "' in '" + std::string(text) + "'");
    }
    a.args.push_back(Term::symbol(std::string(tok)));
    if (comma == std::string_view::npos) break;
    inner = inner.substr(comma + 1);
  }
  return a;
}

Literal parse_literal(std::string_view text) {
  std::string_view s = trim(text);
  if (s.substr(0, 4) == "not " || s.substr(0, 4) == "not\t") {
    std::string_view rest = trim(s.substr(4));
    // tolerate the parenthesized `not (P(a))` form
    if (rest.size() > 2 && rest.front() == '(' && rest.back() == ')') {
      rest = trim(rest.substr(1, rest.size() - 2));
    }
    return Literal::neg(parse_atom(rest));
  }
  return Literal::pos(parse_atom(s));
}

State parse_state(const std::vector<std::string>& atoms) {
  State s;
  for (const auto& t : atoms) s.insert(parse_atom(t));
  return s;
}

std::vector<std::string> variables_of(const Atom& a) {
  std::vector<std::string> out;
  for (const auto& t : a.args) {
    if (t.is_variable()) out.push_back(t.name);
  }
  return out;
}

}  // namespace itl
