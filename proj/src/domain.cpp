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

#include "itl/domain.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "itl/error.hpp"

namespace itl {

void TypeSystem::add_sort(const std::string& name, std::vector<std::string> parents, bool fixed) {
  for (const auto& p : parents) {
    if (!sorts_.count(p)) sorts_[p] = SortInfo{};
  }
  auto& info = sorts_[name];
  info.parents = std::move(parents);
  info.fixed = fixed;
}

void TypeSystem::add_object(const std::string& name, const std::string& sort) {
  if (!sorts_.count(sort)) sorts_[sort] = SortInfo{};
  objects_[name] = sort;
}

bool TypeSystem::is_subsort(const std::string& sub, const std::string& super) const {
  if (sub == super) return true;
  auto it = sorts_.find(sub);
  if (it == sorts_.end()) return false;
  for (const auto& p : it->second.parents) {
    if (is_subsort(p, super)) return true;
  }
  return false;
}

bool TypeSystem::object_has_sort(const std::string& obj, const std::string& sort) const {
  auto it = objects_.find(obj);
  return it != objects_.end() && is_subsort(it->second, sort);
}

bool TypeSystem::is_fixed(const std::string& obj) const {
  auto it = objects_.find(obj);
  if (it == objects_.end()) return false;
  for (const auto& [name, info] : sorts_) {
    if (info.fixed && is_subsort(it->second, name)) return true;
  }
  return false;
}

std::optional<std::string> TypeSystem::sort_of(const std::string& obj) const {
  auto it = objects_.find(obj);
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> TypeSystem::objects_of(const std::string& sort) const {
  std::vector<std::string> out;
  for (const auto& [name, s] : objects_) {
    if (is_subsort(s, sort)) out.push_back(name);
  }
  return out;
}

TypeSystem TypeSystem::restricted_to(const std::set<std::string>& keep) const {
  TypeSystem t;
  t.sorts_ = sorts_;
  for (const auto& [name, s] : objects_) {
    if (keep.count(name)) t.objects_[name] = s;
  }
  return t;
}

void check_atom(const TypeSystem& types, const SignatureTable& sigs, const Atom& a) {
  auto it = sigs.find(a.predicate);
  if (it == sigs.end()) throw UnknownPredicate("unregistered predicate " + a.predicate);
  const PredicateSignature& sig = it->second;
  if (a.args.size() != sig.arity()) {
    throw SortError("arity mismatch for " + a.to_string() + ": expected " +
                    std::to_string(sig.arity()));
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    const Term& t = a.args[i];
    if (t.is_variable()) continue;
    if (sig.value_position && *sig.value_position == i) {
      if (std::find(sig.values.begin(), sig.values.end(), t.name) == sig.values.end()) {
        throw SortError("value " + t.name + " not declared for " + sig.name);
      }
      continue;
    }
    if (sig.arg_sorts[i] == kValueSort) continue;
    if (!types.object_has_sort(t.name, sig.arg_sorts[i])) {
      throw SortError("argument " + t.name + " of " + a.to_string() + " is not a " +
                      sig.arg_sorts[i]);
    }
  }
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Authored: return "Authored";
    case Provenance::Learned: return "Learned";
    case Provenance::Updated: return "Updated";
  }
  return "Authored";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "Learned") return Provenance::Learned;
  if (s == "Updated") return Provenance::Updated;
  if (s == "Authored" || s.empty()) return Provenance::Authored;
  throw ParseError("unknown provenance '" + s + "'");
}

namespace {

void check_rule(const Domain& d, const EffectRule& rule, std::set<std::string> scope, int depth,
                const std::string& schema_name) {
  if (depth > 2) {
    throw ContractViolation("effect rules of " + schema_name + " nest deeper than two levels");
  }
  for (const auto& v : rule.forall_vars) scope.insert(v.name);
  auto check_lits = [&](const std::vector<Literal>& lits) {
    for (const auto& l : lits) {
      for (const auto& v : variables_of(l.atom)) {
        if (!scope.count(v)) {
          throw ContractViolation("variable " + v + " in " + l.to_string() + " of " +
                                  schema_name + " is not a parameter or quantified variable");
        }
      }
      check_atom(d.types, d.signatures, l.atom);
    }
  };
  check_lits(rule.when);
  check_lits(rule.then);
  for (const auto& child : rule.nested) check_rule(d, child, scope, depth + 1, schema_name);
}

void check_siblings(const std::vector<EffectRule>& rules, const std::string& schema_name) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rules.size(); ++j) {
      LiteralSet wi(rules[i].when.begin(), rules[i].when.end());
      LiteralSet wj(rules[j].when.begin(), rules[j].when.end());
      if (wi != wj || rules[i].forall_vars != rules[j].forall_vars) continue;
      for (const auto& l : rules[i].then) {
        if (std::find(rules[j].then.begin(), rules[j].then.end(), l.negated()) !=
            rules[j].then.end()) {
          throw ConflictError("rules of " + schema_name + " share a guard but disagree on " +
                              l.atom.to_string());
        }
      }
    }
    check_siblings(rules[i].nested, schema_name);
  }
}

}  // namespace

void validate_schema(const Domain& d, const ActionSchema& schema) {
  std::set<std::string> scope;
  for (const auto& p : schema.params) {
    if (!Term::is_variable_name(p.name)) {
      throw ContractViolation("parameter " + p.name + " of " + schema.name + " is not a variable");
    }
    scope.insert(p.name);
  }
  for (const auto& r : schema.rules) check_rule(d, r, scope, 1, schema.name);
  check_siblings(schema.rules, schema.name);
}

Substitution bind_action(const Domain& d, const Atom& action) {
  auto it = d.schemas.find(action.predicate);
  if (it == d.schemas.end()) throw UnknownAction("unknown action " + action.predicate);
  const ActionSchema& schema = it->second;
  if (action.args.size() != schema.params.size()) {
    throw SortError("action " + action.to_string() + " expects " +
                    std::to_string(schema.params.size()) + " arguments");
  }
  Substitution sub;
  for (std::size_t i = 0; i < action.args.size(); ++i) {
    const Term& t = action.args[i];
    if (t.is_variable()) throw ContractViolation("action is not ground: " + action.to_string());
    if (!d.types.object_has_sort(t.name, schema.params[i].sort)) {
      throw SortError("argument " + t.name + " of " + action.to_string() + " is not a " +
                      schema.params[i].sort);
    }
    sub[schema.params[i].name] = t.name;
  }
  return sub;
}

namespace {

using PredicateIndex = std::map<std::string, std::vector<const Atom*>>;

class Firing {
 public:
  Firing(const Domain& d, const State& pre) : d_(d), pre_(pre) {
    for (const auto& a : pre) index_[a.predicate].push_back(&a);
  }

  void fire(const EffectRule& rule, const Substitution& base, Effects& out) const {
    std::vector<const Literal*> positives;
    for (const auto& l : rule.when) {
      if (l.positive) positives.push_back(&l);
    }
    join(rule, positives, 0, base, out);
  }

 private:
  void join(const EffectRule& rule, const std::vector<const Literal*>& positives, std::size_t i,
            const Substitution& sub, Effects& out) const {
    if (i < positives.size()) {
      Atom pattern = substitute(sub, positives[i]->atom);
      auto it = index_.find(pattern.predicate);
      if (it == index_.end()) return;
      for (const Atom* candidate : it->second) {
        if (auto ext = unify(pattern, *candidate, sub)) join(rule, positives, i + 1, *ext, out);
      }
      return;
    }
    enumerate_free(rule, 0, sub, out);
  }

  void enumerate_free(const EffectRule& rule, std::size_t v, const Substitution& sub,
                      Effects& out) const {
    if (v == rule.forall_vars.size()) {
      finish(rule, sub, out);
      return;
    }
    const TypedVar& var = rule.forall_vars[v];
    auto bound = sub.find(var.name);
    if (bound != sub.end()) {
      if (d_.types.object_has_sort(bound->second, var.sort)) enumerate_free(rule, v + 1, sub, out);
      return;
    }
    for (const auto& obj : d_.types.objects_of(var.sort)) {
      Substitution ext = sub;
      ext[var.name] = obj;
      enumerate_free(rule, v + 1, ext, out);
    }
  }

  void finish(const EffectRule& rule, const Substitution& sub, Effects& out) const {
    if (!holds(pre_, rule.when, sub)) return;
    for (const auto& l : rule.then) {
      Atom g = substitute(sub, l.atom);
      if (!g.is_ground()) throw ContractViolation("effect not ground: " + l.to_string());
      (l.positive ? out.adds : out.deletes).insert(std::move(g));
    }
    for (const auto& child : rule.nested) fire(child, sub, out);
  }

  const Domain& d_;
  const State& pre_;
  PredicateIndex index_;
};

std::vector<Term> functional_key(const PredicateSignature& sig, const Atom& a) {
  std::vector<Term> key = a.args;
  key.erase(key.begin() + static_cast<std::ptrdiff_t>(*sig.value_position));
  return key;
}

}  // namespace

Effects collect_effects(const Domain& d, const State& pre, const Atom& action) {
  Substitution sub = bind_action(d, action);
  const ActionSchema& schema = d.schemas.at(action.predicate);
  Effects out;
  Firing firing(d, pre);
  for (const auto& rule : schema.rules) firing.fire(rule, sub, out);
  return out;
}

State apply_effects(const SignatureTable& sigs, const State& pre, const Effects& eff) {
  std::set<Atom> deletes = eff.deletes;
  std::set<Atom> adds = eff.adds;
  for (const auto& a : eff.adds) {
    auto it = sigs.find(a.predicate);
    if (it == sigs.end() || !it->second.is_functional()) continue;
    const auto& sig = it->second;
    for (const auto& v : sig.values) {
      if (v == a.args[*sig.value_position].name) continue;
      Atom other = a;
      other.args[*sig.value_position] = Term::constant(v);
      deletes.insert(std::move(other));
    }
  }
  for (const auto& del : eff.deletes) {
    auto it = sigs.find(del.predicate);
    if (it == sigs.end() || !it->second.is_functional() || it->second.values.size() != 2) continue;
    if (!pre.contains(del)) continue;
    const auto& sig = it->second;
    bool keyed_add = std::any_of(eff.adds.begin(), eff.adds.end(), [&](const Atom& a) {
      return a.predicate == del.predicate && functional_key(sig, a) == functional_key(sig, del);
    });
    if (keyed_add) continue;
    Atom complement = del;
    const std::string& cur = del.args[*sig.value_position].name;
    complement.args[*sig.value_position] =
        Term::constant(sig.values[0] == cur ? sig.values[1] : sig.values[0]);
    adds.insert(std::move(complement));
  }
  std::set<Atom> out;
  for (const auto& a : pre) {
    if (!deletes.count(a)) out.insert(a);
  }
  out.insert(adds.begin(), adds.end());
  return State(std::move(out));
}

State progress(const Domain& d, const State& pre, const Atom& action) {
  return apply_effects(d.signatures, pre, collect_effects(d, pre, action));
}

std::vector<Atom> ground_actions(const Domain& d) {
  std::vector<Atom> out;
  for (const auto& [name, schema] : d.schemas) {
    std::vector<std::vector<std::string>> domains;
    for (const auto& p : schema.params) domains.push_back(d.types.objects_of(p.sort));
    std::vector<std::string> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == domains.size()) {
        std::vector<Term> args;
        for (const auto& c : chosen) args.push_back(Term::constant(c));
        out.emplace_back(name, std::move(args));
        return;
      }
      for (const auto& obj : domains[i]) {
        if (std::find(chosen.begin(), chosen.end(), obj) != chosen.end()) continue;
        chosen.push_back(obj);
        rec(i + 1);
        chosen.pop_back();
      }
    };
    rec(0);
  }
  std::sort(out.begin(), out.end(),
            [](const Atom& a, const Atom& b) { return a.to_string() < b.to_string(); });
  return out;
}

std::set<std::string> constants_in(const ActionSchema& schema) {
  std::set<std::string> out;
  std::function<void(const EffectRule&)> visit = [&](const EffectRule& r) {
    for (const auto* lits : {&r.when, &r.then}) {
      for (const auto& l : *lits) {
        for (const auto& t : l.atom.args) {
          if (t.is_constant()) out.insert(t.name);
        }
      }
    }
    for (const auto& c : r.nested) visit(c);
  };
  for (const auto& r : schema.rules) visit(r);
  return out;
}

namespace {

std::string pretty(const Atom& a) {
  std::string out = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += a.args[i].name;
  }
  return out + ")";
}

std::string pretty(const Literal& l) { return l.positive ? pretty(l.atom) : "not " + pretty(l.atom); }

std::string pretty_guard(const std::vector<Literal>& when) {
  if (when.size() == 1 && !when[0].positive) return "(" + pretty(when[0]) + ")";
  std::string out;
  for (std::size_t i = 0; i < when.size(); ++i) {
    if (i) out += " and ";
    out += pretty(when[i]);
  }
  return out;
}

std::string pretty_body(const EffectRule& r) {
  std::string out;
  for (std::size_t i = 0; i < r.then.size(); ++i) {
    if (i) out += " and ";
    out += pretty(r.then[i]);
  }
  for (const auto& child : r.nested) {
    if (!out.empty()) out += " and ";
    out += child.when.empty() ? "always: " : "if " + pretty_guard(child.when) + ", then: ";
    out += pretty_body(child);
  }
  return out;
}

}  // namespace

std::string render_schema(const ActionSchema& schema) {
  std::ostringstream os;
  for (const auto& r : schema.rules) {
    if (r.when.empty()) {
      os << "always:\n";
    } else {
      os << "if " << pretty_guard(r.when) << ", then:\n";
    }
    os << "  " << pretty_body(r) << "\n";
  }
  return os.str();
}

namespace {

// Canonical text of a rule under a fixed renaming; the minimum over all
// quantified-variable permutations is the rule's canonical form.
std::string rule_text(const EffectRule& r, const Substitution& rename, int next_var);

std::string canonical_rule(const EffectRule& r, const Substitution& outer, int next_var) {
  std::vector<std::size_t> perm(r.forall_vars.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool first = true;
  do {
    Substitution rename = outer;
    std::string sorts;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      const TypedVar& v = r.forall_vars[perm[i]];
      rename[v.name] = "v" + std::to_string(next_var + static_cast<int>(i));
      sorts += rename[v.name] + ":" + v.sort + ",";
    }
    std::string text = "[" + sorts + "]" +
                       rule_text(r, rename, next_var + static_cast<int>(perm.size()));
    if (first || text < best) best = text;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string rule_text(const EffectRule& r, const Substitution& rename, int next_var) {
  auto lits = [&](const std::vector<Literal>& ls) {
    std::vector<std::string> parts;
    for (const auto& l : ls) {
      Literal renamed = l;
      for (auto& t : renamed.atom.args) {
        if (t.is_variable()) {
          auto it = rename.find(t.name);
          if (it != rename.end()) t.name = it->second;
        }
      }
      parts.push_back(renamed.to_string());
    }
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    std::string out;
    for (const auto& p : parts) out += p + ";";
    return out;
  };
  std::vector<std::string> children;
  for (const auto& c : r.nested) children.push_back(canonical_rule(c, rename, next_var));
  std::sort(children.begin(), children.end());
  std::string out = "when{" + lits(r.when) + "}then{" + lits(r.then) + "}nested{";
  for (const auto& c : children) out += c + "|";
  return out + "}";
}

std::vector<std::string> canonical_schema(const ActionSchema& s) {
  Substitution rename;
  std::vector<std::string> out;
  std::string head = s.name + "(";
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    rename[s.params[i].name] = "p" + std::to_string(i);
    head += s.params[i].sort + ",";
  }
  out.push_back(head + ")");
  std::vector<std::string> rules;
  for (const auto& r : s.rules) rules.push_back(canonical_rule(r, rename, 0));
  std::sort(rules.begin(), rules.end());
  out.insert(out.end(), rules.begin(), rules.end());
  return out;
}

}  // namespace

bool structurally_equal(const ActionSchema& a, const ActionSchema& b) {
  return canonical_schema(a) == canonical_schema(b);
}

}  // namespace itl
