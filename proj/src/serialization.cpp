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

#include "itl/serialization.hpp"

#include <functional>

#include "itl/error.hpp"

namespace itl::io {

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": invalid JSON");
  }
}

namespace {

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(ctx + ": missing key '" + key + "'");
  }
  return j.at(key);
}

std::string str(const json& j, const std::string& ctx) {
  if (!j.is_string()) throw ParseError(ctx + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

std::vector<Literal> literals_from(const json& j, const std::string& ctx) {
  std::vector<Literal> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ParseError(ctx + ": expected a list of literals");
  for (const auto& e : j) out.push_back(parse_literal(str(e, ctx)));
  return out;
}

json literals_to(const std::vector<Literal>& ls) {
  json out = json::array();
  for (const auto& l : ls) out.push_back(l.to_string());
  return out;
}

std::optional<std::string> infer_sort(const EffectRule& r, const std::string& var,
                                      const SignatureTable& sigs) {
  for (const auto* lits : {&r.when, &r.then}) {
    for (const auto& l : *lits) {
      auto it = sigs.find(l.atom.predicate);
      if (it == sigs.end()) continue;
      for (std::size_t i = 0; i < l.atom.args.size() && i < it->second.arity(); ++i) {
        if (l.atom.args[i].is_variable() && l.atom.args[i].name == var &&
            it->second.arg_sorts[i] != kValueSort) {
          return it->second.arg_sorts[i];
        }
      }
    }
  }
  for (const auto& c : r.nested) {
    if (auto s = infer_sort(c, var, sigs)) return s;
  }
  return std::nullopt;
}

TypedVar typed_var(const json& j, const std::string& ctx) {
  if (j.is_object()) return {str(require(j, "name", ctx), ctx), str(require(j, "sort", ctx), ctx)};
  std::string s = str(j, ctx);
  auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

}  // namespace

json to_json(const TypeSystem& types) {
  json sorts = json::object();
  for (const auto& [name, info] : types.sorts()) {
    json s;
    s["parents"] = info.parents;
    if (info.fixed) s["fixed"] = true;
    sorts[name] = s;
  }
  json objects = json::object();
  for (const auto& [name, sort] : types.objects()) objects[name] = sort;
  return json{{"sorts", sorts}, {"objects", objects}};
}

TypeSystem types_from_json(const json& sorts, const json& objects) {
  TypeSystem t;
  if (!sorts.is_null()) {
    if (!sorts.is_object()) throw ParseError("sorts: expected an object");
    for (const auto& [name, spec] : sorts.items()) {
      if (spec.is_array()) {
        t.add_sort(name, spec.get<std::vector<std::string>>());
      } else if (spec.is_object()) {
        t.add_sort(name, spec.value("parents", std::vector<std::string>{}),
                   spec.value("fixed", false));
      } else {
        throw ParseError("sorts." + name + ": expected a list or an object");
      }
    }
  }
  if (!objects.is_null()) {
    if (!objects.is_object()) throw ParseError("objects: expected an object of name -> sort");
    for (const auto& [name, sort] : objects.items()) {
      if (Term::is_variable_name(name)) {
        throw ParseError("objects: '" + name + "' must start with an uppercase letter");
      }
      t.add_object(name, str(sort, "objects." + name));
    }
  }
  return t;
}

json to_json(const PredicateSignature& sig) {
  json j{{"name", sig.name}, {"args", sig.arg_sorts}};
  if (sig.value_position) {
    j["value_position"] = *sig.value_position;
    j["values"] = sig.values;
  }
  return j;
}

PredicateSignature signature_from_json(const json& j) {
  PredicateSignature sig;
  sig.name = str(require(j, "name", "predicate"), "predicate");
  const std::string ctx = "predicate " + sig.name;
  sig.arg_sorts = require(j, "args", ctx).get<std::vector<std::string>>();
  if (j.contains("values")) {
    sig.values = j.at("values").get<std::vector<std::string>>();
    if (j.contains("value_position")) {
      sig.value_position = j.at("value_position").get<std::size_t>();
    } else if (!sig.arg_sorts.empty()) {
      sig.value_position = sig.arg_sorts.size() - 1;
    }
    if (!sig.value_position || *sig.value_position >= sig.arg_sorts.size() || sig.values.empty()) {
      throw ParseError(ctx + ": value_position must index a declared argument with values");
    }
  }
  return sig;
}

SignatureTable signatures_from_json(const json& j) {
  SignatureTable out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ParseError("predicates: expected a list");
  for (const auto& e : j) {
    PredicateSignature sig = signature_from_json(e);
    if (out.count(sig.name)) throw ParseError("duplicate predicate declaration " + sig.name);
    out.emplace(sig.name, std::move(sig));
  }
  return out;
}

json to_json(const EffectRule& rule) {
  json j;
  json forall = json::array();
  for (const auto& v : rule.forall_vars) forall.push_back(v.name + ":" + v.sort);
  if (!forall.empty()) j["forall"] = forall;
  j["when"] = literals_to(rule.when);
  j["then"] = literals_to(rule.then);
  if (!rule.nested.empty()) {
    json nested = json::array();
    for (const auto& c : rule.nested) nested.push_back(to_json(c));
    j["nested"] = nested;
  }
  return j;
}

json to_json(const ActionSchema& schema) {
  json params = json::array();
  for (const auto& p : schema.params) params.push_back({{"name", p.name}, {"sort", p.sort}});
  json rules = json::array();
  for (const auto& r : schema.rules) rules.push_back(to_json(r));
  return json{{"name", schema.name},
              {"params", params},
              {"effect_rules", rules},
              {"provenance", to_string(schema.provenance)}};
}

EffectRule rule_from_json(const json& j, const SignatureTable& sigs) {
  if (!j.is_object()) throw ParseError("effect rule: expected an object");
  EffectRule r;
  r.when = literals_from(j.value("when", json()), "effect rule when");
  r.then = literals_from(j.value("then", json()), "effect rule then");
  if (j.contains("nested")) {
    const json& n = j.at("nested");
    if (n.is_array()) {
      for (const auto& c : n) r.nested.push_back(rule_from_json(c, sigs));
    } else {
      r.nested.push_back(rule_from_json(n, sigs));
    }
  }
  if (j.contains("forall")) {
    for (const auto& v : j.at("forall")) {
      TypedVar tv = typed_var(v, "forall");
      if (!Term::is_variable_name(tv.name)) {
        throw ParseError("forall variable '" + tv.name + "' must be lowercase");
      }
      if (tv.sort.empty()) {
        auto s = infer_sort(r, tv.name, sigs);
        if (!s) throw ParseError("cannot infer the sort of quantified variable " + tv.name);
        tv.sort = *s;
      }
      r.forall_vars.push_back(tv);
    }
  }
  return r;
}

ActionSchema schema_from_json(const json& j, const SignatureTable& sigs) {
  ActionSchema s;
  s.name = str(require(j, "name", "action"), "action");
  const std::string ctx = "action " + s.name;
  if (j.contains("params")) {
    for (const auto& p : j.at("params")) s.params.push_back(typed_var(p, ctx));
  }
  for (const auto& p : s.params) {
    if (p.sort.empty()) throw ParseError(ctx + ": parameter " + p.name + " needs a sort");
  }
  if (j.contains("effect_rules")) {
    for (const auto& r : j.at("effect_rules")) s.rules.push_back(rule_from_json(r, sigs));
  }
  s.provenance = provenance_from_string(j.value("provenance", std::string("Authored")));
  return s;
}

json to_json(const State& s) { return s.to_strings(); }

State state_from_json(const json& j) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw ParseError("state: expected a list of atoms");
  State s;
  for (const auto& e : j) {
    Atom a = parse_atom(str(e, "state"));
    if (!a.is_ground()) throw ParseError("state atom " + a.to_string() + " is not ground");
    s.insert(std::move(a));
  }
  return s;
}

}  // namespace itl::io
