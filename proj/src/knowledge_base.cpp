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

#include "itl/knowledge_base.hpp"

#include <algorithm>

#include "itl/error.hpp"
#include "itl/serialization.hpp"

namespace itl {

namespace {

io::json verb_to_json(const VerbEntry& v) {
  io::json goal = io::json::array();
  for (const auto& l : v.goal) goal.push_back(l.to_string());
  return io::json{{"verb", v.verb}, {"frame", v.frame}, {"goal", goal}};
}

VerbEntry verb_from_json(const io::json& j) {
  VerbEntry v;
  v.verb = j.at("verb").get<std::string>();
  v.frame = j.at("frame").get<std::vector<std::string>>();
  for (const auto& g : j.at("goal")) v.goal.push_back(parse_literal(g.get<std::string>()));
  return v;
}

void append_audit(KnowledgeBase& kb, std::string kind, std::string subject, std::string before,
                  std::string after) {
  kb.audit_log.push_back(
      {kb.version() + 1, std::move(kind), std::move(subject), std::move(before), std::move(after)});
}

std::string verb_subject(const VerbKey& k) { return k.first + "/" + std::to_string(k.second); }

}  // namespace

State apply_schema(const KnowledgeBase& kb, const State& state, const Atom& action) {
  return progress(kb.domain, state, action);
}

State observe(const KnowledgeBase& kb, const State& raw) {
  State out;
  for (const auto& a : raw) {
    if (kb.has_predicate(a.predicate)) out.insert(a);
  }
  return out;
}

State observe(const KnowledgeBase& kb, const RawPercept& percept) {
  return observe(kb, percept.atoms);
}

KnowledgeBase register_predicate(KnowledgeBase kb, const PredicateSignature& sig) {
  if (kb.has_predicate(sig.name)) throw DuplicatePredicate("predicate " + sig.name + " already registered");
  for (const auto& s : sig.arg_sorts) {
    if (s != kValueSort && !kb.domain.types.has_sort(s)) {
      throw SortError("predicate " + sig.name + " uses unknown sort " + s);
    }
  }
  kb.domain.signatures.emplace(sig.name, sig);
  append_audit(kb, "register_predicate", sig.name, "null", io::to_json(sig).dump());
  return kb;
}

KnowledgeBase update_schema(KnowledgeBase kb, const std::string& action_name, const EffectRule& rule,
                            std::optional<std::size_t> attach_under) {
  auto it = kb.domain.schemas.find(action_name);
  if (it == kb.domain.schemas.end()) throw UnknownAction("unknown action " + action_name);
  ActionSchema updated = it->second;
  if (attach_under) {
    if (*attach_under >= updated.rules.size()) {
      throw ContractViolation("action " + action_name + " has no rule " +
                              std::to_string(*attach_under));
    }
    updated.rules[*attach_under].nested.push_back(rule);
  } else {
    updated.rules.push_back(rule);
  }
  updated.provenance = Provenance::Updated;
  validate_schema(kb.domain, updated);
  std::string before = io::to_json(it->second).dump();
  it->second = updated;
  append_audit(kb, "update_schema", action_name, before, io::to_json(updated).dump());
  return kb;
}

KnowledgeBase add_verb(KnowledgeBase kb, const VerbEntry& entry) {
  for (const auto& l : entry.goal) {
    for (const auto& v : variables_of(l.atom)) {
      if (std::find(entry.frame.begin(), entry.frame.end(), v) == entry.frame.end()) {
        throw ContractViolation("goal variable " + v + " of verb " + entry.verb +
                                " is not a frame role");
      }
    }
    check_atom(kb.domain.types, kb.domain.signatures, l.atom);
  }
  VerbKey key{entry.verb, entry.frame.size()};
  auto it = kb.lexicon.find(key);
  std::string before = it == kb.lexicon.end() ? "null" : verb_to_json(it->second).dump();
  kb.lexicon[key] = entry;
  append_audit(kb, "add_verb", verb_subject(key), before, verb_to_json(entry).dump());
  return kb;
}

std::vector<Literal> lookup_verb(const KnowledgeBase& kb, const std::string& verb,
                                 const std::vector<std::string>& args) {
  auto it = kb.lexicon.find({verb, args.size()});
  if (it == kb.lexicon.end()) {
    throw UnknownVerb("no meaning known for '" + verb + "' with " + std::to_string(args.size()) +
                      " argument(s)");
  }
  Substitution sub;
  for (std::size_t i = 0; i < args.size(); ++i) sub[it->second.frame[i]] = args[i];
  std::vector<Literal> out;
  for (const auto& l : it->second.goal) out.push_back(substitute(sub, l));
  return out;
}

KnowledgeBase rollback(KnowledgeBase kb, std::size_t version) {
  while (!kb.audit_log.empty() && kb.audit_log.back().version > version) {
    const AuditEntry e = kb.audit_log.back();
    kb.audit_log.pop_back();
    const io::json before = io::json::parse(e.before);
    if (e.kind == "register_predicate") {
      if (before.is_null()) {
        kb.domain.signatures.erase(e.subject);
      } else {
        kb.domain.signatures[e.subject] = io::signature_from_json(before);
      }
    } else if (e.kind == "update_schema") {
      kb.domain.schemas[e.subject] = io::schema_from_json(before, kb.domain.signatures);
    } else if (e.kind == "add_verb") {
      auto slash = e.subject.rfind('/');
      VerbKey key{e.subject.substr(0, slash), std::stoul(e.subject.substr(slash + 1))};
      if (before.is_null()) {
        kb.lexicon.erase(key);
      } else {
        kb.lexicon[key] = verb_from_json(before);
      }
    }
  }
  return kb;
}

KnowledgeBase kb_from_world(const WorldModel& world) {
  KnowledgeBase kb;
  kb.domain = world.domain;
  return kb;
}

KnowledgeBase load_kb(std::string_view text) {
  io::json j = io::parse_json(text, "kb");
  if (!j.is_object()) throw ParseError("kb: top level must be an object");
  KnowledgeBase kb;
  kb.domain.types = io::types_from_json(j.value("sorts", io::json()), j.value("objects", io::json()));
  kb.domain.signatures = io::signatures_from_json(j.value("predicates", io::json()));
  if (j.contains("actions")) {
    for (const auto& a : j.at("actions")) {
      ActionSchema s = io::schema_from_json(a, kb.domain.signatures);
      validate_schema(kb.domain, s);
      kb.domain.schemas.emplace(s.name, std::move(s));
    }
  }
  if (j.contains("verbs")) {
    for (const auto& v : j.at("verbs")) {
      VerbEntry e = verb_from_json(v);
      kb.lexicon[{e.verb, e.frame.size()}] = std::move(e);
    }
  }
  if (j.contains("audit_log")) {
    for (const auto& e : j.at("audit_log")) {
      kb.audit_log.push_back({e.at("version").get<std::size_t>(), e.at("kind").get<std::string>(),
                              e.at("subject").get<std::string>(), e.at("before").dump(),
                              e.at("after").dump()});
    }
  }
  return kb;
}

KnowledgeBase load_kb_file(const std::string& path) { return load_kb(read_file(path)); }

std::string save_kb(const KnowledgeBase& kb) {
  io::json types = io::to_json(kb.domain.types);
  io::json j;
  j["sorts"] = types["sorts"];
  j["objects"] = types["objects"];
  io::json preds = io::json::array();
  for (const auto& [name, sig] : kb.domain.signatures) preds.push_back(io::to_json(sig));
  j["predicates"] = preds;
  io::json actions = io::json::array();
  for (const auto& [name, schema] : kb.domain.schemas) actions.push_back(io::to_json(schema));
  j["actions"] = actions;
  io::json verbs = io::json::array();
  for (const auto& [key, v] : kb.lexicon) verbs.push_back(verb_to_json(v));
  j["verbs"] = verbs;
  io::json log = io::json::array();
  for (const auto& e : kb.audit_log) {
    log.push_back({{"version", e.version},
                   {"kind", e.kind},
                   {"subject", e.subject},
                   {"before", io::json::parse(e.before)},
                   {"after", io::json::parse(e.after)}});
  }
  j["audit_log"] = log;
  return j.dump(2) + "\n";
}

}  // namespace itl
