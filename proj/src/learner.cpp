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

#include "itl/learner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "itl/error.hpp"
#include "itl/serialization.hpp"

namespace itl {

using nlohmann::json;

namespace {

Atom lift(const Atom& a, const std::map<std::string, std::string>& to_var) {
  Atom out = a;
  for (auto& t : out.args) {
    auto it = to_var.find(t.name);
    if (t.is_constant() && it != to_var.end()) t = Term::variable(it->second);
  }
  return out;
}

bool literal_holds(const State& s, const Literal& l) { return s.contains(l.atom) == l.positive; }

State simulate(const KnowledgeBase& kb, State s, const std::vector<Atom>& steps) {
  for (const auto& a : steps)
    if (kb.domain.schemas.count(a.predicate)) s = apply_schema(kb, s, a);
  return s;
}

std::string variable_name(std::size_t i) {
  static const char* names[] = {"x", "y", "z", "w"};
  return i < 4 ? names[i] : "v" + std::to_string(i);
}

std::vector<std::string> texts(const std::vector<Literal>& lits) {
  std::vector<std::string> out;
  for (const auto& l : lits) out.push_back(l.to_string());
  std::sort(out.begin(), out.end());
  return out;
}

// Every assignment of distinct objects to the variables, in sorted order.
void enumerate_bindings(const TypeSystem& types, const std::vector<TypedVar>& vars, std::size_t i, Substitution& cur,
                        std::vector<Substitution>& out) {
  if (i == vars.size()) {
    out.push_back(cur);
    return;
  }
  for (const auto& o : types.objects_of(vars[i].sort)) {
    bool used = false;
    for (const auto& [_, v] : cur) used = used || v == o;
    if (used) continue;
    cur[vars[i].name] = o;
    enumerate_bindings(types, vars, i + 1, cur, out);
    cur.erase(vars[i].name);
  }
}

}  // namespace

std::vector<Atom> demonstrated_actions(const Episode& episode) {
  std::vector<Atom> out;
  for (const auto& s : episode.steps)
    if (s.executed_action) out.push_back(*s.executed_action);
  return out;
}

std::pair<State, State> observed_endpoints(const KnowledgeBase& kb, const Episode& episode) {
  if (episode.steps.empty()) throw ContractViolation("episode " + episode.id + " has no steps");
  return {observe(kb, episode.steps.front().pre_percept), observe(kb, episode.steps.back().post_percept)};
}

std::vector<Atom> sequence_difference(const std::vector<Atom>& demonstrated, const std::vector<Atom>& planned) {
  const std::size_t n = demonstrated.size(), m = planned.size();
  std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      lcs[i][j] = demonstrated[i] == planned[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Atom> missing;
  std::size_t i = 0, j = 0;
  while (i < n) {
    if (j < m && demonstrated[i] == planned[j] && lcs[i][j] == lcs[i + 1][j + 1] + 1) {
      ++i;
      ++j;
    } else if (j < m && lcs[i][j + 1] >= lcs[i + 1][j]) {
      ++j;
    } else {
      missing.push_back(demonstrated[i++]);
    }
  }
  return missing;
}

std::string frame_role(std::size_t position) {
  static const char* roles[] = {"theme", "target", "instrument"};
  return position < 3 ? roles[position] : "role" + std::to_string(position);
}

VerbEntry learn_verb(const KnowledgeBase& kb, const Episode& episode, const std::string& verb,
                     const std::vector<std::string>& args) {
  if (!episode.completed()) throw ContractViolation("episode " + episode.id + " is still in progress");
  if (episode.steps.empty()) throw NoStateChange("nothing was demonstrated");
  auto [initial, final_state] = observed_endpoints(kb, episode);
  const auto& types = kb.domain.types;
  std::map<std::string, std::string> to_role;
  VerbEntry entry{verb, {}, {}};
  for (std::size_t i = 0; i < args.size(); ++i) {
    entry.frame.push_back(frame_role(i));
    to_role.emplace(args[i], frame_role(i));
  }
  auto relevant = [&](const Atom& a) {
    bool mentions = false;
    for (const auto& t : a.args) {
      if (to_role.count(t.name))
        mentions = true;
      else if (types.has_object(t.name) && !types.is_fixed(t.name))
        return false;
    }
    return mentions;
  };
  LiteralSet goal;
  auto d = diff_states(initial, final_state);
  for (const auto& a : d.added)
    if (relevant(a)) goal.insert(Literal::pos(lift(a, to_role)));
  for (const auto& a : d.removed)
    if (relevant(a)) goal.insert(Literal::neg(lift(a, to_role)));
  if (goal.empty()) throw NoStateChange("no observed change involves the arguments of '" + verb + "'");
  entry.goal.assign(goal.begin(), goal.end());
  return entry;
}

std::optional<Abnormality> detect_abnormality(const KnowledgeBase& kb, const Episode& episode, PlanBounds bounds) {
  if (!episode.completed()) throw ContractViolation("episode " + episode.id + " is still in progress");
  if (episode.steps.empty()) return std::nullopt;
  Abnormality ab;
  ab.demonstrated = demonstrated_actions(episode);
  auto [initial, final_state] = observed_endpoints(kb, episode);
  auto retro = retrospective_plan(kb, initial, final_state, bounds);
  if (retro) {
    auto check = validate_plan(kb, initial, ab.demonstrated, diff_goal(initial, final_state));
    ab.planned = check.valid && ab.demonstrated.size() == retro->steps.size() ? ab.demonstrated : retro->steps;
    ab.missing_actions = sequence_difference(ab.demonstrated, *ab.planned);
  } else {
    ab.missing_actions = ab.demonstrated;
  }
  ab.unexplained = diff_states(simulate(kb, initial, ab.demonstrated), final_state);
  if (ab.missing_actions.empty() && ab.unexplained.added.empty() && ab.unexplained.removed.empty())
    return std::nullopt;
  return ab;
}

Acquisition acquire_predicate(const KnowledgeBase& kb, const Lexicon& lex, const DialogueAct& act) {
  if (act.kind != ActKind::EffectDescription || !act.effect)
    throw ContractViolation("predicate acquisition needs an effect description");
  const Atom& atom = act.effect->atom;
  const auto& types = kb.domain.types;
  if (atom.args.empty() || !atom.is_ground()) throw ContractViolation("described effect must be ground");
  if (!types.has_object(atom.args[0].name)) throw UnknownObject("unknown object '" + atom.args[0].name + "'");

  if (kb.has_predicate(atom.predicate)) {
    for (const auto& t : atom.args)
      if (!types.has_object(t.name) && !kb.domain.signatures.at(atom.predicate).is_functional())
        throw UnknownObject("unknown object '" + t.name + "'");
    return {kb, lex, kb.domain.signatures.at(atom.predicate), atom, false};
  }

  PredicateSignature sig;
  sig.name = atom.predicate;
  Lexicon out_lex = lex;
  const AttributeEntry* entry = lex.attribute_by_predicate(atom.predicate);
  bool valued = atom.args.size() == 2 && !types.has_object(atom.args[1].name);
  if (valued) {
    const std::string& obj = atom.args[0].name;
    const std::string& value = atom.args[1].name;
    std::string sort = *types.sort_of(obj);
    if (entry && types.has_sort(entry->sort) && types.object_has_sort(obj, entry->sort)) sort = entry->sort;
    sig.arg_sorts = {sort, kValueSort};
    sig.value_position = 1;
    sig.values = {value};
    if (entry)
      for (const auto& [_, v] : entry->values)
        if (std::find(sig.values.begin(), sig.values.end(), v) == sig.values.end()) sig.values.push_back(v);
    if (!entry && act.novel) {
      std::string word = value;
      for (auto& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out_lex = extend_lexicon(out_lex, *act.novel, sig, word, value);
    }
  } else {
    for (const auto& t : atom.args) {
      auto s = types.sort_of(t.name);
      if (!s) throw UnknownObject("unknown object '" + t.name + "'");
      sig.arg_sorts.push_back(*s);
    }
  }
  return {register_predicate(kb, sig), out_lex, sig, atom, true};
}

CauseStep localize_cause(const Episode& episode, const Atom& atom, const Detector& detector) {
  PredicateSignature sig;
  sig.name = atom.predicate;
  if (episode.steps.empty()) throw NoCauseFound(atom.to_string() + " was never observed");
  if (detector(episode.steps.front().pre_percept, sig).contains(atom))
    throw NoCauseFound(atom.to_string() + " already held before the first step");
  for (const auto& s : episode.steps) {
    if (!s.executed_action) continue;
    if (!detector(s.pre_percept, sig).contains(atom) && detector(s.post_percept, sig).contains(atom))
      return {s.index, *s.executed_action};
  }
  throw NoCauseFound(atom.to_string() + " was never observed to appear");
}

std::vector<Literal> ConditionHypothesisSpace::members(ConditionMask mask) const {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (mask & (ConditionMask{1} << i)) out.push_back(candidates[i]);
  return out;
}

bool consistent(const ConditionHypothesisSpace& space, ConditionMask mask, const ConditionEvidence& ev) {
  bool all_hold = true;
  for (std::size_t i = 0; all_hold && i < space.candidates.size(); ++i) {
    if (!(mask & (ConditionMask{1} << i))) continue;
    Literal g = substitute(ev.binding, space.candidates[i]);
    if (!g.atom.is_ground()) throw ContractViolation("evidence does not bind " + space.candidates[i].to_string());
    all_hold = literal_holds(ev.context, g);
  }
  return all_hold == ev.effect_observed;
}

ConditionHypothesisSpace make_hypothesis_space(Literal effect, std::vector<TypedVar> vars, Atom cause,
                                               std::vector<Literal> candidates,
                                               std::vector<ConditionEvidence> evidence) {
  if (candidates.size() > kMaxCandidates) throw ContractViolation("too many condition candidates");
  if (evidence.empty() || !evidence.front().effect_observed)
    throw ContractViolation("the first evidence point must show the effect");
  ConditionHypothesisSpace space;
  space.effect = std::move(effect);
  space.vars = std::move(vars);
  space.action = cause.predicate;
  space.cause = std::move(cause);
  space.primary = evidence.front().binding;
  space.primary_context = evidence.front().context;
  space.candidates = std::move(candidates);
  space.evidence = std::move(evidence);
  const ConditionMask all = ConditionMask{1} << space.candidates.size();
  for (ConditionMask m = 0; m < all; ++m) {
    bool ok = true;
    for (const auto& ev : space.evidence) ok = ok && consistent(space, m, ev);
    if (ok) space.version_space.push_back(m);
  }
  return space;
}

ConditionHypothesisSpace build_hypothesis_space(const KnowledgeBase& kb, const Episode& episode,
                                                std::size_t cause_step, const Atom& effect_atom,
                                                const Detector& detector) {
  if (cause_step >= episode.steps.size()) throw ContractViolation("cause step out of range");
  const EpisodeStep& step = episode.steps[cause_step];
  if (!step.executed_action) throw ContractViolation("cause step executed no action");
  const Atom& action = *step.executed_action;
  auto sig_it = kb.domain.signatures.find(effect_atom.predicate);
  if (sig_it == kb.domain.signatures.end())
    throw UnknownPredicate("unknown predicate '" + effect_atom.predicate + "'");
  const PredicateSignature& sig = sig_it->second;
  const auto& types = kb.domain.types;
  State pre = observe(kb, step.pre_percept);

  // Action arguments lift to the schema parameters; the effect's remaining
  // movable subjects become fresh quantified variables.
  const ActionSchema& schema = kb.domain.schemas.at(action.predicate);
  Substitution params = bind_action(kb.domain, action);
  std::map<std::string, std::string> to_var;
  std::set<std::string> schema_names;
  for (const auto& p : schema.params) {
    to_var.emplace(params.at(p.name), p.name);
    schema_names.insert(p.name);
  }
  std::vector<TypedVar> vars;
  Substitution primary = params;
  std::set<std::string> subjects;
  for (std::size_t i = 0; i < effect_atom.args.size(); ++i) {
    if (sig.value_position && *sig.value_position == i) continue;
    const std::string& c = effect_atom.args[i].name;
    subjects.insert(c);
    if (to_var.count(c) || (types.has_object(c) && types.is_fixed(c))) continue;
    std::string v;
    for (std::size_t k = vars.size(); v.empty() || schema_names.count(v); ++k) v = variable_name(k);
    to_var[c] = v;
    primary[v] = c;
    vars.push_back({v, sig.arg_sorts[i]});
  }
  Literal effect = Literal::pos(lift(effect_atom, to_var));

  std::optional<std::size_t> coinciding;
  for (std::size_t i = 0; i < schema.rules.size(); ++i) {
    const auto& r = schema.rules[i];
    if (!r.forall_vars.empty() || r.when.empty()) continue;
    bool fired = true;
    for (const auto& l : r.when) fired = fired && literal_holds(pre, substitute(params, l));
    if (fired) {
      coinciding = i;
      break;
    }
  }
  std::set<std::string> guard_predicates;
  if (coinciding)
    for (const auto& l : schema.rules[*coinciding].when) guard_predicates.insert(l.atom.predicate);

  std::set<std::string> anchors = subjects;
  std::set<std::string> acted_on = constants_in(schema);
  for (const auto& t : action.args) acted_on.insert(t.name);
  for (const auto& c : acted_on)
    if (types.has_object(c) && types.is_fixed(c)) anchors.insert(c);

  // Object connectivity: breadth-first over objects sharing a pre-state atom.
  std::map<std::string, std::size_t> dist;
  std::deque<std::string> frontier;
  for (const auto& c : subjects) {
    dist[c] = 0;
    frontier.push_back(c);
  }
  while (!frontier.empty()) {
    std::string o = frontier.front();
    frontier.pop_front();
    for (const auto& a : pre) {
      bool has = std::any_of(a.args.begin(), a.args.end(), [&](const Term& t) { return t.name == o; });
      if (!has) continue;
      for (const auto& t : a.args)
        if (types.has_object(t.name) && !dist.count(t.name)) {
          dist[t.name] = dist[o] + 1;
          frontier.push_back(t.name);
        }
    }
  }

  // Values the effect displaces are no condition of it.
  auto displaced = [&](const Atom& a) {
    if (a.predicate != effect_atom.predicate || !sig.value_position) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (i != *sig.value_position && a.args[i] != effect_atom.args[i]) return false;
    return true;
  };
  std::map<Literal, std::size_t> pool;
  for (const auto& a : pre) {
    if (displaced(a) || guard_predicates.count(a.predicate)) continue;
    std::size_t d = std::numeric_limits<std::size_t>::max();
    bool anchored = false;
    for (const auto& t : a.args) {
      anchored = anchored || anchors.count(t.name);
      if (dist.count(t.name)) d = std::min(d, dist[t.name]);
    }
    if (anchored) pool.emplace(Literal::pos(lift(a, to_var)), d);
  }
  std::vector<std::pair<std::size_t, Literal>> ranked;
  for (const auto& [l, d] : pool) ranked.emplace_back(d, l);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second.to_string() < b.second.to_string();
  });
  if (ranked.size() > kMaxCandidates) ranked.resize(kMaxCandidates);
  std::vector<Literal> candidates;
  for (const auto& [_, l] : ranked) candidates.push_back(l);

  // One evidence point per binding for which the effect was still open and
  // not already explained by the current schema.
  const State predicted = apply_schema(kb, pre, action);
  State pre_effect = detector(step.pre_percept, sig);
  State post_effect = detector(step.post_percept, sig);
  std::vector<Substitution> bindings;
  Substitution cur;
  enumerate_bindings(types, vars, 0, cur, bindings);
  std::vector<ConditionEvidence> evidence;
  ConditionEvidence first{pre, primary, action, post_effect.contains(effect_atom)};
  if (pre_effect.contains(effect_atom) || !first.effect_observed)
    throw ContractViolation(effect_atom.to_string() + " did not appear at step " + std::to_string(cause_step));
  evidence.push_back(first);
  for (auto b : bindings) {
    b.insert(params.begin(), params.end());
    if (b == primary) continue;
    Atom e = substitute(b, effect.atom);
    if (pre_effect.contains(e) || predicted.contains(e)) continue;
    evidence.push_back({pre, b, action, post_effect.contains(e)});
  }
  auto space = make_hypothesis_space(effect, vars, action, candidates, evidence);
  space.coinciding_rule = coinciding;
  return space;
}

std::optional<Question> select_question(const ConditionHypothesisSpace& space) {
  const std::size_t n = space.version_space.size();
  if (n == 0) throw InconsistentEvidence("no condition fits every answer");
  if (n == 1) return std::nullopt;
  std::optional<std::size_t> best;
  std::size_t best_split = 0;
  for (std::size_t i = 0; i < space.candidates.size(); ++i) {
    std::size_t with = 0;
    for (auto m : space.version_space) with += (m >> i) & 1u;
    std::size_t split = std::min(with, n - with);
    if (split == 0) continue;
    if (!best || split > best_split ||
        (split == best_split && space.candidates[i].to_string() < space.candidates[*best].to_string())) {
      best = i;
      best_split = split;
    }
  }
  if (!best) throw ContractViolation("version space members are indistinguishable");
  double p = static_cast<double>(best_split) / static_cast<double>(n);
  Question q;
  q.candidate = *best;
  q.literal = space.candidates[*best];
  q.gain = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  q.ask.kind = RobotActKind::AskCondition;
  q.ask.effect = substitute(space.primary, space.effect);
  q.ask.literal = substitute(space.primary, q.literal);
  return q;
}

ConditionHypothesisSpace incorporate_answer(ConditionHypothesisSpace space, const Question& question, bool answer) {
  if (question.candidate >= space.candidates.size() || !(space.candidates[question.candidate] == question.literal))
    throw ContractViolation("question does not belong to this hypothesis space");
  ConditionEvidence ev{space.primary_context, space.primary, space.cause, !answer};
  Literal ground = substitute(space.primary, question.literal);
  if (ground.positive)
    ev.context.erase(ground.atom);
  else
    ev.context.insert(ground.atom);
  std::vector<ConditionMask> kept;
  for (auto m : space.version_space)
    if (consistent(space, m, ev)) kept.push_back(m);
  space.version_space = std::move(kept);
  space.evidence.push_back(std::move(ev));
  return space;
}

std::vector<Literal> learned_condition(const ConditionHypothesisSpace& space) {
  if (space.version_space.empty()) throw InconsistentEvidence("no condition fits every answer");
  auto key = [&](ConditionMask m) { return std::make_pair(std::popcount(m), texts(space.members(m))); };
  ConditionMask best = *std::min_element(space.version_space.begin(), space.version_space.end(),
                                         [&](ConditionMask a, ConditionMask b) { return key(a) < key(b); });
  auto out = space.members(best);
  std::sort(out.begin(), out.end());
  return out;
}

SchemaUpdate propose_schema_update(const ConditionHypothesisSpace& space) {
  if (space.version_space.size() != 1) throw ContractViolation("the condition is not identified yet");
  SchemaUpdate u;
  u.action = space.action;
  u.rule.forall_vars = space.vars;
  u.rule.when = learned_condition(space);
  u.rule.then = {space.effect};
  if (!u.rule.when.empty()) u.attach_under = space.coinciding_rule;
  return u;
}

bool simulated_answer(const Domain& truth, const RawPercept& pre, const Atom& action, const Literal& ground_literal,
                      const Literal& ground_effect) {
  WorldModel w;
  w.domain = truth;
  w.state = pre.atoms;
  w.step_index = pre.step_index;
  if (ground_literal.positive)
    w.state.erase(ground_literal.atom);
  else
    w.state.insert(ground_literal.atom);
  auto [next, percept] = execute(w, action);
  bool occurs = literal_holds(percept.atoms, ground_effect);
  return !occurs;
}

namespace io {

namespace {

json atom_list(const std::vector<Atom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(a.to_string());
  return out;
}

json literal_list(const std::vector<Literal>& lits) {
  json out = json::array();
  for (const auto& l : lits) out.push_back(l.to_string());
  return out;
}

}  // namespace

json to_json(const Abnormality& a) {
  json j = {{"demonstrated", atom_list(a.demonstrated)},
            {"planned", a.planned ? atom_list(*a.planned) : json(nullptr)},
            {"missing_actions", atom_list(a.missing_actions)}};
  j["unexplained"] = {{"added", to_json(State(a.unexplained.added))},
                      {"removed", to_json(State(a.unexplained.removed))}};
  return j;
}

json to_json(const ConditionHypothesisSpace& space) {
  json members = json::array();
  for (auto m : space.version_space) members.push_back(literal_list(space.members(m)));
  return {{"effect", space.effect.to_string()},
          {"action", space.cause.to_string()},
          {"candidates", literal_list(space.candidates)},
          {"version_space", members},
          {"evidence", space.evidence.size()}};
}

json to_json(const Question& q) { return {{"literal", q.literal.to_string()}, {"gain", q.gain}}; }

json to_json(const SchemaUpdate& u) {
  return {{"action", u.action},
          {"attach_under", u.attach_under ? json(*u.attach_under) : json(nullptr)},
          {"rule", to_json(u.rule)}};
}

}  // namespace io

}  // namespace itl
