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

#include "itl/parser.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "itl/error.hpp"
#include "itl/serialization.hpp"
#include "itl/world.hpp"

namespace itl {

using nlohmann::json;

namespace {

const std::vector<std::pair<std::string, ActKind>> kActNames = {
    {"Command", ActKind::Command},
    {"StepInstruction", ActKind::StepInstruction},
    {"Done", ActKind::Done},
    {"EffectDescription", ActKind::EffectDescription},
    {"ConditionAnswer", ActKind::ConditionAnswer},
    {"Confirm", ActKind::Confirm},
    {"Deny", ActKind::Deny},
    {"Unknown", ActKind::Unknown},
};

const std::vector<std::pair<std::string, RobotActKind>> kRobotActNames = {
    {"AskDemonstration", RobotActKind::AskDemonstration},
    {"AcknowledgeStep", RobotActKind::AcknowledgeStep},
    {"ExplainLimitation", RobotActKind::ExplainLimitation},
    {"AskMissingEffect", RobotActKind::AskMissingEffect},
    {"EffectNotObserved", RobotActKind::EffectNotObserved},
    {"AcquiredPredicate", RobotActKind::AcquiredPredicate},
    {"AskCondition", RobotActKind::AskCondition},
    {"ConfirmUpdate", RobotActKind::ConfirmUpdate},
    {"ConfirmVerb", RobotActKind::ConfirmVerb},
    {"AskConfirmation", RobotActKind::AskConfirmation},
    {"ReportPlan", RobotActKind::ReportPlan},
    {"NoPlan", RobotActKind::NoPlan},
    {"NoStateChange", RobotActKind::NoStateChange},
    {"Clarify", RobotActKind::Clarify},
    {"Apologize", RobotActKind::Apologize},
    {"NoConditionFits", RobotActKind::NoConditionFits},
    {"Thanks", RobotActKind::Thanks},
    {"Forget", RobotActKind::Forget},
};

struct Keyword {
  const char* text;
  ActKind kind;
  bool answer;
};

const Keyword kKeywords[] = {
    {"yes", ActKind::ConditionAnswer, true},
    {"no", ActKind::ConditionAnswer, false},
    {"ok", ActKind::Confirm, false},
    {"okay", ActKind::Confirm, false},
    {"correct", ActKind::Confirm, false},
    {"that is right", ActKind::Confirm, false},
    {"that is correct", ActKind::Confirm, false},
    {"wrong", ActKind::Deny, false},
    {"that is wrong", ActKind::Deny, false},
    {"done", ActKind::Done, false},
    {"i am done", ActKind::Done, false},
    {"i'm done", ActKind::Done, false},
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string capitalize(std::string w) {
  if (!w.empty()) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

bool is_word(const std::string& w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c); });
}

class Grammar {
 public:
  Grammar(const KnowledgeBase& kb, const Lexicon& lex) : kb_(kb), lex_(lex) {}

  std::vector<DialogueAct> derive(const std::string& text) const {
    std::vector<DialogueAct> out;
    keywords(text, out);
    auto t = split(text);
    effects(t, out);
    steps(t, out);
    command(t, out);
    return out;
  }

  bool known_word(const std::string& w) const {
    static const std::set<std::string> fixed = {"the", "of", "is", "not", "i", "am", "that"};
    if (fixed.count(w) || lex_.nouns.count(w) || lex_.relations.count(w)) return true;
    for (const auto& k : kKeywords)
      if (w == k.text) return true;
    for (const auto& a : lex_.attributes)
      if (a.word == w || a.values.count(w) || a.adjectives.count(w)) return true;
    for (const auto& p : lex_.actions)
      for (const auto& tok : split(p.pattern))
        if (tok == w) return true;
    return false;
  }

 private:
  std::optional<std::string> object(const std::string& noun) const {
    auto it = lex_.nouns.find(noun);
    if (it == lex_.nouns.end() || !kb_.domain.types.sort_of(it->second)) return std::nullopt;
    return it->second;
  }

  static void keywords(const std::string& text, std::vector<DialogueAct>& out) {
    for (const auto& k : kKeywords) {
      if (text != k.text) continue;
      DialogueAct a;
      a.kind = k.kind;
      a.answer = k.answer;
      out.push_back(a);
    }
  }

  void push_effect(const std::string& pred, const std::vector<std::string>& args, bool positive,
                   const std::string& word, std::vector<DialogueAct>& out) const {
    DialogueAct a;
    a.kind = ActKind::EffectDescription;
    std::vector<Term> terms;
    for (const auto& x : args) terms.push_back(Term::constant(x));
    a.effect = Literal{Atom(pred, terms), positive};
    if (!kb_.has_predicate(pred)) a.novel = word;
    out.push_back(a);
  }

  void effects(const std::vector<std::string>& t, std::vector<DialogueAct>& out) const {
    if (t.size() < 4 || t[0] != "the") return;
    // the <attribute> of the <object> is [not] <value>
    if ((t.size() == 7 || t.size() == 8) && t[2] == "of" && t[3] == "the" && t[5] == "is") {
      bool positive = t.size() == 7;
      if (positive || t[6] == "not") {
        auto obj = object(t[4]);
        const std::string& attr = t[1];
        const std::string& val = t.back();
        if (obj && is_word(attr) && is_word(val)) {
          if (const auto* e = lex_.attribute_by_word(attr)) {
            std::optional<std::string> value;
            if (auto v = e->values.find(val); v != e->values.end()) value = v->second;
            else if (auto w = e->adjectives.find(val); w != e->adjectives.end()) value = w->second;
            if (value) push_effect(e->predicate, {*obj, *value}, positive, attr, out);
          } else {
            push_effect(capitalize(attr), {*obj, capitalize(val)}, positive, attr, out);
          }
        }
      }
    }
    if (t[2] != "is") return;
    auto subject = object(t[1]);
    if (!subject) return;
    std::size_t i = 3;
    bool positive = true;
    if (t[i] == "not") {
      positive = false;
      ++i;
    }
    // the <object> is [not] <adjective>
    if (t.size() == i + 1) {
      for (const auto& e : lex_.attributes) {
        auto v = e.adjectives.find(t[i]);
        if (v != e.adjectives.end()) push_effect(e.predicate, {*subject, v->second}, positive, t[i], out);
      }
    }
    // the <object> is [not] <relation> the <object>
    if (t.size() == i + 3 && t[i + 1] == "the") {
      auto rel = lex_.relations.find(t[i]);
      auto other = object(t[i + 2]);
      if (rel != lex_.relations.end() && other) push_effect(rel->second, {*subject, *other}, positive, t[i], out);
    }
  }

  void steps(const std::vector<std::string>& t, std::vector<DialogueAct>& out) const {
    for (const auto& phrase : lex_.actions) {
      auto schema = kb_.domain.schemas.find(phrase.action);
      if (schema == kb_.domain.schemas.end()) continue;
      auto pattern = split(phrase.pattern);
      if (pattern.size() != t.size()) continue;
      Substitution bound;
      bool ok = true;
      for (std::size_t i = 0; ok && i < t.size(); ++i) {
        const auto& p = pattern[i];
        if (p.size() > 2 && p.front() == '{' && p.back() == '}') {
          auto obj = object(t[i]);
          ok = obj.has_value();
          if (ok) bound[p.substr(1, p.size() - 2)] = *obj;
        } else {
          ok = p == t[i];
        }
      }
      if (!ok) continue;
      std::vector<Term> args;
      for (const auto& param : schema->second.params) {
        auto it = bound.find(param.name);
        if (it == bound.end()) {
          ok = false;
          break;
        }
        args.push_back(Term::constant(it->second));
      }
      if (!ok) continue;
      DialogueAct a;
      a.kind = ActKind::StepInstruction;
      a.action = Atom(phrase.action, args);
      out.push_back(a);
    }
  }

  bool reserved_verb(const std::string& w) const {
    if (w == "the" || w == "i" || w == "that") return true;
    for (const auto& k : kKeywords)
      if (split(k.text).front() == w) return true;
    for (const auto& p : lex_.actions)
      if (split(p.pattern).front() == w) return true;
    return false;
  }

  // <verb> [the] <object> [<preposition> [the] <object>]
  void command(const std::vector<std::string>& t, std::vector<DialogueAct>& out) const {
    if (t.size() < 2 || !is_word(t[0]) || reserved_verb(t[0])) return;
    DialogueAct a;
    a.kind = ActKind::Command;
    a.verb = t[0];
    std::size_t i = 1;
    auto take_object = [&]() {
      if (i < t.size() && t[i] == "the") ++i;
      if (i >= t.size()) return false;
      auto obj = object(t[i++]);
      if (!obj) return false;
      a.args.push_back(*obj);
      return true;
    };
    if (!take_object()) return;
    if (i < t.size()) {
      if (!is_word(t[i]) || t[i] == "the" || lex_.nouns.count(t[i])) return;
      ++i;
      if (!take_object()) return;
    }
    if (i != t.size()) return;
    out.push_back(a);
  }

  const KnowledgeBase& kb_;
  const Lexicon& lex_;
};

std::string fill(const std::string& pattern, const Substitution& nouns) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      auto name = pattern.substr(i + 1, close - i - 1);
      auto it = nouns.find(name);
      out += it == nouns.end() ? name : it->second;
      i = close + 1;
    } else {
      out += pattern[i++];
    }
  }
  return out;
}

std::string render_action_with(const Atom& action, const Lexicon& lex, bool past) {
  const auto* phrase = lex.phrase_for(action.predicate);
  if (!phrase) return action.to_string();
  // Placeholders are matched to arguments in order of first appearance.
  std::vector<std::string> names;
  for (std::size_t i = 0; i < phrase->pattern.size(); ++i) {
    if (phrase->pattern[i] != '{') continue;
    auto close = phrase->pattern.find('}', i);
    names.push_back(phrase->pattern.substr(i + 1, close - i - 1));
  }
  Substitution nouns;
  for (std::size_t i = 0; i < names.size() && i < action.args.size(); ++i)
    nouns[names[i]] = lex.noun_for(action.args[i].name);
  return fill(past ? phrase->past : phrase->pattern, nouns);
}

std::string reverse_lookup(const std::map<std::string, std::string>& table, const std::string& value) {
  for (const auto& [surface, v] : table)
    if (v == value) return surface;
  return {};
}

std::string step_list(const std::vector<Atom>& actions, const Lexicon& lex) {
  std::vector<std::string> parts;
  for (const auto& a : actions) parts.push_back(render_action(a, lex));
  return join(parts, "; ");
}

}  // namespace

std::string to_string(ActKind kind) {
  for (const auto& [name, k] : kActNames)
    if (k == kind) return name;
  throw ContractViolation("unknown act kind");
}

ActKind act_kind_from_string(std::string_view text) {
  for (const auto& [name, k] : kActNames)
    if (name == text) return k;
  throw ParseError("unknown act kind '" + std::string(text) + "'");
}

std::string to_string(RobotActKind kind) {
  for (const auto& [name, k] : kRobotActNames)
    if (k == kind) return name;
  throw ContractViolation("unknown robot act template");
}

RobotActKind robot_act_kind_from_string(std::string_view text) {
  for (const auto& [name, k] : kRobotActNames)
    if (name == text) return k;
  throw ParseError("unknown robot act '" + std::string(text) + "'");
}

const AttributeEntry* Lexicon::attribute_by_word(std::string_view word) const {
  for (const auto& a : attributes)
    if (a.word == word) return &a;
  return nullptr;
}

const AttributeEntry* Lexicon::attribute_by_predicate(std::string_view predicate) const {
  for (const auto& a : attributes)
    if (a.predicate == predicate) return &a;
  return nullptr;
}

const ActionPhrase* Lexicon::phrase_for(std::string_view action) const {
  for (const auto& p : actions)
    if (p.action == action) return &p;
  return nullptr;
}

std::string Lexicon::noun_for(std::string_view object) const {
  for (const auto& [surface, obj] : nouns)
    if (obj == object) return surface;
  std::string out(object);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Lexicon load_lexicon(std::string_view text) { return io::lexicon_from_json(io::parse_json(text, "lexicon")); }

Lexicon load_lexicon_file(const std::string& path) {
  return io::lexicon_from_json(io::parse_json(read_file(path), path));
}

std::string save_lexicon(const Lexicon& lex) { return io::to_json(lex).dump(2); }

Lexicon extend_lexicon(Lexicon lex, const std::string& word, const PredicateSignature& sig,
                       const std::string& value_word, const std::string& value) {
  if (lex.attribute_by_word(word)) return lex;
  AttributeEntry e;
  e.word = word;
  e.predicate = sig.name;
  e.sort = sig.arg_sorts.empty() ? "" : sig.arg_sorts.front();
  e.values[value_word] = value;
  lex.attributes.push_back(e);
  return lex;
}

std::string normalize_utterance(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c == ',') continue;
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) || s.back() == '.' ||
                        s.back() == '?' || s.back() == '!'))
    s.pop_back();
  return join(split(s), " ");
}

std::vector<DialogueAct> parse_all(std::string_view utterance, const KnowledgeBase& kb, const Lexicon& lex) {
  return Grammar(kb, lex).derive(normalize_utterance(utterance));
}

DialogueAct parse(std::string_view utterance, const KnowledgeBase& kb, const Lexicon& lex) {
  std::string text = normalize_utterance(utterance);
  Grammar g(kb, lex);
  auto acts = g.derive(text);
  if (acts.size() == 1) return acts.front();
  DialogueAct unknown;
  unknown.diagnostic = Span{0, text.size()};
  if (acts.empty()) {
    std::size_t pos = 0;
    auto words = split(text);
    for (std::size_t i = 0; i < words.size(); ++i) {
      pos = text.find(words[i], pos);
      // The leading word may be a verb nobody has taught yet.
      if (!(i == 0 && is_word(words[i])) && !g.known_word(words[i])) {
        unknown.diagnostic = Span{pos, pos + words[i].size()};
        break;
      }
      pos += words[i].size();
    }
  }
  return unknown;
}

std::string render_action(const Atom& action, const Lexicon& lex) { return render_action_with(action, lex, false); }

std::string render_action_past(const Atom& action, const Lexicon& lex) {
  return render_action_with(action, lex, true);
}

std::string render_literal(const Literal& lit, const Lexicon& lex) {
  const Atom& a = lit.atom;
  std::string is = lit.positive ? " is " : " is not ";
  if (a.args.size() == 2) {
    std::string subject = "the " + lex.noun_for(a.args[0].name);
    if (const auto* e = lex.attribute_by_predicate(a.predicate)) {
      auto adj = reverse_lookup(e->adjectives, a.args[1].name);
      if (!adj.empty()) return subject + is + adj;
    }
    auto rel = reverse_lookup(lex.relations, a.predicate);
    if (!rel.empty()) return subject + is + rel + " the " + lex.noun_for(a.args[1].name);
  }
  return render_effect(lit, lex);
}

std::string render_effect(const Literal& lit, const Lexicon& lex) {
  const Atom& a = lit.atom;
  if (a.args.size() == 2) {
    if (const auto* e = lex.attribute_by_predicate(a.predicate)) {
      auto val = reverse_lookup(e->values, a.args[1].name);
      if (val.empty()) val = reverse_lookup(e->adjectives, a.args[1].name);
      if (!val.empty())
        return "the " + e->word + " of the " + lex.noun_for(a.args[0].name) + (lit.positive ? " is " : " is not ") +
               val;
    }
    if (!reverse_lookup(lex.relations, a.predicate).empty()) return render_literal(lit, lex);
  }
  return lit.to_string();
}

std::string render_command(const std::string& verb, const std::vector<std::string>& args, const Lexicon& lex) {
  std::string out = verb;
  for (std::size_t i = 0; i < args.size(); ++i) out += (i ? " to the " : " the ") + lex.noun_for(args[i]);
  return out;
}

std::string render(const DialogueAct& act, const Lexicon& lex) {
  switch (act.kind) {
    case ActKind::Command: return render_command(act.verb, act.args, lex);
    case ActKind::StepInstruction: return render_action(*act.action, lex);
    case ActKind::EffectDescription: return render_effect(*act.effect, lex);
    case ActKind::ConditionAnswer: return act.answer ? "yes" : "no";
    case ActKind::Confirm: return "ok";
    case ActKind::Deny: return "wrong";
    case ActKind::Done: return "I am done";
    case ActKind::Unknown: break;
  }
  throw ContractViolation("act has no surface form");
}

std::string generate(const RobotAct& act, const Lexicon& lex) {
  auto need = [&](bool ok) {
    if (!ok) throw ContractViolation("incomplete " + to_string(act.kind) + " act");
  };
  switch (act.kind) {
    case RobotActKind::AskDemonstration:
      return "I do not know how to " + render_command(act.verb, act.args, lex) + ". Can you show me the steps?";
    case RobotActKind::AcknowledgeStep:
      need(act.actions.size() == 1);
      return "Okay, I " + render_action_past(act.actions.front(), lex) + ".";
    case RobotActKind::ExplainLimitation:
      need(!act.actions.empty());
      if (act.actions.size() == 1)
        return "I did not expect this step: " + step_list(act.actions, lex) + ". What does it change?";
      return "I did not expect these steps: " + step_list(act.actions, lex) + ". What do they change?";
    case RobotActKind::AskMissingEffect:
      return "Something changed that I cannot explain. What changed?";
    case RobotActKind::EffectNotObserved:
      need(act.effect.has_value());
      return "I did not see that " + render_literal(*act.effect, lex) + ". What else changed?";
    case RobotActKind::AcquiredPredicate:
      need(act.effect.has_value());
      return "I learned a new state: " + render_effect(*act.effect, lex) + ".";
    case RobotActKind::AskCondition: {
      need(act.effect.has_value() && act.literal.has_value());
      std::string condition = render_literal(*act.literal, lex);
      const Atom& e = act.effect->atom;
      if (e.args.size() == 2 && act.effect->positive) {
        if (const auto* entry = lex.attribute_by_predicate(e.predicate)) {
          auto adj = reverse_lookup(entry->adjectives, e.args[1].name);
          if (!adj.empty())
            return "Does the " + lex.noun_for(e.args[0].name) + " become " + adj + " only if " + condition + "?";
        }
      }
      return "Does it become true that " + render_literal(*act.effect, lex) + " only if " + condition + "?";
    }
    case RobotActKind::ConfirmUpdate:
      need(!act.schema.empty());
      return "I have updated the " + act.schema + " action.";
    case RobotActKind::ConfirmVerb:
      return "I now know how to " + render_command(act.verb, act.args, lex) + ".";
    case RobotActKind::AskConfirmation:
      return "Is that right?";
    case RobotActKind::ReportPlan:
      if (act.actions.empty()) return "There is nothing to do to " + render_command(act.verb, act.args, lex) + ".";
      return "To " + render_command(act.verb, act.args, lex) + " I will: " + step_list(act.actions, lex) + ".";
    case RobotActKind::NoPlan:
      return "I cannot find a way to " + render_command(act.verb, act.args, lex) + ".";
    case RobotActKind::NoStateChange:
      return "Nothing has changed yet. Please show me the steps.";
    case RobotActKind::Clarify:
      return "Sorry, I did not understand that.";
    case RobotActKind::Apologize:
      return "Sorry, the answers do not fit together. Let me ask again.";
    case RobotActKind::NoConditionFits:
      return "I cannot work out when that change happens.";
    case RobotActKind::Thanks:
      return "Thank you, I will remember that.";
    case RobotActKind::Forget:
      return "Okay, I have forgotten what I just learned.";
  }
  throw ContractViolation("unknown robot act template");
}

std::string generate(const std::vector<RobotAct>& acts, const Lexicon& lex) {
  std::vector<std::string> parts;
  for (const auto& a : acts) parts.push_back(generate(a, lex));
  return join(parts, " ");
}

namespace io {

namespace {

json atoms_json(const std::vector<Atom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(a.to_string());
  return out;
}

std::vector<Atom> atoms_from(const json& j) {
  std::vector<Atom> out;
  for (const auto& s : j) out.push_back(parse_atom(s.get<std::string>()));
  return out;
}

}  // namespace

json to_json(const DialogueAct& act) {
  json j = {{"kind", to_string(act.kind)}};
  switch (act.kind) {
    case ActKind::Command:
      j["verb"] = act.verb;
      j["args"] = act.args;
      break;
    case ActKind::StepInstruction: j["action"] = act.action->to_string(); break;
    case ActKind::EffectDescription:
      j["effect"] = act.effect->to_string();
      if (act.novel) j["novel"] = *act.novel;
      break;
    case ActKind::ConditionAnswer: j["answer"] = act.answer; break;
    case ActKind::Unknown:
      if (act.diagnostic) j["span"] = {act.diagnostic->begin, act.diagnostic->end};
      break;
    default: break;
  }
  return j;
}

DialogueAct dialogue_act_from_json(const json& j) {
  try {
    DialogueAct a;
    a.kind = act_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("verb")) a.verb = j["verb"].get<std::string>();
    if (j.contains("args")) a.args = j["args"].get<std::vector<std::string>>();
    if (j.contains("action")) a.action = parse_atom(j["action"].get<std::string>());
    if (j.contains("effect")) a.effect = parse_literal(j["effect"].get<std::string>());
    if (j.contains("novel")) a.novel = j["novel"].get<std::string>();
    if (j.contains("answer")) a.answer = j["answer"].get<bool>();
    if (j.contains("span")) a.diagnostic = Span{j["span"].at(0).get<std::size_t>(), j["span"].at(1).get<std::size_t>()};
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("dialogue act: ") + e.what());
  }
}

json to_json(const RobotAct& act) {
  json j = {{"kind", to_string(act.kind)}};
  if (!act.verb.empty()) j["verb"] = act.verb;
  if (!act.args.empty()) j["args"] = act.args;
  if (!act.actions.empty()) j["actions"] = atoms_json(act.actions);
  if (act.effect) j["effect"] = act.effect->to_string();
  if (act.literal) j["literal"] = act.literal->to_string();
  if (!act.schema.empty()) j["schema"] = act.schema;
  return j;
}

RobotAct robot_act_from_json(const json& j) {
  try {
    RobotAct a;
    a.kind = robot_act_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("verb")) a.verb = j["verb"].get<std::string>();
    if (j.contains("args")) a.args = j["args"].get<std::vector<std::string>>();
    if (j.contains("actions")) a.actions = atoms_from(j["actions"]);
    if (j.contains("effect")) a.effect = parse_literal(j["effect"].get<std::string>());
    if (j.contains("literal")) a.literal = parse_literal(j["literal"].get<std::string>());
    if (j.contains("schema")) a.schema = j["schema"].get<std::string>();
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("robot act: ") + e.what());
  }
}

json to_json(const Lexicon& lex) {
  json actions = json::array();
  for (const auto& p : lex.actions) actions.push_back({{"action", p.action}, {"pattern", p.pattern}, {"past", p.past}});
  json attributes = json::array();
  for (const auto& a : lex.attributes)
    attributes.push_back({{"word", a.word},
                          {"predicate", a.predicate},
                          {"sort", a.sort},
                          {"values", a.values},
                          {"adjectives", a.adjectives}});
  return {{"nouns", lex.nouns}, {"actions", actions}, {"attributes", attributes}, {"relations", lex.relations}};
}

Lexicon lexicon_from_json(const json& j) {
  try {
    Lexicon lex;
    lex.nouns = j.value("nouns", json::object()).get<std::map<std::string, std::string>>();
    for (const auto& p : j.value("actions", json::array()))
      lex.actions.push_back({p.at("action").get<std::string>(), p.at("pattern").get<std::string>(),
                             p.at("past").get<std::string>()});
    for (const auto& a : j.value("attributes", json::array())) {
      AttributeEntry e;
      e.word = a.at("word").get<std::string>();
      e.predicate = a.at("predicate").get<std::string>();
      e.sort = a.value("sort", "");
      e.values = a.value("values", json::object()).get<std::map<std::string, std::string>>();
      e.adjectives = a.value("adjectives", json::object()).get<std::map<std::string, std::string>>();
      lex.attributes.push_back(e);
    }
    lex.relations = j.value("relations", json::object()).get<std::map<std::string, std::string>>();
    return lex;
  } catch (const json::exception& e) {
    throw ParseError(std::string("lexicon: ") + e.what());
  }
}

}  // namespace io

}  // namespace itl
