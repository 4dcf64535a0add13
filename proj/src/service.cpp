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

#include "itl/service.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "itl/error.hpp"
#include "itl/serialization.hpp"

namespace itl {

using nlohmann::json;

namespace {

std::vector<std::string> string_list(const YAML::Node& n, const std::string& key) {
  std::vector<std::string> out;
  if (!n) return out;
  if (!n.IsSequence()) throw ParseError("script: '" + key + "' must be a list");
  for (const auto& item : n) out.push_back(item.as<std::string>());
  return out;
}

std::string resolve(const std::string& base, const YAML::Node& n, const std::string& key) {
  if (!n) throw ParseError("script: missing '" + key + "'");
  std::filesystem::path p(n.as<std::string>());
  if (p.is_relative()) p = std::filesystem::path(base) / p;
  return p.lexically_normal().string();
}

json atoms_json(const std::vector<Atom>& atoms) {
  json out = json::array();
  for (const auto& a : atoms) out.push_back(a.to_string());
  return out;
}

std::vector<std::string> subjects_of(const std::vector<TurnRecord>& turns, const std::string& kind) {
  std::vector<std::string> out;
  for (const auto& t : turns)
    for (const auto& e : t.events)
      if (e.type == "kb_delta" && e.kind == kind) {
        auto s = e.payload.value("subject", "");
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
      }
  return out;
}

// "heat(Water)" -> ("heat", ["Water"])
std::pair<std::string, std::vector<std::string>> verb_call(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') throw ParseError("malformed verb call '" + text + "'");
  std::vector<std::string> args;
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  std::istringstream in(inner);
  for (std::string a; std::getline(in, a, ',');)
    if (!a.empty()) args.push_back(a);
  return {text.substr(0, open), args};
}

void check(ScriptRun& run, const Expectations& x) {
  auto miss = [&](const std::string& what, json expected, json actual) {
    run.failures.push_back({{"expectation", what}, {"expected", expected}, {"actual", actual}});
  };
  const auto& kb = run.session.kb;
  if (x.missing_actions) {
    json actual = run.first_abnormality ? atoms_json(run.first_abnormality->missing_actions) : json(nullptr);
    if (actual != json(*x.missing_actions)) miss("missing_actions", *x.missing_actions, actual);
  }
  for (const auto& p : x.predicates)
    if (!kb.has_predicate(p)) miss("predicate " + p, true, false);
  for (const auto& v : x.verbs) {
    bool found = false;
    for (const auto& [key, _] : kb.lexicon) found = found || key.first == v;
    if (!found) miss("verb " + v, true, false);
  }
  for (const auto& [call, literals] : x.verb_goals) {
    auto [verb, args] = verb_call(call);
    json actual = json::array();
    try {
      for (const auto& l : lookup_verb(kb, verb, args)) actual.push_back(l.to_string());
    } catch (const UnknownVerb&) {
      actual = nullptr;
    }
    for (const auto& l : literals)
      if (!actual.is_array() || std::find(actual.begin(), actual.end(), json(l)) == actual.end()) {
        miss("verb_goal " + call, literals, actual);
        break;
      }
  }
  for (const auto& [name, text] : x.schemas) {
    auto it = kb.domain.schemas.find(name);
    json actual = it == kb.domain.schemas.end() ? json(nullptr) : json(render_schema(it->second));
    if (actual != json(text)) miss("schema " + name, text, actual);
  }
  if (x.plan) {
    json actual = run.last_plan ? atoms_json(*run.last_plan) : json(nullptr);
    if (actual != json(*x.plan)) miss("plan", *x.plan, actual);
  }
  State observed = observe(kb, run.session.world.percept());
  for (const auto& a : x.observed_atoms)
    if (!observed.contains(parse_atom(a))) miss("observed " + a, true, false);
  if (x.phase && *x.phase != to_string(run.session.phase)) miss("phase", *x.phase, to_string(run.session.phase));
}

Episode record_demonstration(WorldModel w, const std::vector<Atom>& steps) {
  Episode e;
  e.id = "demonstration";
  for (const auto& a : steps) {
    EpisodeStep s;
    s.index = e.steps.size();
    s.executed_action = a;
    s.pre_percept = w.percept();
    auto [next, post] = execute(w, a);
    s.post_percept = std::move(post);
    w = std::move(next);
    e = record_step(std::move(e), std::move(s));
  }
  return complete(std::move(e));
}

}  // namespace

SessionScript parse_script(std::string_view yaml, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::ParserException& e) {
    throw ParseError("script:" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) + ": " +
                     e.msg);
  }
  try {
    if (!root.IsMap()) throw ParseError("script: top level must be a mapping");
    SessionScript s;
    s.name = root["name"] ? root["name"].as<std::string>() : "script";
    s.domain_path = resolve(base_dir, root["domain"], "domain");
    s.kb_path = resolve(base_dir, root["kb"], "kb");
    s.lexicon_path = resolve(base_dir, root["lexicon"], "lexicon");
    s.turns = string_list(root["turns"], "turns");
    if (const auto& x = root["expect"]) {
      if (x["missing_actions"]) s.expect.missing_actions = string_list(x["missing_actions"], "missing_actions");
      s.expect.predicates = string_list(x["predicates"], "predicates");
      s.expect.verbs = string_list(x["verbs"], "verbs");
      if (x["verb_goals"])
        for (const auto& kv : x["verb_goals"])
          s.expect.verb_goals[kv.first.as<std::string>()] = string_list(kv.second, "verb_goals");
      if (x["schemas"])
        for (const auto& kv : x["schemas"]) s.expect.schemas[kv.first.as<std::string>()] = kv.second.as<std::string>();
      if (x["plan"]) s.expect.plan = string_list(x["plan"], "plan");
      s.expect.observed_atoms = string_list(x["observed_atoms"], "observed_atoms");
      if (x["phase"]) s.expect.phase = x["phase"].as<std::string>();
    }
    return s;
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("script: ") + e.what());
  }
}

SessionScript load_script(const std::string& path) {
  return parse_script(read_file(path), std::filesystem::path(path).parent_path().string());
}

SessionState start_session(const SessionScript& script) {
  return new_session(load_kb_file(script.kb_path), load_domain_file(script.domain_path),
                     load_lexicon_file(script.lexicon_path));
}

json ScriptRun::report(const std::string& name) const {
  json r = {{"script", name},
            {"ok", ok()},
            {"turns", turns.size()},
            {"acquired_predicates", subjects_of(turns, "register_predicate")},
            {"updated_schemas", subjects_of(turns, "update_schema")},
            {"verbs", subjects_of(turns, "add_verb")},
            {"phase", to_string(session.phase)},
            {"failures", failures}};
  json schemas = json::object();
  for (const auto& name : subjects_of(turns, "update_schema")) {
    auto it = session.kb.domain.schemas.find(name);
    if (it != session.kb.domain.schemas.end()) schemas[name] = render_schema(it->second);
  }
  r["schemas"] = schemas;
  r["missing_actions"] = first_abnormality ? atoms_json(first_abnormality->missing_actions) : json(nullptr);
  r["last_plan"] = last_plan ? atoms_json(*last_plan) : json(nullptr);
  return r;
}

ScriptRun run_turns(SessionState session, const std::vector<std::string>& turns) {
  ScriptRun run;
  run.session = std::move(session);
  for (const auto& text : turns) {
    auto r = step(std::move(run.session), text);
    run.session = std::move(r.session);
    if (!run.first_abnormality && run.session.pending_abnormality) run.first_abnormality = run.session.pending_abnormality;
    for (const auto& e : r.events) {
      if (e.type != "plan") continue;
      std::vector<Atom> steps;
      for (const auto& s : e.payload.at("steps")) steps.push_back(parse_atom(s.get<std::string>()));
      run.last_plan = steps;
    }
    run.turns.push_back({text, std::move(r.reply), std::move(r.acts), std::move(r.events), run.session.phase});
  }
  return run;
}

ScriptRun run_script(const SessionScript& script) {
  ScriptRun run = run_turns(start_session(script), script.turns);
  check(run, script.expect);
  return run;
}

ReplayResult replay_transcript(const SessionScript& setup, std::string_view transcript) {
  ScriptRun run = run_turns(start_session(setup), human_turns(transcript));
  ReplayResult r;
  r.transcript = transcript_text(run.session);
  r.kb = save_kb(run.session.kb);
  r.identical = r.transcript == transcript;
  if (!r.identical) {
    std::istringstream a{std::string(transcript)}, b{r.transcript};
    std::string la, lb;
    std::size_t line = 0;
    while (true) {
      bool ga = static_cast<bool>(std::getline(a, la));
      bool gb = static_cast<bool>(std::getline(b, lb));
      ++line;
      if (!ga && !gb) break;
      if (!ga) la.clear();
      if (!gb) lb.clear();
      if (ga != gb || la != lb) {
        r.first_difference = line;
        r.expected_line = la;
        r.actual_line = lb;
        break;
      }
    }
  }
  return r;
}

Demonstration demonstration_of(const SessionScript& script) {
  SessionState s = start_session(script);
  Demonstration d;
  d.script = script.name;
  bool teaching = false;
  for (const auto& text : script.turns) {
    DialogueAct act = parse(text, s.kb, s.lexicon);
    if (!teaching) {
      if (act.kind == ActKind::Command && !s.kb.lexicon.count({act.verb, act.args.size()})) {
        teaching = true;
        d.verb = act.verb;
        d.args = act.args;
        d.world = s.world;
      } else {
        s = step(std::move(s), text).session;
      }
      continue;
    }
    if (act.kind == ActKind::Done) break;
    if (act.kind == ActKind::StepInstruction) d.steps.push_back(*act.action);
  }
  if (!teaching) throw ContractViolation("script " + script.name + " teaches no verb");
  return d;
}

TeachingOutcome teach_with_simulated_human(SessionState session, const Domain& truth, const Demonstration& demo,
                                           std::size_t max_turns) {
  TeachingOutcome out;
  out.session = std::move(session);
  std::size_t turns = 0;
  auto send = [&](const std::string& text) {
    auto r = step(std::move(out.session), text);
    out.session = std::move(r.session);
    ++turns;
    for (const auto& a : r.acts) out.questions += a.kind == RobotActKind::AskCondition;
  };
  send(render_command(demo.verb, demo.args, out.session.lexicon));
  if (out.session.phase != Phase::AwaitingSteps) return out;
  for (const auto& a : demo.steps) send(render_action(a, out.session.lexicon));
  send("I am done");
  out.abnormality_detected = out.session.pending_abnormality.has_value();
  std::set<Atom> described;
  while (turns < max_turns) {
    const SessionState& s = out.session;
    if (s.phase == Phase::ExplainAndAskEffect) {
      std::optional<std::string> text;
      // Additions the robot flagged, then true changes it cannot perceive yet.
      std::vector<Atom> changes(s.pending_abnormality->unexplained.added.begin(),
                                s.pending_abnormality->unexplained.added.end());
      if (!s.episode.steps.empty())
        for (const auto& a : diff_states(s.episode.steps.front().pre_percept.atoms,
                                         s.episode.steps.back().post_percept.atoms)
                                 .added)
          if (!s.kb.has_predicate(a.predicate)) changes.push_back(a);
      for (const auto& a : changes) {
        if (described.count(a)) continue;
        std::string t = render_effect(Literal::pos(a), s.lexicon);
        DialogueAct act = parse(t, s.kb, s.lexicon);
        if (act.kind == ActKind::EffectDescription && *act.effect == Literal::pos(a)) {
          described.insert(a);
          text = t;
          break;
        }
      }
      send(text ? *text : "I am done");
    } else if (s.phase == Phase::ConditionQuery) {
      const auto& q = *s.question;
      const auto& pre = s.episode.steps.at(s.current_cause).pre_percept;
      send(simulated_answer(truth, pre, s.space->cause, *q.ask.literal, *q.ask.effect) ? "yes" : "no");
    } else if (s.phase == Phase::Confirming) {
      send("ok");
      break;
    } else {
      break;
    }
  }
  return out;
}

std::vector<Mutation> effect_rule_deletions(const KnowledgeBase& complete) {
  std::vector<Mutation> out;
  for (const auto& [name, schema] : complete.domain.schemas) {
    ActionSchema root = schema;
    std::vector<std::size_t> path;
    // Deletions are applied to `root` in place and restored after copying.
    struct Walker {
      const KnowledgeBase& kb;
      ActionSchema& root;
      std::vector<Mutation>& out;
      void walk(std::vector<EffectRule>& rules, std::vector<std::size_t>& path) {
        for (std::size_t i = 0; i < rules.size(); ++i) {
          path.push_back(i);
          EffectRule removed = rules[i];
          rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(i));
          Mutation m;
          m.action = root.name;
          m.path = path;
          m.id = root.name;
          for (auto p : path) m.id += "/" + std::to_string(p);
          m.kb = kb;
          m.kb.domain.schemas[root.name] = root;
          out.push_back(std::move(m));
          rules.insert(rules.begin() + static_cast<std::ptrdiff_t>(i), removed);
          walk(rules[i].nested, path);
          path.pop_back();
        }
      }
    } walker{complete, root, out};
    walker.walk(root.rules, path);
  }
  return out;
}

std::vector<MutationRow> evaluate_mutations(const Lexicon& lexicon, const std::vector<Demonstration>& demos) {
  std::vector<MutationRow> rows;
  std::vector<std::vector<Mutation>> per_demo;
  for (const auto& d : demos) per_demo.push_back(effect_rule_deletions(kb_from_world(d.world)));
  if (per_demo.empty()) return rows;
  for (std::size_t m = 0; m < per_demo.front().size(); ++m) {
    for (std::size_t i = 0; i < demos.size(); ++i) {
      const Demonstration& d = demos[i];
      const Mutation& mutation = per_demo[i].at(m);
      MutationRow row;
      row.mutation = mutation.id;
      row.script = d.script;
      row.detected = detect_abnormality(mutation.kb, record_demonstration(d.world, d.steps)).has_value();
      auto taught = teach_with_simulated_human(new_session(mutation.kb, d.world, lexicon), d.world.domain, d);
      row.questions = taught.questions;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_mutation_table(const std::vector<MutationRow>& rows) {
  std::ostringstream out;
  out << "mutation\tscript\tdetected\tquestions\n";
  for (const auto& r : rows)
    out << r.mutation << "\t" << r.script << "\t" << (r.detected ? "yes" : "no") << "\t" << r.questions << "\n";
  return out.str();
}

}  // namespace itl
