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

#include "itl/dialogue.hpp"

#include <algorithm>
#include <sstream>

#include "itl/error.hpp"
#include "itl/serialization.hpp"

namespace itl {

using nlohmann::json;

namespace {

const std::vector<std::pair<std::string, Phase>> kPhaseNames = {
    {"Idle", Phase::Idle},
    {"AwaitingSteps", Phase::AwaitingSteps},
    {"Retrospection", Phase::Retrospection},
    {"ExplainAndAskEffect", Phase::ExplainAndAskEffect},
    {"PredicateAcquisition", Phase::PredicateAcquisition},
    {"CauseLocalization", Phase::CauseLocalization},
    {"ConditionQuery", Phase::ConditionQuery},
    {"SchemaUpdate", Phase::SchemaUpdate},
    {"VerbCommit", Phase::VerbCommit},
    {"Confirming", Phase::Confirming},
};

const std::multimap<Phase, Phase> kTransitions = {
    {Phase::Idle, Phase::AwaitingSteps},
    {Phase::AwaitingSteps, Phase::Retrospection},
    {Phase::Retrospection, Phase::ExplainAndAskEffect},
    {Phase::Retrospection, Phase::VerbCommit},
    {Phase::ExplainAndAskEffect, Phase::PredicateAcquisition},
    {Phase::ExplainAndAskEffect, Phase::VerbCommit},
    {Phase::PredicateAcquisition, Phase::CauseLocalization},
    {Phase::PredicateAcquisition, Phase::ExplainAndAskEffect},
    {Phase::CauseLocalization, Phase::ConditionQuery},
    {Phase::CauseLocalization, Phase::ExplainAndAskEffect},
    {Phase::CauseLocalization, Phase::VerbCommit},
    {Phase::ConditionQuery, Phase::ConditionQuery},
    {Phase::ConditionQuery, Phase::SchemaUpdate},
    {Phase::SchemaUpdate, Phase::CauseLocalization},
    {Phase::SchemaUpdate, Phase::VerbCommit},
    {Phase::VerbCommit, Phase::Confirming},
    {Phase::VerbCommit, Phase::AwaitingSteps},
    {Phase::Confirming, Phase::Idle},
};

RobotAct robot(RobotActKind kind) {
  RobotAct a;
  a.kind = kind;
  return a;
}

class Turn {
 public:
  explicit Turn(SessionState s) : s_(std::move(s)) {}

  void run(const std::string& input) {
    s_.transcript.push_back("H: " + input);
    DialogueAct act = parse(input, s_.kb, s_.lexicon);
    switch (s_.phase) {
      case Phase::Idle: idle(act); break;
      case Phase::AwaitingSteps: awaiting(act, input); break;
      case Phase::ExplainAndAskEffect: explain(act); break;
      case Phase::ConditionQuery: condition_query(act); break;
      case Phase::Confirming: confirming(act); break;
      default: throw ContractViolation("turn started in transient phase " + to_string(s_.phase));
    }
    reply_ = generate(acts_, s_.lexicon);
    s_.transcript.push_back("R: " + reply_);
  }

  TurnResult result() && { return {std::move(s_), std::move(reply_), std::move(acts_), std::move(events_)}; }

 private:
  void go(Phase to) {
    if (!transition_allowed(s_.phase, to))
      throw ContractViolation("no transition from " + to_string(s_.phase) + " to " + to_string(to));
    s_.phase = to;
    emit("phase", to_string(to), "", json::object());
  }

  void emit(const std::string& type, const std::string& kind, const std::string& subject, json payload) {
    std::string line = "E: " + type + " " + kind;
    if (!subject.empty()) line += " " + subject;
    s_.transcript.push_back(line);
    payload["subject"] = subject;
    events_.push_back({type, kind, std::move(payload)});
  }

  void trace(const std::string& event, json j) {
    j["event"] = event;
    j["episode"] = s_.episode.id;
    s_.learner_trace.push_back(std::move(j));
  }

  void say(RobotAct a) { acts_.push_back(std::move(a)); }

  void clarify() { say(robot(RobotActKind::Clarify)); }

  std::optional<Atom> perform(const Atom& action, RawPercept& pre, RawPercept& post) {
    try {
      pre = s_.world.percept();
      auto [next, percept] = execute(s_.world, action);
      s_.world = std::move(next);
      post = std::move(percept);
      return action;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void idle(const DialogueAct& act) {
    if (act.kind == ActKind::StepInstruction) {
      RawPercept pre, post;
      if (!perform(*act.action, pre, post)) return clarify();
      RobotAct ack = robot(RobotActKind::AcknowledgeStep);
      ack.actions = {*act.action};
      return say(ack);
    }
    if (act.kind != ActKind::Command) return clarify();
    if (s_.kb.lexicon.count({act.verb, act.args.size()})) return carry_out(act);
    s_.episode = Episode{};
    s_.episode.id = "episode-" + std::to_string(++s_.episodes_started);
    s_.episode.verb_being_taught = TaughtVerb{act.verb, act.args};
    s_.kb_version_at_start = s_.kb.version();
    s_.lexicon_at_start = s_.lexicon;
    s_.updated_schemas.clear();
    s_.explained.clear();
    s_.effect_queue.clear();
    s_.pending_abnormality.reset();
    go(Phase::AwaitingSteps);
    RobotAct ask = robot(RobotActKind::AskDemonstration);
    ask.verb = act.verb;
    ask.args = act.args;
    say(ask);
  }

  void carry_out(const DialogueAct& act) {
    auto goal = lookup_verb(s_.kb, act.verb, act.args);
    State start = observe(s_.kb, s_.world.percept());
    std::optional<Plan> p;
    try {
      p = plan({s_.kb, start, goal, s_.bounds});
    } catch (const UnknownPredicate&) {
    }
    RobotAct report = robot(p ? RobotActKind::ReportPlan : RobotActKind::NoPlan);
    report.verb = act.verb;
    report.args = act.args;
    if (!p) return say(report);
    report.actions = p->steps;
    json steps = json::array();
    for (const auto& a : p->steps) steps.push_back(a.to_string());
    emit("plan", act.verb, "", {{"steps", steps}});
    for (const auto& a : p->steps) {
      RawPercept pre, post;
      if (!perform(a, pre, post)) break;
    }
    say(report);
  }

  void awaiting(const DialogueAct& act, const std::string& input) {
    if (act.kind == ActKind::StepInstruction) {
      EpisodeStep step;
      step.index = s_.episode.steps.size();
      step.human_utterance = input;
      step.act = act;
      if (!perform(*act.action, step.pre_percept, step.post_percept)) return clarify();
      step.executed_action = act.action;
      s_.episode = record_step(std::move(s_.episode), std::move(step));
      emit("episode", "step", act.action->to_string(), json::object());
      RobotAct ack = robot(RobotActKind::AcknowledgeStep);
      ack.actions = {*act.action};
      return say(ack);
    }
    if (act.kind != ActKind::Done) return clarify();
    if (s_.episode.steps.empty()) return say(robot(RobotActKind::NoStateChange));
    go(Phase::Retrospection);
    s_.episode = complete(std::move(s_.episode));
    auto ab = detect_abnormality(s_.kb, s_.episode, s_.bounds);
    trace("abnormality", ab ? io::to_json(*ab) : json(nullptr));
    if (!ab) return commit_verb();
    s_.pending_abnormality = ab;
    go(Phase::ExplainAndAskEffect);
    if (ab->missing_actions.empty()) return say(robot(RobotActKind::AskMissingEffect));
    RobotAct explain = robot(RobotActKind::ExplainLimitation);
    explain.actions = ab->missing_actions;
    say(explain);
  }

  void explain(const DialogueAct& act) {
    if (act.kind == ActKind::Done) return commit_verb();
    if (act.kind != ActKind::EffectDescription) return clarify();
    go(Phase::PredicateAcquisition);
    Acquisition acq;
    try {
      acq = acquire_predicate(s_.kb, s_.lexicon, act);
    } catch (const Error&) {
      go(Phase::ExplainAndAskEffect);
      return clarify();
    }
    s_.kb = std::move(acq.kb);
    s_.lexicon = std::move(acq.lexicon);
    if (acq.registered) {
      emit("kb_delta", "register_predicate", acq.signature.name, {{"signature", io::to_json(acq.signature)}});
      trace("acquire", {{"signature", io::to_json(acq.signature)}, {"atom", acq.atom.to_string()}});
      RobotAct learned = robot(RobotActKind::AcquiredPredicate);
      learned.effect = act.effect;
      say(learned);
    }
    if (!act.effect->positive) {
      go(Phase::ExplainAndAskEffect);
      RobotAct unseen = robot(RobotActKind::EffectNotObserved);
      unseen.effect = act.effect;
      return say(unseen);
    }
    s_.effect_queue.push_back(acq.atom);
    if (!start_next_effect()) go(Phase::ExplainAndAskEffect);
  }

  // Takes queued effects until one can be localized and queried.
  bool start_next_effect() {
    while (!s_.effect_queue.empty()) {
      Atom atom = s_.effect_queue.front();
      s_.effect_queue.pop_front();
      go(Phase::CauseLocalization);
      try {
        CauseStep cause = localize_cause(s_.episode, atom);
        trace("cause", {{"atom", atom.to_string()}, {"step", cause.index}, {"action", cause.action.to_string()}});
        s_.space = build_hypothesis_space(s_.kb, s_.episode, cause.index, atom);
        s_.current_effect = atom;
        s_.current_cause = cause.index;
      } catch (const Error& e) {
        trace("cause", {{"atom", atom.to_string()}, {"error", e.code()}});
        RobotAct unseen = robot(RobotActKind::EffectNotObserved);
        unseen.effect = Literal::pos(atom);
        say(unseen);
        continue;
      }
      trace("space", io::to_json(*s_.space));
      if (s_.space->version_space.empty()) {
        // The demonstration itself contradicts every candidate condition.
        trace("inconsistent", {{"atom", atom.to_string()}});
        say(robot(RobotActKind::NoConditionFits));
        s_.explained.push_back(atom);
        s_.space.reset();
        continue;
      }
      go(Phase::ConditionQuery);
      ask_next();
      return true;
    }
    return false;
  }

  void ask_next() {
    std::optional<Question> q;
    try {
      q = select_question(*s_.space);
    } catch (const InconsistentEvidence&) {
      trace("inconsistent", json::object());
      say(robot(RobotActKind::Apologize));
      s_.space = build_hypothesis_space(s_.kb, s_.episode, s_.current_cause, *s_.current_effect);
      go(Phase::ConditionQuery);
      q = select_question(*s_.space);
    }
    if (!q) return finish_update();
    trace("question", io::to_json(*q));
    s_.question = q;
    say(q->ask);
  }

  void condition_query(const DialogueAct& act) {
    if (act.kind != ActKind::ConditionAnswer) {
      clarify();
      return say(s_.question->ask);
    }
    s_.space = incorporate_answer(std::move(*s_.space), *s_.question, act.answer);
    trace("answer", {{"answer", act.answer}, {"version_space", s_.space->version_space.size()}});
    ask_next();
  }

  void finish_update() {
    go(Phase::SchemaUpdate);
    SchemaUpdate u = propose_schema_update(*s_.space);
    const ActionSchema before = s_.kb.domain.schemas.at(u.action);
    try {
      s_.kb = update_schema(std::move(s_.kb), u.action, u.rule, u.attach_under);
      const ActionSchema& after = s_.kb.domain.schemas.at(u.action);
      emit("kb_delta", "update_schema", u.action,
           {{"update", io::to_json(u)},
            {"before", io::to_json(before)},
            {"after", io::to_json(after)},
            {"rendered_before", render_schema(before)},
            {"rendered_after", render_schema(after)}});
      trace("update", io::to_json(u));
      if (std::find(s_.updated_schemas.begin(), s_.updated_schemas.end(), u.action) == s_.updated_schemas.end())
        s_.updated_schemas.push_back(u.action);
    } catch (const Error& e) {
      trace("update", {{"error", e.code()}, {"detail", e.what()}});
    }
    s_.explained.push_back(*s_.current_effect);
    s_.space.reset();
    s_.question.reset();
    queue_unexplained(s_.current_effect->predicate);
    s_.current_effect.reset();
    if (!start_next_effect()) commit_verb();
  }

  // Appearances of `predicate` during the episode the KB still cannot predict.
  void queue_unexplained(const std::string& predicate) {
    for (const auto& step : s_.episode.steps) {
      State pre = observe(s_.kb, step.pre_percept);
      State post = observe(s_.kb, step.post_percept);
      State predicted = apply_schema(s_.kb, pre, *step.executed_action);
      for (const auto& a : post) {
        if (a.predicate != predicate || pre.contains(a) || predicted.contains(a)) continue;
        bool seen = std::find(s_.explained.begin(), s_.explained.end(), a) != s_.explained.end() ||
                    std::find(s_.effect_queue.begin(), s_.effect_queue.end(), a) != s_.effect_queue.end();
        if (!seen) s_.effect_queue.push_back(a);
      }
    }
  }

  void commit_verb() {
    go(Phase::VerbCommit);
    bool learned = false;
    const auto& taught = s_.episode.verb_being_taught;
    if (taught) {
      try {
        VerbEntry entry = learn_verb(s_.kb, s_.episode, taught->verb, taught->args);
        s_.kb = add_verb(std::move(s_.kb), entry);
        json goal = json::array();
        for (const auto& l : entry.goal) goal.push_back(l.to_string());
        emit("kb_delta", "add_verb", entry.verb, {{"frame", entry.frame}, {"goal", goal}});
        trace("verb", {{"verb", entry.verb}, {"frame", entry.frame}, {"goal", goal}});
        learned = true;
      } catch (const NoStateChange&) {
      }
    }
    if (!learned && s_.updated_schemas.empty()) {
      s_.episode.outcome.reset();
      go(Phase::AwaitingSteps);
      return say(robot(RobotActKind::NoStateChange));
    }
    for (const auto& name : s_.updated_schemas) {
      RobotAct u = robot(RobotActKind::ConfirmUpdate);
      u.schema = name;
      say(u);
    }
    if (learned) {
      RobotAct v = robot(RobotActKind::ConfirmVerb);
      v.verb = taught->verb;
      v.args = taught->args;
      say(v);
    }
    say(robot(RobotActKind::AskConfirmation));
    go(Phase::Confirming);
  }

  void confirming(const DialogueAct& act) {
    bool yes = act.kind == ActKind::Confirm || (act.kind == ActKind::ConditionAnswer && act.answer);
    bool no = act.kind == ActKind::Deny || (act.kind == ActKind::ConditionAnswer && !act.answer);
    if (!yes && !no) return clarify();
    if (no) {
      s_.kb = rollback(std::move(s_.kb), s_.kb_version_at_start);
      s_.lexicon = s_.lexicon_at_start;
      emit("kb_delta", "rollback", std::to_string(s_.kb_version_at_start), {{"version", s_.kb_version_at_start}});
      s_.episode.outcome = Outcome::Aborted;
    }
    s_.memory.push_back(s_.episode);
    s_.pending_abnormality.reset();
    say(robot(yes ? RobotActKind::Thanks : RobotActKind::Forget));
    go(Phase::Idle);
  }

  SessionState s_;
  std::string reply_;
  std::vector<RobotAct> acts_;
  std::vector<SessionEvent> events_;
};

}  // namespace

std::string to_string(Phase p) {
  for (const auto& [name, v] : kPhaseNames)
    if (v == p) return name;
  throw ContractViolation("unknown phase");
}

Phase phase_from_string(std::string_view text) {
  for (const auto& [name, v] : kPhaseNames)
    if (name == text) return v;
  throw ParseError("unknown phase '" + std::string(text) + "'");
}

bool transition_allowed(Phase from, Phase to) {
  auto [lo, hi] = kTransitions.equal_range(from);
  return std::any_of(lo, hi, [&](const auto& kv) { return kv.second == to; });
}

SessionState new_session(KnowledgeBase kb, WorldModel world, Lexicon lexicon) {
  SessionState s;
  s.kb = std::move(kb);
  s.world = std::move(world);
  s.lexicon = std::move(lexicon);
  s.lexicon_at_start = s.lexicon;
  return s;
}

TurnResult step(SessionState session, const std::string& human_input) {
  Turn t(std::move(session));
  t.run(human_input);
  return std::move(t).result();
}

std::string transcript_text(const SessionState& session) {
  std::string out;
  for (const auto& line : session.transcript) out += line + "\n";
  return out;
}

std::vector<std::string> human_turns(std::string_view transcript) {
  std::vector<std::string> out;
  std::istringstream in{std::string(transcript)};
  for (std::string line; std::getline(in, line);)
    if (line.rfind("H: ", 0) == 0) out.push_back(line.substr(3));
  return out;
}

std::string learner_trace_text(const SessionState& session) {
  std::string out;
  for (const auto& j : session.learner_trace) out += j.dump() + "\n";
  return out;
}

}  // namespace itl
