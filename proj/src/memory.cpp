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

#include "itl/memory.hpp"

#include <sstream>

#include "itl/error.hpp"
#include "itl/serialization.hpp"

namespace itl {

using nlohmann::json;

Episode record_step(Episode episode, EpisodeStep step) {
  if (episode.completed()) throw ContractViolation("episode " + episode.id + " is completed");
  if (step.index != episode.steps.size())
    throw ContiguityError("expected step " + std::to_string(episode.steps.size()) + ", got " +
                          std::to_string(step.index));
  std::size_t expected_post = step.pre_percept.step_index + (step.executed_action ? 1 : 0);
  if (step.post_percept.step_index != expected_post)
    throw ContiguityError("step " + std::to_string(step.index) + " percept indices do not line up");
  if (!episode.steps.empty() && !(episode.steps.back().post_percept == step.pre_percept))
    throw ContiguityError("step " + std::to_string(step.index) + " does not start where the previous one ended");
  episode.steps.push_back(std::move(step));
  return episode;
}

Episode complete(Episode episode, Outcome outcome) {
  if (episode.completed()) throw ContractViolation("episode " + episode.id + " is completed");
  episode.outcome = outcome;
  return episode;
}

State exact_readout(const RawPercept& percept, const PredicateSignature& sig) {
  State out;
  for (const auto& a : percept.atoms)
    if (a.predicate == sig.name) out.insert(a);
  return out;
}

std::vector<std::pair<std::size_t, State>> redetect(const Episode& episode, const PredicateSignature& sig,
                                                    const Detector& detector) {
  std::vector<std::pair<std::size_t, State>> out;
  for (const auto& s : episode.steps) out.emplace_back(s.index, detector(s.post_percept, sig));
  return out;
}

namespace {

json percept_json(const RawPercept& p) { return {{"step_index", p.step_index}, {"atoms", io::to_json(p.atoms)}}; }

RawPercept percept_from(const json& j) {
  return {io::state_from_json(j.at("atoms")), j.at("step_index").get<std::size_t>()};
}

}  // namespace

std::string save_episode_log(const Episode& episode) {
  json header = {{"episode", episode.id}};
  if (episode.verb_being_taught)
    header["verb"] = {{"verb", episode.verb_being_taught->verb}, {"args", episode.verb_being_taught->args}};
  if (episode.outcome) header["outcome"] = *episode.outcome == Outcome::Completed ? "Completed" : "Aborted";
  std::string out = header.dump() + "\n";
  for (const auto& s : episode.steps) {
    json j = {{"index", s.index}};
    if (s.human_utterance) j["human_utterance"] = *s.human_utterance;
    if (s.act) j["act"] = io::to_json(*s.act);
    if (s.executed_action) j["executed_action"] = s.executed_action->to_string();
    j["pre_percept"] = percept_json(s.pre_percept);
    j["post_percept"] = percept_json(s.post_percept);
    out += j.dump() + "\n";
  }
  return out;
}

Episode load_episode_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  Episode e;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = io::parse_json(line, "episode log line " + std::to_string(line_no));
    try {
      if (header) {
        e.id = j.at("episode").get<std::string>();
        if (j.contains("verb"))
          e.verb_being_taught =
              TaughtVerb{j["verb"].at("verb").get<std::string>(), j["verb"].at("args").get<std::vector<std::string>>()};
        header = false;
        if (j.contains("outcome")) {
          auto o = j["outcome"].get<std::string>();
          if (o != "Completed" && o != "Aborted") throw ParseError("unknown outcome '" + o + "'");
          // Steps are appended first; the outcome is applied at the end.
          e.outcome = o == "Completed" ? Outcome::Completed : Outcome::Aborted;
        }
        continue;
      }
      EpisodeStep s;
      s.index = j.at("index").get<std::size_t>();
      if (j.contains("human_utterance")) s.human_utterance = j["human_utterance"].get<std::string>();
      if (j.contains("act")) s.act = io::dialogue_act_from_json(j["act"]);
      if (j.contains("executed_action")) s.executed_action = parse_atom(j["executed_action"].get<std::string>());
      s.pre_percept = percept_from(j.at("pre_percept"));
      s.post_percept = percept_from(j.at("post_percept"));
      auto outcome = e.outcome;
      e.outcome.reset();
      e = record_step(std::move(e), std::move(s));
      e.outcome = outcome;
    } catch (const json::exception& ex) {
      throw ParseError("episode log line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  if (header) throw ParseError("episode log is empty");
  return e;
}

}  // namespace itl
