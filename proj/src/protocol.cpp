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

#include "itl/protocol.hpp"

#include "itl/error.hpp"

namespace itl::wire {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("frame is missing '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("frame field '") + key + "' has the wrong type");
  }
}

std::string optional_session(const json& j) { return j.contains("session") ? field<std::string>(j, "session") : ""; }

void put_session(json& j, const std::string& session) {
  if (!session.empty()) j["session"] = session;
}

struct Encoder {
  json operator()(const CreateSession& f) const {
    json j = {{"type", "create_session"}};
    if (f.omniscient) j["omniscient"] = true;
    return j;
  }
  json operator()(const Attach& f) const { return {{"type", "attach"}, {"session", f.session}}; }
  json operator()(const HumanUtterance& f) const {
    return {{"type", "human_utterance"}, {"session", f.session}, {"text", f.text}};
  }
  json operator()(const KbAt& f) const { return {{"type", "kb_at"}, {"session", f.session}, {"turn", f.turn}}; }
  json operator()(const SessionInfo& f) const {
    return {{"type", "session"}, {"session", f.session}, {"phase", f.phase}, {"turns", f.turns},
            {"transcript", f.transcript}};
  }
  json operator()(const RobotUtterance& f) const {
    json j = {{"type", "robot_utterance"}, {"text", f.text}, {"acts", f.acts}};
    put_session(j, f.session);
    return j;
  }
  json operator()(const StateSnapshot& f) const {
    json j = {{"type", "state_snapshot"}, {"observed_atoms", f.observed_atoms}};
    if (f.raw_atoms) j["raw_atoms"] = *f.raw_atoms;
    put_session(j, f.session);
    return j;
  }
  json operator()(const KbDelta& f) const {
    json j = {{"type", "kb_delta"}, {"kind", f.kind}, {"payload", f.payload}};
    put_session(j, f.session);
    return j;
  }
  json operator()(const PhaseChange& f) const {
    json j = {{"type", "phase"}, {"name", f.name}};
    put_session(j, f.session);
    return j;
  }
  json operator()(const KbSnapshot& f) const {
    json j = {{"type", "kb_snapshot"}, {"turn", f.turn}, {"kb", f.kb}};
    put_session(j, f.session);
    return j;
  }
  json operator()(const ErrorFrame& f) const {
    json j = {{"type", "error"}, {"code", f.code}, {"detail", f.detail}};
    put_session(j, f.session);
    return j;
  }
};

}  // namespace

std::string type_of(const Frame& frame) { return std::visit(Encoder{}, frame).at("type").get<std::string>(); }

json to_json(const Frame& frame) { return std::visit(Encoder{}, frame); }

Frame frame_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("frame must be a JSON object");
  const auto type = field<std::string>(j, "type");
  if (type == "create_session") return CreateSession{j.value("omniscient", false)};
  if (type == "attach") return Attach{field<std::string>(j, "session")};
  if (type == "human_utterance") return HumanUtterance{field<std::string>(j, "session"), field<std::string>(j, "text")};
  if (type == "kb_at") return KbAt{field<std::string>(j, "session"), field<std::size_t>(j, "turn")};
  if (type == "session")
    return SessionInfo{field<std::string>(j, "session"), field<std::string>(j, "phase"), field<std::size_t>(j, "turns"),
                       field<std::vector<std::string>>(j, "transcript")};
  if (type == "robot_utterance")
    return RobotUtterance{optional_session(j), field<std::string>(j, "text"), field<json>(j, "acts")};
  if (type == "state_snapshot") {
    StateSnapshot f{optional_session(j), field<std::vector<std::string>>(j, "observed_atoms"), std::nullopt};
    if (j.contains("raw_atoms")) f.raw_atoms = field<std::vector<std::string>>(j, "raw_atoms");
    return f;
  }
  if (type == "kb_delta") return KbDelta{optional_session(j), field<std::string>(j, "kind"), field<json>(j, "payload")};
  if (type == "phase") return PhaseChange{optional_session(j), field<std::string>(j, "name")};
  if (type == "kb_snapshot") return KbSnapshot{optional_session(j), field<std::size_t>(j, "turn"), field<json>(j, "kb")};
  if (type == "error")
    return ErrorFrame{optional_session(j), field<std::string>(j, "code"), field<std::string>(j, "detail")};
  throw ParseError("unknown frame type '" + type + "'");
}

std::string serialize(const Frame& frame) { return to_json(frame).dump(); }

Frame parse_frame(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed frame: ") + e.what());
  }
  return frame_from_json(j);
}

}  // namespace itl::wire
