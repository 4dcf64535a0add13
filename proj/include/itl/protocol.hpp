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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace itl::wire {

// Client frames. `session` is empty where the frame does not name one.
struct CreateSession {
  bool omniscient = false;
  bool operator==(const CreateSession&) const = default;
};
struct Attach {
  std::string session;
  bool operator==(const Attach&) const = default;
};
struct HumanUtterance {
  std::string session;
  std::string text;
  bool operator==(const HumanUtterance&) const = default;
};
struct KbAt {
  std::string session;
  std::size_t turn = 0;
  bool operator==(const KbAt&) const = default;
};

// Server frames.
struct SessionInfo {
  std::string session;
  std::string phase;
  std::size_t turns = 0;
  std::vector<std::string> transcript;
  bool operator==(const SessionInfo&) const = default;
};
struct RobotUtterance {
  std::string session;
  std::string text;
  nlohmann::json acts = nlohmann::json::array();
  bool operator==(const RobotUtterance&) const = default;
};
struct StateSnapshot {
  std::string session;
  std::vector<std::string> observed_atoms;
  std::optional<std::vector<std::string>> raw_atoms;
  bool operator==(const StateSnapshot&) const = default;
};
struct KbDelta {
  std::string session;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();
  bool operator==(const KbDelta&) const = default;
};
struct PhaseChange {
  std::string session;
  std::string name;
  bool operator==(const PhaseChange&) const = default;
};
struct KbSnapshot {
  std::string session;
  std::size_t turn = 0;
  nlohmann::json kb;
  bool operator==(const KbSnapshot&) const = default;
};
struct ErrorFrame {
  std::string session;
  std::string code;
  std::string detail;
  bool operator==(const ErrorFrame&) const = default;
};

using Frame = std::variant<CreateSession, Attach, HumanUtterance, KbAt, SessionInfo, RobotUtterance, StateSnapshot,
                           KbDelta, PhaseChange, KbSnapshot, ErrorFrame>;

// The `type` field of a frame on the wire.
std::string type_of(const Frame& frame);

nlohmann::json to_json(const Frame& frame);
// Throws ParseError for malformed JSON, unknown types and missing fields.
Frame frame_from_json(const nlohmann::json& j);

// One line, without the trailing newline.
std::string serialize(const Frame& frame);
Frame parse_frame(std::string_view line);

}  // namespace itl::wire
