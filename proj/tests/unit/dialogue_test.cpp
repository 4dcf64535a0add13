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

#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "itl/dialogue.hpp"

using namespace itl;
using itl::testing::incomplete_kb;
using itl::testing::kitchen;
using itl::testing::lexicon;

namespace {

SessionState fresh() { return new_session(incomplete_kb(), kitchen(), lexicon()); }

TurnResult say(SessionState& s, const std::string& text) {
  auto r = step(std::move(s), text);
  s = r.session;
  return r;
}

bool has_act(const TurnResult& r, RobotActKind kind) {
  for (const auto& a : r.acts)
    if (a.kind == kind) return true;
  return false;
}

const std::vector<std::string> kTeaching = {"heat the water", "move the cup to the oven", "press the oven button",
                                            "I am done", "the temperature of the water is high", "no"};

}  // namespace

TEST_CASE("a session starts idle and keeps the initial knowledge base") {
  SessionState s = fresh();
  CHECK(s.phase == Phase::Idle);
  CHECK(s.kb == incomplete_kb());
  CHECK(s.transcript.empty());
}

TEST_CASE("the full teaching dialogue") {
  SessionState s = fresh();
  auto r = say(s, "heat the water");
  CHECK(s.phase == Phase::AwaitingSteps);
  CHECK(r.reply == "I do not know how to heat the water. Can you show me the steps?");

  say(s, "move the cup to the oven");
  say(s, "press the oven button");
  r = say(s, "I am done");
  CHECK(s.phase == Phase::ExplainAndAskEffect);
  CHECK(r.reply ==
        "I did not expect these steps: move the cup to the oven; press the oven button. What do they change?");

  r = say(s, "the temperature of the water is high");
  CHECK(s.phase == Phase::ConditionQuery);
  CHECK(s.kb.has_predicate("Temp"));
  CHECK(r.reply == "I learned a new state: the temperature of the water is high. "
                   "Does the water become hot only if the cup is in the oven?");

  r = say(s, "no");
  CHECK(s.phase == Phase::Confirming);
  CHECK(r.reply == "I have updated the PressOvenButton action. I now know how to heat the water. Is that right?");
  CHECK(structurally_equal(s.kb.domain.schemas.at("PressOvenButton"),
                           kitchen().domain.schemas.at("PressOvenButton")));

  r = say(s, "ok");
  CHECK(s.phase == Phase::Idle);
  CHECK(r.reply == "Thank you, I will remember that.");
  CHECK(s.memory.size() == 1);

  // The oven is still on, so the plan first switches it off.
  r = say(s, "heat the milk");
  CHECK(r.reply ==
        "To heat the milk I will: move the jug to the oven; press the oven button; press the oven button.");
  CHECK(s.world.state.contains(parse_atom("Temp(Milk,High)")));
}

TEST_CASE("phase changes follow the transition table") {
  const std::vector<std::string> pool = {"heat the water",  "heat the milk",   "move the cup to the oven",
                                         "press the oven button", "move the jug to the oven", "I am done",
                                         "the temperature of the water is high", "the milk is hot", "yes", "no",
                                         "ok", "wrong", "xyzzy", "", "move the oven to the cup"};
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    SessionState s = fresh();
    std::size_t n = 0;
    for (int t = 0; t < 25; ++t) {
      Phase before = s.phase;
      TurnResult r;
      const std::string& text = pool[rng() % pool.size()];
      REQUIRE_NOTHROW(r = step(s, text));
      Phase at = before;
      for (const auto& e : r.events) {
        if (e.type != "phase") continue;
        Phase next = phase_from_string(e.kind);
        CHECK_MESSAGE(transition_allowed(at, next), to_string(at) << " -> " << to_string(next) << " on " << text);
        at = next;
      }
      CHECK(at == r.session.phase);
      CHECK(!r.reply.empty());
      s = r.session;
      n += 1;
    }
    CHECK(human_turns(transcript_text(s)).size() == n);
  }
}

TEST_CASE("done before any step asks for the steps again") {
  SessionState s = fresh();
  say(s, "heat the water");
  auto r = say(s, "I am done");
  CHECK(has_act(r, RobotActKind::NoStateChange));
  CHECK(s.phase == Phase::AwaitingSteps);
  CHECK(s.kb == incomplete_kb());
}

TEST_CASE("denying the summary rolls back everything learned") {
  SessionState s = fresh();
  for (const auto& t : kTeaching) say(s, t);
  REQUIRE(s.phase == Phase::Confirming);
  auto r = say(s, "no");
  CHECK(has_act(r, RobotActKind::Forget));
  CHECK(s.phase == Phase::Idle);
  CHECK(s.kb.domain == incomplete_kb().domain);
  CHECK(s.kb.lexicon.empty());
  CHECK(s.lexicon == lexicon());
  bool rollback = false;
  for (const auto& e : r.events) rollback = rollback || (e.type == "kb_delta" && e.kind == "rollback");
  CHECK(rollback);

  // The verb is unknown again, so asking for it starts a new lesson.
  say(s, "heat the water");
  CHECK(s.phase == Phase::AwaitingSteps);
}

TEST_CASE("unparseable or out-of-phase input asks for clarification") {
  SessionState s = fresh();
  auto r = say(s, "heat the xyzzy");
  CHECK(has_act(r, RobotActKind::Clarify));
  CHECK(s.phase == Phase::Idle);

  r = say(s, "yes");
  CHECK(has_act(r, RobotActKind::Clarify));
  CHECK(s.phase == Phase::Idle);

  for (std::size_t i = 0; i < 5; ++i) say(s, kTeaching[i]);
  REQUIRE(s.phase == Phase::ConditionQuery);
  const auto kb = s.kb;
  r = say(s, "move the cup to the table");
  CHECK(has_act(r, RobotActKind::Clarify));
  CHECK(has_act(r, RobotActKind::AskCondition));
  CHECK(s.phase == Phase::ConditionQuery);
  CHECK(s.kb == kb);
}

TEST_CASE("a description of something that did not change") {
  SessionState s = fresh();
  for (std::size_t i = 0; i < 4; ++i) say(s, kTeaching[i]);
  auto r = say(s, "the temperature of the milk is high");
  CHECK(has_act(r, RobotActKind::EffectNotObserved));
  CHECK(s.phase == Phase::ExplainAndAskEffect);
}

TEST_CASE("a primitive instruction while idle just executes") {
  SessionState s = fresh();
  auto r = say(s, "move the cup to the oven");
  CHECK(has_act(r, RobotActKind::AcknowledgeStep));
  CHECK(s.phase == Phase::Idle);
  CHECK(s.world.state.contains(parse_atom("In(Water,Oven)")));
}

TEST_CASE("a demonstration the robot already explains commits the verb directly") {
  SessionState s = fresh();
  say(s, "fetch the cup");
  say(s, "move the cup to the oven");
  auto r = say(s, "I am done");
  CHECK(s.phase == Phase::Confirming);
  CHECK(has_act(r, RobotActKind::ConfirmVerb));
  say(s, "ok");
  r = say(s, "fetch the jug");
  CHECK(r.reply == "To fetch the jug I will: move the jug to the oven.");
}

TEST_CASE("the transcript interleaves human, event and robot lines") {
  SessionState s = fresh();
  say(s, "heat the water");
  CHECK(transcript_text(s) ==
        "H: heat the water\n"
        "E: phase AwaitingSteps\n"
        "R: I do not know how to heat the water. Can you show me the steps?\n");
  CHECK(human_turns(transcript_text(s)) == std::vector<std::string>{"heat the water"});
}
