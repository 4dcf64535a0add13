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

#include "fixtures.hpp"
#include "itl/error.hpp"
#include "itl/service.hpp"

using namespace itl;
using itl::testing::complete_kb;
using itl::testing::golden_text;
using itl::testing::incomplete_kb;
using itl::testing::kitchen;
using itl::testing::lexicon;
using itl::testing::script_path;

namespace {

const SessionScript& heat_water() {
  static const SessionScript s = load_script(script_path("heat_water.yaml"));
  return s;
}

const SessionScript& oven_on() {
  static const SessionScript s = load_script(script_path("heat_milk_oven_on.yaml"));
  return s;
}

}  // namespace

TEST_CASE("parsing session scripts") {
  const auto& s = heat_water();
  CHECK(s.name == "heat_water");
  CHECK(s.turns.size() == 9);
  CHECK(s.turns.front() == "heat the water");
  CHECK(s.kb_path == itl::testing::data_path("kb_incomplete.json"));
  REQUIRE(s.expect.missing_actions);
  CHECK(*s.expect.missing_actions == std::vector<std::string>{"Moveto(Cup,Oven)", "PressOvenButton()"});
  CHECK(s.expect.schemas.count("PressOvenButton") == 1);

  CHECK_THROWS_AS(parse_script("turns: [a, b"), ParseError);
  CHECK_THROWS_AS(parse_script("- just a list"), ParseError);
  CHECK_THROWS_AS(parse_script("domain: d.json\nlexicon: l.json\n"), ParseError);
  CHECK_THROWS_AS(parse_script("domain: d\nkb: k\nlexicon: l\nturns: oops\n"), ParseError);
  CHECK(parse_script("domain: d\nkb: /abs/k\nlexicon: l\n", "/base").kb_path == "/abs/k");
  CHECK(parse_script("domain: d\nkb: k\nlexicon: l\n", "/base").domain_path == "/base/d");
}

TEST_CASE("the heat-water script meets its expectations") {
  auto run = run_script(heat_water());
  CHECK_MESSAGE(run.ok(), run.failures.dump());
  auto report = run.report("heat_water");
  CHECK(report["acquired_predicates"] == nlohmann::json{"Temp"});
  CHECK(report["updated_schemas"] == nlohmann::json{"PressOvenButton"});
  CHECK(report["verbs"] == nlohmann::json{"heat"});
  CHECK(report["ok"] == true);
}

TEST_CASE("the oven-on script learns the same rule") {
  auto run = run_script(oven_on());
  CHECK_MESSAGE(run.ok(), run.failures.dump());
  CHECK(structurally_equal(run.session.kb.domain.schemas.at("PressOvenButton"),
                           kitchen().domain.schemas.at("PressOvenButton")));
}

TEST_CASE("expectation misses are reported, not thrown") {
  SessionScript s = heat_water();
  s.expect.plan = std::vector<std::string>{"PressOvenButton()"};
  s.expect.predicates.push_back("Colour");
  s.expect.observed_atoms.push_back("Temp(Milk,Normal)");
  auto run = run_script(s);
  CHECK_FALSE(run.ok());
  REQUIRE(run.failures.size() == 3);
  CHECK(run.failures[0]["expectation"] == "predicate Colour");
  CHECK(run.failures[1]["expectation"] == "plan");
  CHECK(run.failures[2]["expectation"] == "observed Temp(Milk,Normal)");
  CHECK(run.report("x")["ok"] == false);
}

TEST_CASE("golden transcripts and knowledge bases") {
  for (const auto* script : {&heat_water(), &oven_on()}) {
    CAPTURE(script->name);
    auto run = run_script(*script);
    const std::string transcript = transcript_text(run.session);
    CHECK(golden_text(script->name + ".transcript", transcript) == transcript);
    const std::string kb = save_kb(run.session.kb);
    CHECK(golden_text(script->name + ".kb.json", kb) == kb);
  }
}

TEST_CASE("replaying a transcript") {
  auto run = run_script(heat_water());
  const std::string transcript = transcript_text(run.session);
  auto same = replay_transcript(heat_water(), transcript);
  CHECK(same.identical);
  CHECK_FALSE(same.first_difference);
  CHECK(same.kb == save_kb(run.session.kb));

  std::string tampered = transcript;
  const std::string from = "R: Okay, I pressed the oven button.";
  tampered.replace(tampered.find(from), from.size(), "R: Okay, I pushed the oven button.");
  auto diff = replay_transcript(heat_water(), tampered);
  CHECK_FALSE(diff.identical);
  REQUIRE(diff.first_difference);
  CHECK(*diff.first_difference == 9);
  CHECK(diff.expected_line == "R: Okay, I pushed the oven button.");
  CHECK(diff.actual_line == from);

  auto shorter = replay_transcript(heat_water(), transcript + "H: ok\n");
  CHECK_FALSE(shorter.identical);
}

TEST_CASE("extracting the demonstration of a script") {
  auto d = demonstration_of(heat_water());
  CHECK(d.verb == "heat");
  CHECK(d.args == std::vector<std::string>{"Water"});
  CHECK(d.world.state == kitchen().state);
  CHECK(demonstration_of(oven_on()).world.state.contains(parse_atom("Status(Oven,On)")));
  CHECK(d.steps == std::vector<Atom>{parse_atom("Moveto(Cup,Oven)"), parse_atom("PressOvenButton()")});

  SessionScript none = heat_water();
  none.turns = {"move the cup to the oven"};
  CHECK_THROWS_AS(demonstration_of(none), ContractViolation);
}

TEST_CASE("a simulated teacher restores the missing rule") {
  auto demo = demonstration_of(heat_water());
  auto out = teach_with_simulated_human(new_session(incomplete_kb(), kitchen(), lexicon()), kitchen().domain, demo);
  CHECK(out.abnormality_detected);
  CHECK(out.questions == 1);
  CHECK(out.session.phase == Phase::Idle);
  CHECK(structurally_equal(out.session.kb.domain.schemas.at("PressOvenButton"),
                           kitchen().domain.schemas.at("PressOvenButton")));
  CHECK(lookup_verb(out.session.kb, "heat", {"Milk"}).size() > 0);

  // With the complete model nothing is surprising and no question is asked.
  auto known = teach_with_simulated_human(new_session(complete_kb(), kitchen(), lexicon()), kitchen().domain, demo);
  CHECK_FALSE(known.abnormality_detected);
  CHECK(known.questions == 0);
  CHECK(known.session.kb.domain == complete_kb().domain);
}

TEST_CASE("effect-rule deletions") {
  auto ms = effect_rule_deletions(complete_kb());
  std::vector<std::string> ids;
  for (const auto& m : ms) ids.push_back(m.id);
  CHECK(ids == std::vector<std::string>{"Moveto/0", "Moveto/1", "Moveto/2", "Moveto/3", "PressOvenButton/0",
                                        "PressOvenButton/0/0", "PressOvenButton/1"});
  const auto& nested = ms[5].kb.domain.schemas.at("PressOvenButton");
  REQUIRE(nested.rules.size() == 2);
  CHECK(nested.rules[0].nested.empty());
  CHECK(nested.rules[0].then == complete_kb().domain.schemas.at("PressOvenButton").rules[0].then);
  for (const auto& m : ms) {
    CAPTURE(m.id);
    CHECK(m.kb.domain.schemas.at(m.action) != complete_kb().domain.schemas.at(m.action));
    for (const auto& [name, schema] : m.kb.domain.schemas)
      if (name != m.action) CHECK(schema == complete_kb().domain.schemas.at(name));
  }
}

TEST_CASE("the mutation table") {
  auto rows = evaluate_mutations(lexicon(), {demonstration_of(heat_water())});
  REQUIRE(rows.size() == 7);
  CHECK(rows[5].mutation == "PressOvenButton/0/0");
  CHECK(rows[5].detected);
  CHECK(rows[5].questions == 1);
  CHECK(rows[6].mutation == "PressOvenButton/1");
  CHECK_FALSE(rows[6].detected);
  auto table = format_mutation_table(rows);
  CHECK(table.rfind("mutation\tscript\tdetected\tquestions\n", 0) == 0);
  CHECK(table.find("PressOvenButton/0/0\theat_water\tyes\t1\n") != std::string::npos);
}
