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

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "itl/error.hpp"
#include "itl/learner.hpp"

using namespace itl;
using itl::testing::complete_kb;
using itl::testing::demonstrate;
using itl::testing::heat_water_episode;
using itl::testing::incomplete_kb;
using itl::testing::kitchen;
using itl::testing::lexicon;

namespace {

Atom A(const char* text) { return parse_atom(text); }
Literal L(const char* text) { return parse_literal(text); }

std::vector<Atom> atoms(std::initializer_list<const char*> texts) {
  std::vector<Atom> out;
  for (const char* t : texts) out.push_back(A(t));
  return out;
}

LiteralSet lits(std::initializer_list<const char*> texts) {
  LiteralSet out;
  for (const char* t : texts) out.insert(L(t));
  return out;
}

DialogueAct describe(const char* text, const KnowledgeBase& kb) { return parse(text, kb, lexicon()); }

const Acquisition& temp_acquisition() {
  static const Acquisition acq =
      acquire_predicate(incomplete_kb(), lexicon(), describe("the temperature of the water is high", incomplete_kb()));
  return acq;
}

// Independent check of the version space: every subset, every evidence point.
std::vector<ConditionMask> enumerate_consistent(const ConditionHypothesisSpace& s) {
  std::vector<ConditionMask> out;
  for (ConditionMask m = 0; m < (ConditionMask{1} << s.candidates.size()); ++m) {
    bool ok = true;
    for (const auto& ev : s.evidence) {
      bool all = true;
      for (std::size_t i = 0; i < s.candidates.size(); ++i) {
        if (!((m >> i) & 1u)) continue;
        Literal g = substitute(ev.binding, s.candidates[i]);
        all = all && (ev.context.contains(g.atom) == g.positive);
      }
      ok = ok && all == ev.effect_observed;
    }
    if (ok) out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("sequence difference against a longest common subsequence") {
  auto demo = atoms({"Moveto(Cup,Oven)", "PressOvenButton()"});
  CHECK(sequence_difference(demo, demo).empty());
  CHECK(sequence_difference(demo, {}) == demo);
  CHECK(sequence_difference(demo, atoms({"Moveto(Cup,Oven)"})) == atoms({"PressOvenButton()"}));
  CHECK(sequence_difference(atoms({"Moveto(Cup,Fridge)", "Moveto(Cup,Oven)", "PressOvenButton()"}), demo) ==
        atoms({"Moveto(Cup,Fridge)"}));
  CHECK(sequence_difference(demo, atoms({"PressOvenButton()", "Moveto(Cup,Oven)"})).size() == 1);
}

TEST_CASE("abnormality on the heat-water demonstration") {
  auto ab = detect_abnormality(incomplete_kb(), heat_water_episode());
  REQUIRE(ab);
  CHECK(ab->missing_actions == atoms({"Moveto(Cup,Oven)", "PressOvenButton()"}));
  CHECK_FALSE(ab->planned);
  CHECK(ab->unexplained.added.empty());
  CHECK(ab->unexplained.removed == std::set<Atom>{A("Status(Oven,Off)")});

  CHECK_FALSE(detect_abnormality(complete_kb(), heat_water_episode()));
}

TEST_CASE("abnormality variants") {
  SUBCASE("a redundant demonstrated step is missing from the plan") {
    auto e = demonstrate(kitchen(), atoms({"Moveto(Cup,Fridge)", "Moveto(Cup,Oven)", "PressOvenButton()"}));
    auto ab = detect_abnormality(complete_kb(), e);
    REQUIRE(ab);
    CHECK(ab->missing_actions == atoms({"Moveto(Cup,Fridge)"}));
    CHECK(ab->unexplained.added.empty());
    CHECK(ab->unexplained.removed.empty());
  }
  SUBCASE("an equally short reordering is not an abnormality") {
    auto e = demonstrate(kitchen(), atoms({"Moveto(Jug,Table)", "Moveto(Cup,Oven)"}));
    CHECK_FALSE(detect_abnormality(complete_kb(), e));
    e = demonstrate(kitchen(), atoms({"Moveto(Cup,Oven)", "Moveto(Jug,Table)"}));
    CHECK_FALSE(detect_abnormality(complete_kb(), e));
  }
  SUBCASE("without the heating rule the Temp change is unexplained") {
    KnowledgeBase kb = complete_kb();
    kb.domain.schemas["PressOvenButton"].rules[0].nested.clear();
    auto ab = detect_abnormality(kb, heat_water_episode());
    REQUIRE(ab);
    // no schema can add Temp(Water,High), so nothing is planned
    CHECK_FALSE(ab->planned);
    CHECK(ab->missing_actions == atoms({"Moveto(Cup,Oven)", "PressOvenButton()"}));
    CHECK(ab->unexplained.added == std::set<Atom>{A("Temp(Cup,High)"), A("Temp(Water,High)")});
  }
  CHECK_THROWS_AS(detect_abnormality(complete_kb(), demonstrate(kitchen(), {}, true)), ContractViolation);
}

TEST_CASE("acquire_predicate") {
  const auto& acq = temp_acquisition();
  CHECK(acq.registered);
  CHECK(acq.atom == A("Temp(Water,High)"));
  CHECK(acq.signature == PredicateSignature{"Temp", {"Heatable", "Value"}, 1, {"High", "Normal"}});
  CHECK(acq.kb.has_predicate("Temp"));
  CHECK(acq.kb.audit_log.size() == incomplete_kb().audit_log.size() + 1);

  auto again = acquire_predicate(acq.kb, lexicon(), describe("the water is hot", acq.kb));
  CHECK_FALSE(again.registered);
  CHECK(again.kb == acq.kb);
  CHECK(again.atom == A("Temp(Water,High)"));

  DialogueAct spoon = describe("the water is hot", acq.kb);
  spoon.effect = L("Temp(Spoon,High)");
  CHECK_THROWS_AS(acquire_predicate(incomplete_kb(), lexicon(), spoon), UnknownObject);

  auto color = acquire_predicate(incomplete_kb(), lexicon(), describe("the color of the cup is red", incomplete_kb()));
  CHECK(color.signature == PredicateSignature{"Color", {"Container", "Value"}, 1, {"Red"}});
  REQUIRE(color.lexicon.attribute_by_word("color"));
  CHECK(parse("the color of the cup is red", color.kb, color.lexicon).novel == std::nullopt);
}

TEST_CASE("localize_cause") {
  const Episode& e = heat_water_episode();
  CHECK(localize_cause(e, A("Temp(Water,High)")) == CauseStep{1, A("PressOvenButton()")});
  CHECK(localize_cause(e, A("In(Cup,Oven)")) == CauseStep{0, A("Moveto(Cup,Oven)")});
  CHECK_THROWS_AS(localize_cause(e, A("In(Water,Cup)")), NoCauseFound);
  CHECK_THROWS_AS(localize_cause(e, A("Temp(Milk,High)")), NoCauseFound);
}

TEST_CASE("localize_cause agrees with a full scan on random episodes") {
  std::mt19937 rng(3);
  auto actions = ground_actions(kitchen().domain);
  auto universe = itl::testing::atom_universe(kitchen().domain);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Atom> steps;
    for (int i = 0; i < 8; ++i) steps.push_back(actions[rng() % actions.size()]);
    Episode e = demonstrate(kitchen(), steps);
    for (const auto& a : universe) {
      std::optional<std::size_t> expected;
      if (!e.steps.front().pre_percept.atoms.contains(a)) {
        for (const auto& s : e.steps)
          if (!s.pre_percept.atoms.contains(a) && s.post_percept.atoms.contains(a)) {
            expected = s.index;
            break;
          }
      }
      if (expected) {
        CHECK(localize_cause(e, a).index == *expected);
      } else {
        CHECK_THROWS_AS(localize_cause(e, a), NoCauseFound);
      }
    }
  }
}

TEST_CASE("the heat-water hypothesis space") {
  const auto& acq = temp_acquisition();
  auto space = build_hypothesis_space(acq.kb, heat_water_episode(), 1, A("Temp(Water,High)"));
  CHECK(space.effect == L("Temp(x,High)"));
  CHECK(space.vars == std::vector<TypedVar>{{"x", "Heatable"}});
  CHECK(space.candidates == std::vector<Literal>{L("In(x,Cup)"), L("In(x,Oven)"), L("In(Cup,Oven)")});
  CHECK(space.coinciding_rule == std::optional<std::size_t>{0});
  CHECK(space.evidence.size() == 4);
  CHECK(space.version_space == enumerate_consistent(space));
  REQUIRE(space.version_space.size() == 2);

  auto q = select_question(space);
  REQUIRE(q);
  CHECK(q->literal == L("In(Cup,Oven)"));
  CHECK(q->gain == doctest::Approx(1.0));
  CHECK(generate(q->ask, acq.lexicon) == "Does the water become hot only if the cup is in the oven?");
  const auto& pre = heat_water_episode().steps[1].pre_percept;
  bool answer = simulated_answer(kitchen().domain, pre, A("PressOvenButton()"), *q->ask.literal, *q->ask.effect);
  CHECK_FALSE(answer);

  auto next = incorporate_answer(space, *q, answer);
  CHECK(next.version_space.size() == 1);
  CHECK_FALSE(select_question(next));
  CHECK(learned_condition(next) == std::vector<Literal>{L("In(x,Oven)")});

  auto update = propose_schema_update(next);
  CHECK(update.action == "PressOvenButton");
  CHECK(update.attach_under == std::optional<std::size_t>{0});
  CHECK(update.rule == EffectRule{{{"x", "Heatable"}}, {L("In(x,Oven)")}, {L("Temp(x,High)")}, {}});

  KnowledgeBase updated = update_schema(acq.kb, update.action, update.rule, update.attach_under);
  CHECK(structurally_equal(updated.domain.schemas.at("PressOvenButton"),
                           complete_kb().domain.schemas.at("PressOvenButton")));

  // re-grounding the learned rule reproduces every memorized Temp transition
  for (const auto& s : heat_water_episode().steps) {
    State predicted = apply_schema(updated, observe(updated, s.pre_percept), *s.executed_action);
    State observed = observe(updated, s.post_percept);
    for (const auto& a : itl::testing::atom_universe(kitchen().domain))
      if (a.predicate == "Temp") CHECK(predicted.contains(a) == observed.contains(a));
  }
}

TEST_CASE("a condition over the effect's own predicate") {
  // Without the rule that carries contents along, moving the cup leaves the
  // water behind in the robot's model.
  KnowledgeBase kb = complete_kb();
  auto& rules = kb.domain.schemas.at("Moveto").rules;
  rules.erase(rules.begin() + 2);
  Episode e = demonstrate(kitchen(), {A("Moveto(Cup,Fridge)")});
  auto space = build_hypothesis_space(kb, e, 0, A("In(Water,Fridge)"));
  CHECK(space.effect == L("In(x,b)"));
  // In(x,a) is a candidate; the value the effect displaces is not.
  CHECK(std::find(space.candidates.begin(), space.candidates.end(), L("In(x,a)")) != space.candidates.end());
  CHECK(std::find(space.candidates.begin(), space.candidates.end(), L("Temp(x,Normal)")) != space.candidates.end());
  // The cup's own move is explained by the schema, so it is no evidence.
  for (const auto& ev : space.evidence) CHECK(ev.binding.at("x") != "Cup");

  const auto& pre = e.steps[0].pre_percept;
  while (auto q = select_question(space)) {
    Literal lit = substitute(space.primary, q->literal);
    space = incorporate_answer(std::move(space), *q,
                               simulated_answer(kitchen().domain, pre, A("Moveto(Cup,Fridge)"), lit,
                                                L("In(Water,Fridge)")));
  }
  CHECK(learned_condition(space) == std::vector<Literal>{L("In(x,a)")});
}

TEST_CASE("question selection on a hand-built space") {
  Substitution water{{"x", "Water"}};
  State both{A("In(Water,Oven)"), A("Status(Oven,On)")};
  auto space = make_hypothesis_space(L("Temp(x,High)"), {{"x", "Heatable"}}, A("PressOvenButton()"),
                                     {L("In(x,Oven)"), L("Status(Oven,On)")},
                                     {{both, water, A("PressOvenButton()"), true},
                                      {State{}, water, A("PressOvenButton()"), false}});
  CHECK(space.version_space.size() == 3);
  auto q = select_question(space);
  REQUIRE(q);
  CHECK(q->literal == L("In(x,Oven)"));
  CHECK(q->gain == doctest::Approx(0.9183).epsilon(1e-3));

  // ground truth: In(x,Oven) needed, Status(Oven,On) alone not enough
  std::size_t asked = 0;
  while (auto next = select_question(space)) {
    space = incorporate_answer(space, *next, next->literal == L("In(x,Oven)"));
    ++asked;
  }
  CHECK(asked <= 2);
  CHECK(learned_condition(space) == std::vector<Literal>{L("In(x,Oven)")});

  auto singleton = make_hypothesis_space(L("Temp(x,High)"), {{"x", "Heatable"}}, A("PressOvenButton()"), {},
                                         {{both, water, A("PressOvenButton()"), true}});
  CHECK_FALSE(select_question(singleton));
  CHECK(learned_condition(singleton).empty());
  CHECK_FALSE(propose_schema_update(singleton).attach_under);

  auto contradiction = make_hypothesis_space(L("Temp(x,High)"), {{"x", "Heatable"}}, A("PressOvenButton()"), {},
                                             {{both, water, A("PressOvenButton()"), true},
                                              {both, water, A("PressOvenButton()"), false}});
  CHECK_THROWS_AS(select_question(contradiction), InconsistentEvidence);
  CHECK_THROWS_AS(learned_condition(contradiction), InconsistentEvidence);
}

TEST_CASE("answers that never require a literal leave the empty condition") {
  std::vector<Literal> cands{L("In(x,Cup)"), L("In(x,Oven)"), L("In(Cup,Oven)"), L("Status(Fridge,On)")};
  State ctx{A("In(Water,Cup)"), A("In(Water,Oven)"), A("In(Cup,Oven)"), A("Status(Fridge,On)")};
  auto space = make_hypothesis_space(L("Temp(x,High)"), {{"x", "Heatable"}}, A("PressOvenButton()"), cands,
                                     {{ctx, {{"x", "Water"}}, A("PressOvenButton()"), true}});
  CHECK(space.version_space.size() == 16);
  std::size_t asked = 0;
  while (auto q = select_question(space)) {
    space = incorporate_answer(space, *q, false);
    ++asked;
  }
  CHECK(asked == cands.size());
  CHECK(learned_condition(space).empty());
}

TEST_CASE("random answers never grow the version space") {
  std::mt19937 rng(5);
  std::vector<Literal> cands{L("In(x,Cup)"), L("In(x,Oven)"), L("In(Cup,Oven)"), L("Status(Fridge,On)"),
                             L("In(Cup,Table)")};
  State ctx{A("In(Water,Cup)"), A("In(Water,Oven)"), A("In(Cup,Oven)"), A("Status(Fridge,On)"), A("In(Cup,Table)")};
  for (int trial = 0; trial < 50; ++trial) {
    auto space = make_hypothesis_space(L("Temp(x,High)"), {{"x", "Heatable"}}, A("PressOvenButton()"), cands,
                                       {{ctx, {{"x", "Water"}}, A("PressOvenButton()"), true}});
    std::size_t before = space.version_space.size();
    std::size_t asked = 0;
    while (auto q = select_question(space)) {
      space = incorporate_answer(space, *q, rng() % 2 == 0);
      CHECK(space.version_space.size() < before);
      before = space.version_space.size();
      ++asked;
    }
    CHECK(asked <= cands.size());
    CHECK(space.version_space.size() == 1);
  }
}

TEST_CASE("learn_verb") {
  const auto& acq = temp_acquisition();
  auto heat = learn_verb(acq.kb, heat_water_episode(), "heat", {"Water"});
  CHECK(heat.frame == std::vector<std::string>{"theme"});
  CHECK(LiteralSet(heat.goal.begin(), heat.goal.end()) ==
        lits({"In(theme,Oven)", "Temp(theme,High)", "not In(theme,Table)", "not Temp(theme,Normal)"}));

  auto before = learn_verb(incomplete_kb(), heat_water_episode(), "heat", {"Water"});
  CHECK(LiteralSet(before.goal.begin(), before.goal.end()) == lits({"In(theme,Oven)", "not In(theme,Table)"}));

  CHECK_THROWS_AS(learn_verb(acq.kb, heat_water_episode(), "heat", {"Milk"}), NoStateChange);
  auto twice = demonstrate(kitchen(), atoms({"PressOvenButton()", "PressOvenButton()"}));
  CHECK_THROWS_AS(learn_verb(complete_kb(), twice, "toggle", {"Oven"}), NoStateChange);
  CHECK_THROWS_AS(learn_verb(complete_kb(), demonstrate(kitchen(), {}), "heat", {"Water"}), NoStateChange);
  CHECK_THROWS_AS(learn_verb(complete_kb(), demonstrate(kitchen(), {}, true), "heat", {"Water"}), ContractViolation);
}

TEST_CASE("a verb taught on water transfers to milk") {
  const auto& acq = temp_acquisition();
  KnowledgeBase kb = acq.kb;
  auto space = build_hypothesis_space(kb, heat_water_episode(), 1, A("Temp(Water,High)"));
  while (auto q = select_question(space)) {
    const auto& pre = heat_water_episode().steps[1].pre_percept;
    space = incorporate_answer(
        space, *q, simulated_answer(kitchen().domain, pre, space.cause, *q->ask.literal, *q->ask.effect));
  }
  auto u = propose_schema_update(space);
  kb = update_schema(kb, u.action, u.rule, u.attach_under);
  kb = add_verb(kb, learn_verb(kb, heat_water_episode(), "heat", {"Water"}));
  auto goal = lookup_verb(kb, "heat", {"Milk"});
  State start = observe(kb, kitchen().percept());
  auto p = plan({kb, start, goal});
  REQUIRE(p);
  CHECK(p->steps == atoms({"Moveto(Jug,Oven)", "PressOvenButton()"}));
  CHECK(validate_plan(complete_kb(), kitchen().state, p->steps, goal).valid);
}
