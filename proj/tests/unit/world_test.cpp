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

#include <deque>
#include <random>

#include "fixtures.hpp"
#include "itl/error.hpp"
#include "itl/world.hpp"

using namespace itl;
using itl::testing::kitchen;

namespace {

Atom A(const char* text) { return parse_atom(text); }

}  // namespace

TEST_CASE("the shipped kitchen loads") {
  const WorldModel& w = kitchen();
  std::set<std::string> objects;
  for (const auto& [o, s] : w.domain.types.objects()) objects.insert(o);
  CHECK(objects == std::set<std::string>{"Water", "Milk", "Cup", "Jug", "Oven", "Fridge", "Table"});
  std::set<std::string> actions;
  for (const auto& [a, s] : w.domain.schemas) actions.insert(a);
  CHECK(actions == std::set<std::string>{"Moveto", "PressOvenButton"});
  CHECK_NOTHROW(check_world_invariants(w));
  CHECK(w.domain.types.object_has_sort("Cup", "Heatable"));
  CHECK(w.domain.types.is_fixed("Oven"));
  CHECK_FALSE(w.domain.types.is_fixed("Cup"));
}

TEST_CASE("moving the cup carries the water") {
  auto [w1, p1] = execute(kitchen(), A("Moveto(Cup,Oven)"));
  CHECK(w1.state.contains(A("In(Cup,Oven)")));
  CHECK(w1.state.contains(A("In(Water,Oven)")));
  CHECK(w1.state.contains(A("In(Water,Cup)")));
  CHECK_FALSE(w1.state.contains(A("In(Cup,Table)")));
  CHECK_FALSE(w1.state.contains(A("In(Water,Table)")));
  CHECK(p1.atoms == w1.state);
  CHECK(p1.step_index == 1);
}

TEST_CASE("pressing the oven button heats what is inside") {
  auto [w1, p1] = execute(kitchen(), A("Moveto(Cup,Oven)"));
  auto [w2, p2] = execute(w1, A("PressOvenButton()"));
  auto d = diff_states(w1.state, w2.state);
  CHECK(d.added == std::set<Atom>{A("Status(Oven,On)"), A("Temp(Cup,High)"), A("Temp(Water,High)")});
  CHECK(d.removed ==
        std::set<Atom>{A("Status(Oven,Off)"), A("Temp(Cup,Normal)"), A("Temp(Water,Normal)")});

  auto [w3, p3] = execute(w2, A("PressOvenButton()"));
  auto d2 = diff_states(w2.state, w3.state);
  CHECK(d2.removed == std::set<Atom>{A("Status(Oven,On)")});
  CHECK(d2.added == std::set<Atom>{A("Status(Oven,Off)")});
  CHECK(p3.step_index == 3);
}

TEST_CASE("execute rejects unknown and ill-sorted actions") {
  CHECK_THROWS_AS(execute(kitchen(), A("Boil(Water)")), UnknownAction);
  CHECK_THROWS_AS(execute(kitchen(), A("Moveto(Oven,Table)")), SortError);
  CHECK_THROWS_AS(execute(kitchen(), A("Moveto(Cup)")), SortError);
}

TEST_CASE("load_domain validation") {
  CHECK_NOTHROW(load_domain(R"J({"objects": {}, "predicates": [], "actions": [], "initial_state": []})J"));
  auto empty = load_domain(R"J({"objects": {}})J");
  CHECK(empty.state.empty());
  CHECK_THROWS_AS(load_domain(R"J({"predicates": [{"name": "In", "args": []},
                                                  {"name": "In", "args": []}]})J"),
                  ParseError);
  try {
    load_domain("{\n  \"objects\": {\n    \"Cup\" \"Container\"\n  }\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("domain:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_domain(R"J({"objects": {"Cup": "Container"},
                                  "predicates": [{"name": "In", "args": ["Container", "Container"]}],
                                  "initial_state": ["In(Cup,Oven)"]})J"),
                  SortError);
  CHECK_THROWS_AS(load_domain(R"J({"objects": {"Cup": "Container"},
                                  "predicates": [{"name": "In", "args": ["Container"]}],
                                  "initial_state": ["In(Cup,Cup)"]})J"),
                  SortError);
}

TEST_CASE("save then load reproduces the world") {
  const WorldModel& w = kitchen();
  WorldModel again = load_domain(save_domain(w));
  CHECK(again.domain == w.domain);
  CHECK(again.state == w.state);
  CHECK(save_domain(again) == save_domain(w));
}

TEST_CASE("random walks keep the world invariants, are deterministic and respect the frame") {
  std::mt19937 rng(42);
  auto actions = ground_actions(kitchen().domain);
  for (int walk = 0; walk < 50; ++walk) {
    WorldModel w = kitchen();
    w.state = itl::testing::random_kitchen_state(kitchen(), rng);
    REQUIRE_NOTHROW(check_world_invariants(w));
    for (int step = 0; step < 8; ++step) {
      const Atom& a = actions[rng() % actions.size()];
      auto [next, p] = execute(w, a);
      auto [again, p2] = execute(w, a);
      CHECK(next.state == again.state);
      CHECK_NOTHROW(check_world_invariants(next));
      // frame: only predicates named in some effect of the action may change
      std::set<std::string> touched;
      std::function<void(const EffectRule&)> visit = [&](const EffectRule& r) {
        for (const auto& l : r.then) touched.insert(l.atom.predicate);
        for (const auto& c : r.nested) visit(c);
      };
      for (const auto& r : w.domain.schemas.at(a.predicate).rules) visit(r);
      auto d = diff_states(w.state, next.state);
      for (const auto& x : d.added) CHECK(touched.count(x.predicate));
      for (const auto& x : d.removed) CHECK(touched.count(x.predicate));
      w = next;
    }
  }
}

TEST_CASE("ground actions are distinct-argument and ordered") {
  auto actions = ground_actions(kitchen().domain);
  // 4 movables x 3 locations + the button
  CHECK(actions.size() == 13);
  CHECK(actions.front().to_string() == "Moveto(Cup,Fridge)");
  CHECK(actions.back().to_string() == "PressOvenButton()");
}

TEST_CASE("restricting objects drops dangling actions") {
  auto w = restrict_objects(kitchen(), {"Water", "Cup", "Table", "Fridge"});
  CHECK(w.domain.schemas.count("PressOvenButton") == 0);
  CHECK(w.domain.schemas.count("Moveto") == 1);
  CHECK_NOTHROW(check_world_invariants(w));
}

TEST_CASE("percept noise hook is off by default and applied when set") {
  WorldModel w = kitchen();
  CHECK(w.percept().atoms == w.state);
  w.noise = [](const State& s, std::size_t) {
    State out = s;
    out.erase(parse_atom("In(Milk,Fridge)"));
    return out;
  };
  CHECK_FALSE(w.percept().atoms.contains(A("In(Milk,Fridge)")));
}
