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

#include "itl/world.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "itl/error.hpp"
#include "itl/serialization.hpp"

namespace itl {

RawPercept WorldModel::percept() const {
  return {noise ? noise(state, step_index) : state, step_index};
}

std::pair<WorldModel, RawPercept> execute(const WorldModel& world, const Atom& action) {
  WorldModel next = world;
  next.state = progress(world.domain, world.state, action);
  next.step_index = world.step_index + 1;
  RawPercept p = next.percept();
  return {std::move(next), std::move(p)};
}

WorldModel load_domain(std::string_view text) {
  io::json j = io::parse_json(text, "domain");
  if (!j.is_object()) throw ParseError("domain: top level must be an object");
  WorldModel w;
  w.domain.types = io::types_from_json(j.value("sorts", io::json()), j.value("objects", io::json()));
  w.domain.signatures = io::signatures_from_json(j.value("predicates", io::json()));
  for (const auto& [name, sig] : w.domain.signatures) {
    for (const auto& s : sig.arg_sorts) {
      if (s != kValueSort && !w.domain.types.has_sort(s)) {
        throw SortError("predicate " + name + " uses undeclared sort " + s);
      }
    }
  }
  if (j.contains("actions")) {
    for (const auto& a : j.at("actions")) {
      ActionSchema s = io::schema_from_json(a, w.domain.signatures);
      if (w.domain.schemas.count(s.name)) throw ParseError("duplicate action declaration " + s.name);
      for (const auto& p : s.params) {
        if (!w.domain.types.has_sort(p.sort)) {
          throw SortError("action " + s.name + " parameter " + p.name + " uses undeclared sort " +
                          p.sort);
        }
      }
      validate_schema(w.domain, s);
      w.domain.schemas.emplace(s.name, std::move(s));
    }
  }
  w.state = io::state_from_json(j.value("initial_state", io::json()));
  check_world_invariants(w);
  return w;
}

std::string save_domain(const WorldModel& world) {
  io::json types = io::to_json(world.domain.types);
  io::json j;
  j["sorts"] = types["sorts"];
  j["objects"] = types["objects"];
  io::json preds = io::json::array();
  for (const auto& [name, sig] : world.domain.signatures) preds.push_back(io::to_json(sig));
  j["predicates"] = preds;
  io::json actions = io::json::array();
  for (const auto& [name, schema] : world.domain.schemas) actions.push_back(io::to_json(schema));
  j["actions"] = actions;
  j["initial_state"] = io::to_json(world.state);
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WorldModel load_domain_file(const std::string& path) { return load_domain(read_file(path)); }

void check_world_invariants(const WorldModel& world) {
  const auto& d = world.domain;
  std::map<std::string, std::map<std::vector<Term>, int>> counts;
  for (const auto& a : world.state) {
    check_atom(d.types, d.signatures, a);
    const auto& sig = d.signatures.at(a.predicate);
    if (!sig.is_functional()) continue;
    std::vector<Term> key = a.args;
    key.erase(key.begin() + static_cast<std::ptrdiff_t>(*sig.value_position));
    ++counts[a.predicate][key];
  }
  for (const auto& [name, sig] : d.signatures) {
    if (!sig.is_functional()) continue;
    // Enumerate every well-sorted key; each needs exactly one value.
    std::vector<std::vector<std::string>> domains;
    for (std::size_t i = 0; i < sig.arity(); ++i) {
      if (i == *sig.value_position) continue;
      domains.push_back(d.types.objects_of(sig.arg_sorts[i]));
    }
    std::vector<Term> key;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == domains.size()) {
        int n = counts[name][key];
        if (n != 1) {
          std::string k;
          for (const auto& t : key) k += t.name + " ";
          throw ContractViolation(name + " has " + std::to_string(n) + " values for " + k);
        }
        return;
      }
      for (const auto& o : domains[i]) {
        key.push_back(Term::constant(o));
        rec(i + 1);
        key.pop_back();
      }
    };
    rec(0);
  }
}

WorldModel restrict_objects(const WorldModel& world, const std::set<std::string>& keep) {
  WorldModel w = world;
  w.domain.types = world.domain.types.restricted_to(keep);
  State s;
  for (const auto& a : world.state) {
    bool ok = true;
    for (const auto& t : a.args) {
      if (world.domain.types.has_object(t.name) && !keep.count(t.name)) ok = false;
    }
    if (ok) s.insert(a);
  }
  w.state = std::move(s);
  // Actions whose rules name a dropped object make no sense in the sub-instance.
  for (auto it = w.domain.schemas.begin(); it != w.domain.schemas.end();) {
    bool dangling = false;
    for (const auto& c : constants_in(it->second)) {
      if (world.domain.types.has_object(c) && !keep.count(c)) dangling = true;
    }
    it = dangling ? w.domain.schemas.erase(it) : std::next(it);
  }
  return w;
}

}  // namespace itl
