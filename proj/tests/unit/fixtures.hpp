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

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "itl/domain.hpp"
#include "itl/knowledge_base.hpp"
#include "itl/memory.hpp"
#include "itl/parser.hpp"
#include "itl/world.hpp"

namespace itl::testing {

inline std::string data_path(const std::string& name) { return std::string(ITL_DATA_DIR) + "/" + name; }

inline std::string script_path(const std::string& name) { return data_path("scripts/" + name); }

inline std::string golden_path(const std::string& name) { return std::string(ITL_GOLDEN_DIR) + "/" + name; }

// Golden text; ITL_UPDATE_GOLDEN=1 rewrites it from `actual`.
inline std::string golden_text(const std::string& name, const std::string& actual) {
  if (std::getenv("ITL_UPDATE_GOLDEN")) std::ofstream(golden_path(name), std::ios::binary) << actual;
  return read_file(golden_path(name));
}

inline const WorldModel& kitchen() {
  static const WorldModel w = load_domain_file(data_path("kitchen.json"));
  return w;
}

inline const KnowledgeBase& incomplete_kb() {
  static const KnowledgeBase kb = load_kb_file(data_path("kb_incomplete.json"));
  return kb;
}

inline const KnowledgeBase& complete_kb() {
  static const KnowledgeBase kb = kb_from_world(kitchen());
  return kb;
}

inline const Lexicon& lexicon() {
  static const Lexicon lex = load_lexicon_file(data_path("lexicon.json"));
  return lex;
}

// Executes `steps` in the world and memorizes each one; the episode is
// completed unless `open` is set.
inline Episode demonstrate(WorldModel w, const std::vector<Atom>& steps, bool open = false) {
  Episode e;
  e.id = "demo";
  for (const auto& a : steps) {
    EpisodeStep s;
    s.index = e.steps.size();
    s.executed_action = a;
    s.pre_percept = w.percept();
    auto [next, post] = execute(w, a);
    s.post_percept = post;
    w = next;
    e = record_step(std::move(e), std::move(s));
  }
  return open ? e : complete(std::move(e));
}

inline const Episode& heat_water_episode() {
  static const Episode e =
      demonstrate(kitchen(), {parse_atom("Moveto(Cup,Oven)"), parse_atom("PressOvenButton()")});
  return e;
}

// Reference interpreter: tries every assignment of every quantified
// variable over every object, with no indexing or joins.
class BruteForceInterpreter {
 public:
  explicit BruteForceInterpreter(const Domain& d) : d_(d) {}

  State run(const State& pre, const Atom& action) const {
    const ActionSchema& schema = d_.schemas.at(action.predicate);
    Substitution params;
    for (std::size_t i = 0; i < schema.params.size(); ++i) {
      params[schema.params[i].name] = action.args[i].name;
    }
    std::set<Atom> adds, dels;
    for (const auto& r : schema.rules) visit(r, params, pre, adds, dels);
    return finish(pre, adds, dels);
  }

 private:
  void visit(const EffectRule& r, const Substitution& outer, const State& pre, std::set<Atom>& adds,
             std::set<Atom>& dels) const {
    std::vector<std::string> all;
    for (const auto& [o, s] : d_.types.objects()) all.push_back(o);
    std::vector<std::size_t> idx(r.forall_vars.size(), 0);
    if (!r.forall_vars.empty() && all.empty()) return;
    while (true) {
      Substitution sub = outer;
      bool sorted = true;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        sub[r.forall_vars[i].name] = all[idx[i]];
        if (!d_.types.object_has_sort(all[idx[i]], r.forall_vars[i].sort)) sorted = false;
      }
      if (sorted) {
        bool guard = true;
        for (const auto& l : r.when) {
          if (pre.contains(substitute(sub, l.atom)) != l.positive) guard = false;
        }
        if (guard) {
          for (const auto& l : r.then) (l.positive ? adds : dels).insert(substitute(sub, l.atom));
          for (const auto& c : r.nested) visit(c, sub, pre, adds, dels);
        }
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == all.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }

  State finish(const State& pre, const std::set<Atom>& adds, const std::set<Atom>& dels) const {
    std::set<Atom> out;
    for (const auto& a : pre) {
      bool removed = dels.count(a) != 0;
      auto sig = d_.signatures.find(a.predicate);
      if (sig != d_.signatures.end() && sig->second.is_functional()) {
        std::size_t vp = *sig->second.value_position;
        for (const auto& b : adds) {
          if (b.predicate != a.predicate) continue;
          bool same_key = true;
          for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i != vp && a.args[i] != b.args[i]) same_key = false;
          }
          if (same_key && b.args[vp] != a.args[vp]) removed = true;
        }
      }
      if (!removed || adds.count(a)) out.insert(a);
    }
    for (const auto& a : adds) out.insert(a);
    for (const auto& d : dels) {
      auto sig = d_.signatures.find(d.predicate);
      if (sig == d_.signatures.end() || !sig->second.is_functional()) continue;
      if (sig->second.values.size() != 2 || !pre.contains(d)) continue;
      std::size_t vp = *sig->second.value_position;
      bool keyed = false;
      for (const auto& b : adds) {
        if (b.predicate != d.predicate) continue;
        bool same_key = true;
        for (std::size_t i = 0; i < d.args.size(); ++i) {
          if (i != vp && d.args[i] != b.args[i]) same_key = false;
        }
        keyed = keyed || same_key;
      }
      if (keyed) continue;
      Atom other = d;
      other.args[vp].name = sig->second.values[0] == d.args[vp].name ? sig->second.values[1]
                                                                    : sig->second.values[0];
      out.insert(other);
    }
    return State(out);
  }

  const Domain& d_;
};

// Every well-sorted ground atom of the domain.
inline std::vector<Atom> atom_universe(const Domain& d) {
  std::vector<Atom> out;
  for (const auto& [name, sig] : d.signatures) {
    std::vector<std::vector<std::string>> doms;
    for (std::size_t i = 0; i < sig.arity(); ++i) {
      if (sig.value_position && *sig.value_position == i) {
        doms.push_back(sig.values);
      } else {
        doms.push_back(d.types.objects_of(sig.arg_sorts[i]));
      }
    }
    std::vector<Term> args;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == doms.size()) {
        out.emplace_back(name, args);
        return;
      }
      for (const auto& v : doms[i]) {
        args.push_back(Term::constant(v));
        rec(i + 1);
        args.pop_back();
      }
    };
    rec(0);
  }
  return out;
}

// A kitchen state respecting the world invariants: every movable sits
// somewhere, containment is transitively closed, one value per functional key.
inline State random_kitchen_state(const WorldModel& w, std::mt19937& rng) {
  const auto& t = w.domain.types;
  State s;
  auto locations = t.objects_of("Location");
  auto containers = t.objects_of("Container");
  std::map<std::string, std::string> place_of;
  for (const auto& c : containers) {
    place_of[c] = locations[rng() % locations.size()];
    s.insert(Atom("In", {c.c_str(), place_of[c].c_str()}));
  }
  for (const auto& sub : t.objects_of("Substance")) {
    std::vector<std::string> options = locations;
    options.insert(options.end(), containers.begin(), containers.end());
    const std::string& where = options[rng() % options.size()];
    s.insert(Atom("In", {sub.c_str(), where.c_str()}));
    if (place_of.count(where)) s.insert(Atom("In", {sub.c_str(), place_of[where].c_str()}));
  }
  for (const auto& [name, sig] : w.domain.signatures) {
    if (!sig.is_functional()) continue;
    for (const auto& o : t.objects_of(sig.arg_sorts[0])) {
      const std::string& v = sig.values[rng() % sig.values.size()];
      s.insert(Atom(name, {o.c_str(), v.c_str()}));
    }
  }
  return s;
}

}  // namespace itl::testing
