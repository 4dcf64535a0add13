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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "itl/error.hpp"
#include "itl/knowledge_base.hpp"
#include "itl/planner.hpp"
#include "itl/server.hpp"
#include "itl/service.hpp"

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw itl::Error("IoError", "cannot write " + path);
  out << text;
}

int run(const std::string& script_path, const std::string& transcript_out, const std::string& kb_out,
        const std::string& trace_out, const std::string& episode_out) {
  auto script = itl::load_script(script_path);
  auto run = itl::run_script(script);
  if (!transcript_out.empty()) write_file(transcript_out, itl::transcript_text(run.session));
  if (!kb_out.empty()) write_file(kb_out, itl::save_kb(run.session.kb));
  if (!trace_out.empty()) write_file(trace_out, itl::learner_trace_text(run.session));
  if (!episode_out.empty()) {
    std::string log;
    for (const auto& e : run.session.memory) log += itl::save_episode_log(e);
    write_file(episode_out, log);
  }
  std::cout << run.report(script.name).dump(2) << "\n";
  return run.ok() ? 0 : 1;
}

int plan(const std::string& kb_path, const std::string& domain_path, const std::vector<std::string>& goal) {
  auto kb = itl::load_kb_file(kb_path);
  auto world = itl::load_domain_file(domain_path);
  std::vector<itl::Literal> literals;
  for (const auto& g : goal) literals.push_back(itl::parse_literal(g));
  std::optional<itl::Plan> p;
  try {
    p = itl::plan({kb, itl::observe(kb, world.percept()), literals});
  } catch (const itl::UnknownPredicate&) {
  }
  if (!p) {
    std::cout << "no plan within bounds\n";
    return 2;
  }
  for (const auto& a : p->steps) std::cout << a.to_string() << "\n";
  return 0;
}

int replay(const std::string& script_path, const std::string& transcript_path) {
  auto r = itl::replay_transcript(itl::load_script(script_path), itl::read_file(transcript_path));
  if (r.identical) {
    std::cout << "identical\n";
    return 0;
  }
  std::cout << "differs at line " << *r.first_difference << "\n"
            << "expected: " << r.expected_line << "\n"
            << "actual:   " << r.actual_line << "\n";
  return 1;
}

int eval(const std::vector<std::string>& scripts) {
  std::vector<itl::Demonstration> demos;
  std::optional<itl::Lexicon> lexicon;
  for (const auto& path : scripts) {
    auto s = itl::load_script(path);
    if (!lexicon) lexicon = itl::load_lexicon_file(s.lexicon_path);
    demos.push_back(itl::demonstration_of(s));
  }
  auto rows = itl::evaluate_mutations(*lexicon, demos);
  std::cout << itl::format_mutation_table(rows);
  std::size_t detected = 0;
  for (const auto& r : rows) detected += r.detected;
  std::cout << "detected " << detected << " of " << rows.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive task learning robot"};
  app.require_subcommand(1);

  std::string script, transcript_out, kb_out, trace_out, episode_out;
  auto* run_cmd = app.add_subcommand("run", "Run a scripted session and print a JSON report");
  run_cmd->add_option("--script", script, "Session script (YAML)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--transcript-out", transcript_out, "Write the transcript here");
  run_cmd->add_option("--kb-out", kb_out, "Write the final knowledge base here");
  run_cmd->add_option("--trace-out", trace_out, "Write the learner trace here");
  run_cmd->add_option("--episode-out", episode_out, "Write the episode logs here");

  std::string kb_path, domain_path;
  std::vector<std::string> goal;
  auto* plan_cmd = app.add_subcommand("plan", "Plan for a goal with a knowledge base");
  plan_cmd->add_option("--kb", kb_path, "Knowledge base (JSON)")->required()->check(CLI::ExistingFile);
  plan_cmd->add_option("--domain", domain_path, "Domain with the initial state (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  plan_cmd->add_option("--goal", goal, "Goal literal, repeatable, e.g. Temp(Water,High)")->required();

  std::string transcript;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a transcript and compare it line by line");
  replay_cmd->add_option("--script", script, "Session script (YAML)")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--transcript", transcript, "Transcript to replay")->required()->check(CLI::ExistingFile);

  std::vector<std::string> mutation_scripts;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate abnormality detection over effect-rule deletions");
  eval_cmd->add_option("--mutations", mutation_scripts, "Scripts whose demonstrations are replayed")
      ->required()
      ->check(CLI::ExistingFile);

  int port = 0;
  std::string bind = "127.0.0.1";
  bool omniscient = false;
  auto* serve_cmd = app.add_subcommand("serve", "Serve sessions over TCP");
  serve_cmd->add_option("--port", port, "Port, defaults to ITL_PORT or 7311");
  serve_cmd->add_option("--bind", bind, "Address to bind");
  serve_cmd->add_option("--domain", domain_path, "Domain for new sessions")->check(CLI::ExistingFile);
  serve_cmd->add_option("--kb", kb_path, "Knowledge base for new sessions")->check(CLI::ExistingFile);
  std::string lexicon_path;
  serve_cmd->add_option("--lexicon", lexicon_path, "Lexicon for new sessions")->check(CLI::ExistingFile);
  serve_cmd->add_flag("--omniscient", omniscient, "Include raw world atoms in state snapshots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(script, transcript_out, kb_out, trace_out, episode_out);
    if (*plan_cmd) return plan(kb_path, domain_path, goal);
    if (*replay_cmd) return replay(script, transcript);
    if (*eval_cmd) return eval(mutation_scripts);
    if (*serve_cmd) {
      itl::ServerConfig cfg;
      if (port == 0) {
        const char* env = std::getenv("ITL_PORT");
        port = env ? std::stoi(env) : 7311;
      }
      cfg.port = static_cast<std::uint16_t>(port);
      cfg.bind = bind;
      const std::string data = ITL_DATA_DIR;
      cfg.store.domain_path = domain_path.empty() ? data + "/kitchen.json" : domain_path;
      cfg.store.kb_path = kb_path.empty() ? data + "/kb_incomplete.json" : kb_path;
      cfg.store.lexicon_path = lexicon_path.empty() ? data + "/lexicon.json" : lexicon_path;
      cfg.store.omniscient = omniscient;
      return itl::serve(cfg);
    }
  } catch (const itl::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
