// Copyright 2026 The bcert Authors
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

// Command line front end. Exit codes: 0 all checks pass, 1 a check failed,
// 2 invalid input or usage, 3 model refused as non-secular.

#include <fstream>
#include <iostream>
#include <locale>
#include <sstream>

#include "CLI11.hpp"

#include "bcert/harness/commands.hpp"
#include "bcert/harness/scenario.hpp"
#include "bcert/harness/suites.hpp"

namespace {

using namespace bcert::harness;

constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw bcert::ValidationError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw bcert::ValidationError("failed writing " + path);
}

int finish(const CommandOutcome& out) {
  for (const std::string& m : out.messages) std::cerr << m << '\n';
  return out.exit_code;
}

Scenario load_with_override(const std::string& path, bool allow_nonsecular) {
  Scenario s = load_scenario(path);
  if (allow_nonsecular) s.allow_nonsecular = true;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  CLI::App app{"Boundary certification toolkit"};
  app.require_subcommand(1);

  std::string suite = "all", scenario_path, out_path, dump_dir;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::uint64_t replay_seed = 0;
  unsigned threads = 0;
  bool inject_bug = false, allow_nonsecular = false;
  std::string json_path;

  auto* verify = app.add_subcommand("verify", "Run randomized verification suites");
  verify->add_option("--suite", suite, "entropy, activation, davies, certification, separation or all")
      ->capture_default_str();
  verify->add_option("--trials", trials, "Trials per suite")->capture_default_str();
  verify->add_option("--seed", seed, "Master seed")->capture_default_str();
  verify->add_option("--threads", threads, "Worker threads (0 = all cores)");
  verify->add_option("--dump-dir", dump_dir, "Write a JSON reproducer for every failure here");
  auto* replay = verify->add_option("--replay-seed", replay_seed, "Run a single trial by its seed");
  verify->add_option("--json", json_path, "Also write the report as JSON");
  verify->add_flag("--inject-bug", inject_bug, "Self-test: corrupt the population bound");

  auto* evolve = app.add_subcommand("evolve", "Evolve a scenario and write the trajectory CSV");
  evolve->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  evolve->add_option("--out", out_path, "Destination CSV file")->required();
  evolve->add_flag("--allow-nonsecular", allow_nonsecular, "Proceed even if the secular checks fail");

  auto* certify = app.add_subcommand("certify", "Write the certified activation curve CSV");
  certify->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  certify->add_option("--out", out_path, "Destination CSV file")->required();
  certify->add_flag("--allow-nonsecular", allow_nonsecular, "Proceed even if the secular checks fail");

  auto* window = app.add_subcommand("window", "Report the coherence-dominance window");
  window->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  window->add_flag("--allow-nonsecular", allow_nonsecular, "Proceed even if the secular checks fail");

  auto* fr = app.add_subcommand("fr-compare", "Compare the coherence bound with the recovery remainder");
  fr->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  fr->add_flag("--allow-nonsecular", allow_nonsecular, "Proceed even if the secular checks fail");

  auto* report = app.add_subcommand("report", "Run every suite and write a JSON report");
  report->add_option("--out", out_path, "Destination JSON file")->required();
  report->add_option("--trials", trials, "Trials per suite")->capture_default_str();
  report->add_option("--seed", seed, "Base seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (verify->parsed() || report->parsed()) {
      SuiteOptions opt;
      opt.threads = threads;
      opt.inject_bug = inject_bug;
      if (!dump_dir.empty()) opt.dump_dir = dump_dir;
      if (replay->count() > 0) opt.replay_seed = replay_seed;
      const VerificationReport rep = run_suite(report->parsed() ? "all" : suite, trials, seed, opt);
      if (report->parsed()) {
        write_json_file(out_path, rep.to_json());
      } else {
        std::cout << rep.to_text();
        if (!json_path.empty()) write_json_file(json_path, rep.to_json());
      }
      return rep.pass() ? 0 : 1;
    }
    const Scenario s = load_with_override(scenario_path, allow_nonsecular);
    if (evolve->parsed() || certify->parsed()) {
      std::ostringstream csv;
      csv.imbue(std::locale::classic());
      const CommandOutcome out = evolve->parsed() ? evolve_cmd(s, csv) : certify_cmd(s, csv);
      write_text_file(out_path, csv.str());
      return finish(out);
    }
    if (window->parsed()) return finish(window_cmd(s, std::cout));
    if (fr->parsed()) {
      std::ostringstream csv;
      csv.imbue(std::locale::classic());
      const CommandOutcome out = fr_compare_cmd(s, csv);
      std::cout << csv.str();
      return finish(out);
    }
  } catch (const SecularRefusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const bcert::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
