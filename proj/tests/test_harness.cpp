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


#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "bcert/harness/commands.hpp"
#include "bcert/harness/csv.hpp"
#include "bcert/harness/json_io.hpp"
#include "bcert/harness/samplers.hpp"
#include "bcert/harness/scenario.hpp"
#include "bcert/harness/suites.hpp"

using namespace bcert;
using namespace bcert::harness;

namespace {

const std::string kDir = BCERT_SCENARIO_DIR;

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string c; std::getline(is, c, ',');) out.push_back(c);
  return out;
}

double num(const std::string& s) { return std::stod(s); }

Json minimal_scenario() {
  return Json::parse(R"({
    "energies": [0.0, 1.0],
    "couplings": [[[0, 1], [1, 0]]],
    "beta": 2.0,
    "support_levels": [0],
    "initial_state": {"kind": "pure_coherent", "eps0": 0.1}
  })");
}

}  // namespace

TEST_CASE("format_number round-trips with 17 significant digits") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const std::string s = format_number(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
    CHECK(s.find(',') == std::string::npos);
  }
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("CsvWriter enforces the column count") {
  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  w.row({CsvWriter::cell(1.5), CsvWriter::cell(true)});
  CHECK(os.str() == "a,b\n1.5,1\n");
  CHECK_THROWS_AS(w.row({"x"}), ValidationError);
}

TEST_CASE("complex matrices round-trip through JSON") {
  Rng rng(71);
  const Matrix m = random_ginibre(3, 2, rng);
  const Matrix back = matrix_from_json(Json::parse(matrix_to_json(m).dump()), "m");
  CHECK((back - m).norm() == 0.0);
  // Real entries may be written as plain numbers.
  const Matrix real = matrix_from_json(Json::parse("[[1, 2], [3, 4]]"), "r");
  CHECK(real(1, 0) == Complex(3.0));
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2], [3]]"), "ragged"), ValidationError);
  CHECK_THROWS_AS(complex_from_json(Json::parse("[1, 2, 3]"), "z"), ValidationError);
}

TEST_CASE("scenario parsing validates fields") {
  CHECK_NOTHROW(parse_scenario(minimal_scenario()));
  Json j = minimal_scenario();
  j["support_levels"] = Json::array();
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j["support_levels"] = {0, 1};
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j["support_levels"] = {2};
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j = minimal_scenario();
  j["couplings"] = Json::parse("[[[0, 1, 0], [1, 0, 0], [0, 0, 0]]]");
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j = minimal_scenario();
  j.erase("beta");
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j = minimal_scenario();
  j["rate_model"] = "lorentzian";
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j = minimal_scenario();
  j["dim"] = 3;
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  j = minimal_scenario();
  j["epsilon"] = "auto";
  CHECK_THROWS_AS(parse_scenario(j), ValidationError);
  CHECK_THROWS_AS(load_scenario(kDir + "/does_not_exist.json"), Error);
}

TEST_CASE("scenario JSON round trip preserves the setup") {
  for (const char* name : {"qubit_golden.json", "two_sector.json", "classical.json"}) {
    const Scenario s = load_scenario(kDir + "/" + name);
    const Scenario back = parse_scenario(Json::parse(scenario_to_json(s).dump()));
    const ScenarioSetup a = prepare(s), b = prepare(back);
    CHECK((a.rho0.matrix() - b.rho0.matrix()).norm() == 0.0);
    CHECK(a.times == b.times);
    CHECK(a.secular.gamma_max == b.secular.gamma_max);
  }
}

TEST_CASE("time grid helpers") {
  const std::vector<double> g = uniform_grid(2.0, 5);
  CHECK(g == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK_THROWS_AS(uniform_grid(1.0, 1), ValidationError);
  CHECK_THROWS_AS(uniform_grid(0.0, 10), ValidationError);
  RateParams r;
  r.k = 2.0;
  WindowResult w;
  CHECK(default_horizon(r, w) == doctest::Approx(5.0));
  w.t_star = 1.5;
  CHECK(default_horizon(r, w) == doctest::Approx(1.5));
  const ScenarioSetup st = prepare(parse_scenario(minimal_scenario()));
  CHECK(st.times.size() == 200);
}

TEST_CASE("regime sampler predicates, determinism and errors") {
  Rng rng(72);
  const SupportSplit split = random_split(5, 2, rng);
  const double a0 = 0.3;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const DensityMatrix rho = sample_regime_state(split, a0, 0.1, seed);
    const ActivationReport act = activation(rho, split);
    CHECK(min_eigenvalue(HermitianMatrix(block_decompose(rho, split).a)) >= a0);
    CHECK(act.eps_q <= 0.1);
    CHECK(act.c > 0.0);
    CHECK((sample_regime_state(split, a0, 0.1, seed).matrix() - rho.matrix()).norm() == 0.0);
  }
  const DensityMatrix nb = sample_regime_state(split, a0, near_boundary_threshold(a0), 3);
  CHECK(activation(nb, split).eps_q <= near_boundary_threshold(a0));
  CHECK_THROWS_AS(sample_regime_state(split, a0, 0.2, 1), ValidationError);
  CHECK_THROWS_AS(sample_regime_state(split, 0.45, 0.1, 1), ValidationError);
}

TEST_CASE("evolve CSV: header, first row and byte-identical reruns") {
  const Scenario s = load_scenario(kDir + "/qubit_golden.json");
  std::ostringstream a, b;
  const CommandOutcome oa = evolve_cmd(s, a);
  evolve_cmd(s, b);
  CHECK(oa.exit_code == 0);
  CHECK(a.str() == b.str());
  const auto ls = lines(a.str());
  REQUIRE(ls.size() == 201);
  CHECK(ls[0] == "t,trace_dist,rel_entropy,c,eps_Q,A,R2,c_lower,epsQ_upper,lc_ok,cd_ok");
  const auto row0 = cells(ls[1]);
  REQUIRE(row0.size() == 11);
  const ActivationReport act = activation(prepare(s).rho0, prepare(s).split);
  CHECK(num(row0[0]) == 0.0);
  CHECK(num(row0[3]) == doctest::Approx(act.c).epsilon(1e-14));
  CHECK(num(row0[4]) == doctest::Approx(act.eps_q).epsilon(1e-14));
  CHECK(num(row0[5]) == doctest::Approx(act.a_func).epsilon(1e-14));
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto r = cells(ls[i]);
    CHECK(num(r[3]) >= num(r[7]) - kTrajectoryTol);
    CHECK(num(r[4]) <= num(r[8]) + kTrajectoryTol);
  }
}

TEST_CASE("certify CSV agrees with the evolution wherever the regime holds") {
  const Scenario s = load_scenario(kDir + "/qubit_golden.json");
  std::ostringstream out;
  CHECK(certify_cmd(s, out).exit_code == 0);
  const auto ls = lines(out.str());
  CHECK(ls[0] == "t,entropy_bound,a_cert,envelope,on_branch,T_star,t0,c_prime");
  const CertificationRun run = run_certification(s);
  const double e8 = std::exp(-8.0);
  const double t_star = std::log((3.0 * 0.0099 - 0.01) * (1.0 + e8) / e8);
  CHECK(num(cells(ls[1])[5]) == doctest::Approx(t_star).epsilon(1e-12));
  std::size_t checked = 0;
  double prev = INFINITY;
  for (std::size_t i = 0; i < run.curve.times.size(); ++i) {
    const auto r = cells(ls[i + 1]);
    if (r[4] == "1") {
      CHECK(num(r[2]) <= prev);
      prev = num(r[2]);
    }
    if (!run.regime[i]) continue;
    ++checked;
    CHECK(run.evolution.trajectory.points[i].activation.a_func <= num(r[2]) + kSoundnessTol);
  }
  CHECK(checked == run.regime_points);
  CHECK(checked > 0);
}

TEST_CASE("non-secular models are refused with the worst residual named") {
  const Scenario s = load_scenario(kDir + "/degenerate_gap.json");
  std::ostringstream out;
  try {
    evolve_cmd(s, out);
    FAIL("expected a refusal");
  } catch (const SecularRefusal& e) {
    const std::string msg = e.what();
    CHECK(msg.find("not secular") != std::string::npos);
    CHECK(msg.find("allow_nonsecular") != std::string::npos);
  }
  CHECK(out.str().empty());
  Scenario forced = s;
  forced.allow_nonsecular = true;
  CHECK_NOTHROW(run_evolution(forced));
}

TEST_CASE("window and fr-compare commands") {
  const WindowRun w = run_window(load_scenario(kDir + "/qubit_golden.json"));
  CHECK(w.cd_holds_before_t_star);
  CHECK(w.agrees_within_step);
  std::ostringstream wo;
  CHECK(window_cmd(load_scenario(kDir + "/qubit_golden.json"), wo).exit_code == 0);
  CHECK(wo.str().find("T_star") != std::string::npos);
  std::ostringstream empty;
  CHECK(window_cmd(load_scenario(kDir + "/two_sector.json"), empty).exit_code == 1);

  const FrRun fr = run_fr_compare(load_scenario(kDir + "/two_sector.json"));
  CHECK(fr.worst_fidelity_slack >= -1e-10);
  std::ostringstream fo;
  CHECK(fr_compare_cmd(load_scenario(kDir + "/two_sector.json"), fo).exit_code == 0);
  CHECK(lines(fo.str())[0] == "t,eps_Q,c,ours,fr_remainder,ratio,ratio_floor,in_class,fidelity");
}

TEST_CASE("suites are deterministic and name their checks") {
  SuiteOptions one, four;
  one.threads = 1;
  four.threads = 4;
  const VerificationReport a = run_suite("entropy", 30, 7, one);
  const VerificationReport b = run_suite("entropy", 30, 7, four);
  CHECK(a.to_text() == b.to_text());
  CHECK(a.pass());
  CHECK(a.to_text().find("pythagorean_identity") != std::string::npos);
  CHECK_THROWS_AS(run_suite("nope", 1, 1), ValidationError);
  CHECK(suite_names().back() == "all");
}

TEST_CASE("injected bug is caught and dumped as a replayable scenario") {
  const auto dir = std::filesystem::temp_directory_path() / "bcert_dump_test";
  std::filesystem::remove_all(dir);
  SuiteOptions opt;
  opt.inject_bug = true;
  opt.dump_dir = dir.string();
  const VerificationReport rep = run_suite("davies", 20, 3, opt);
  CHECK_FALSE(rep.pass());
  const SuiteReport& s = rep.suites.front();
  bool named = false;
  std::uint64_t failing = 0;
  for (const CheckSummary& c : s.checks) {
    if (c.name == "population_upper_bound") {
      named = !c.pass();
      if (!c.failing_seeds.empty()) failing = c.failing_seeds.front();
    } else {
      CHECK(c.pass());
    }
  }
  CHECK(named);
  REQUIRE(failing != 0);
  const auto file = dir / ("davies-population_upper_bound-" + std::to_string(failing) + ".json");
  REQUIRE(std::filesystem::exists(file));
  const Json dumped = read_json_file(file.string());
  CHECK(dumped.contains("failure"));
  CHECK_NOTHROW(parse_scenario(dumped));
  // Replaying the seed reproduces the failure alone.
  SuiteOptions replay;
  replay.inject_bug = true;
  replay.replay_seed = failing;
  const VerificationReport again = run_suite("davies", 20, 3, replay);
  CHECK(again.suites.front().trials == 1);
  CHECK_FALSE(again.pass());
  std::filesystem::remove_all(dir);
}
