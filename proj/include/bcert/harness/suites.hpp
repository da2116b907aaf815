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

// Randomized verification suites. Every check is an inequality written as
// slack = lhs - rhs and passes when slack >= -tolerance. Trials run in
// parallel on per-trial seeds derive_seed(seed, suite, trial), and results
// are merged in trial order, so a report depends only on (suite, trials, seed).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcert/harness/json_io.hpp"

namespace bcert::harness {

struct CheckSummary {
  std::string name;
  std::string description;
  double tolerance = 0.0;
  std::size_t evaluated = 0;  // number of trials in which the check ran
  std::size_t passed = 0;
  double worst_slack = 0.0;   // +inf when never evaluated
  std::vector<std::uint64_t> failing_seeds;

  bool pass() const { return passed == evaluated; }
};

struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<CheckSummary> checks;
  std::vector<std::string> errors;  // "seed S: message" for trials that threw

  bool pass() const;
};

struct VerificationReport {
  std::vector<SuiteReport> suites;

  bool pass() const;
  /// Fixed-format text; byte-identical for identical inputs.
  std::string to_text() const;
  Json to_json() const;
};

struct SuiteOptions {
  /// Directory receiving one JSON reproducer per failing (check, trial).
  std::optional<std::string> dump_dir;
  /// Run only the trial with this per-trial seed (as listed in a report).
  std::optional<std::uint64_t> replay_seed;
  /// Harness self-test: flips the sign of the eps_bar term in the population bound.
  bool inject_bug = false;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 0;
};

/// Suite names accepted by run_suite, "all" last.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". ValidationError on an unknown name.
VerificationReport run_suite(const std::string& name, std::size_t trials, std::uint64_t seed,
                             const SuiteOptions& options = {});

}  // namespace bcert::harness
