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

// Scenario-driven commands. Each command has a `run_*` function returning
// structured results (used by tests) and a `*_cmd` wrapper that writes CSV or
// text and returns an exit code: 0 iff every check the command performs passes.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "bcert/certification.hpp"
#include "bcert/harness/scenario.hpp"
#include "bcert/separation.hpp"

namespace bcert::harness {

/// Raised when a model fails the secular checks and the scenario does not
/// set allow_nonsecular.
class SecularRefusal : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct CommandOutcome {
  int exit_code = 0;
  std::vector<std::string> messages;  // one line each, for stderr
};

/// Slack allowed on the trajectory bounds for coherence and population.
inline constexpr double kTrajectoryTol = 1e-8;
/// Slack allowed when comparing measured activation with a_cert.
inline constexpr double kSoundnessTol = 1e-9;

void require_secular(const ScenarioSetup& setup);

struct EvolutionRun {
  ScenarioSetup setup;
  Trajectory trajectory;  // annotated against sigma_eps
  ConditionFlags flags;
  std::vector<DynamicalBounds> bounds;
  double worst_c_slack = 0.0;    // min_t c(rho_t) - c_lower(t)
  double worst_eps_slack = 0.0;  // min_t epsQ_upper(t) - eps_Q(rho_t)
};

EvolutionRun run_evolution(const Scenario& s);
CommandOutcome evolve_cmd(const Scenario& s, std::ostream& csv);

struct CertificationRun {
  EvolutionRun evolution;
  CertCurve curve;
  std::vector<bool> premise_ok;  // D(rho_t || sigma_eps) <= D0 e^{-2 alpha t}
  std::vector<bool> regime;      // lc_ok, lc_static, R >= theta, A <= sqrt(a0/e), on-branch
  std::size_t regime_points = 0;
  double worst_soundness_slack = 0.0;  // min over regime times of a_cert - A
  double worst_monotone_slack = 0.0;   // min over consecutive on-branch a_cert(i) - a_cert(i+1)
  double worst_envelope_slack = 0.0;   // min over on-branch t >= t0 of envelope - a_cert
};

CertificationRun run_certification(const Scenario& s);
CommandOutcome certify_cmd(const Scenario& s, std::ostream& csv);

struct WindowRun {
  ScenarioSetup setup;
  LowTemperatureInputs lt_inputs;
  LowTemperatureWindow low_temperature;
  std::vector<double> grid;
  double grid_step = 0.0;
  /// Largest grid time up to which (CD) holds at every grid point.
  std::optional<double> cd_boundary;
  bool cd_holds_before_t_star = false;
  bool agrees_within_step = false;
};

WindowRun run_window(const Scenario& s);
CommandOutcome window_cmd(const Scenario& s, std::ostream& out);

struct FrRow {
  double t = 0.0;
  FrReport report;
};

struct FrRun {
  EvolutionRun evolution;
  std::vector<FrRow> rows;  // times where lambda_min(P rho_t P) >= a0 and c > 0
  std::size_t in_class_rows = 0;
  double worst_dominance_slack = 0.0;  // ours - fr_remainder over in-class rows
  double worst_ratio_slack = 0.0;      // ratio - ratio_floor over in-class rows
  double worst_fidelity_slack = 0.0;   // F(rho, pinch rho) - (1 - c / a0) over all rows
};

FrRun run_fr_compare(const Scenario& s);
CommandOutcome fr_compare_cmd(const Scenario& s, std::ostream& out);

}  // namespace bcert::harness
