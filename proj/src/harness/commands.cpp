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

#include "bcert/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bcert/harness/csv.hpp"

namespace bcert::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) { return format_number(x); }

double opt_or_nan(const std::optional<double>& x) { return x ? *x : kNaN; }

std::string describe_worst_residual(const SecularTable& sec) {
  Index bi = 0, bj = 0;
  double worst = -1.0;
  for (Index i = 0; i < sec.residuals.rows(); ++i) {
    for (Index j = 0; j < sec.residuals.cols(); ++j) {
      if (sec.residuals(i, j) > worst) {
        worst = sec.residuals(i, j);
        bi = i;
        bj = j;
      }
    }
  }
  std::ostringstream os;
  os << "worst residual " << fmt(sec.max_residual);
  if (worst >= 0.0) {
    os << " at |" << sec.p_levels[static_cast<std::size_t>(bi)] << "><"
       << sec.q_levels[static_cast<std::size_t>(bj)] << "|";
  }
  return os.str();
}

}  // namespace

void require_secular(const ScenarioSetup& setup) {
  if (setup.scenario.allow_nonsecular) return;
  const SecularTable& sec = setup.secular;
  if (!sec.secular_ok) {
    throw SecularRefusal("model is not secular: " + describe_worst_residual(sec) +
                         " exceeds tolerance " + fmt(setup.scenario.secular_tol) +
                         "; set allow_nonsecular to proceed");
  }
  if (!sec.distinct_ok) {
    throw SecularRefusal("model is not secular: cross-boundary Bohr frequencies are not distinct (" +
                         describe_worst_residual(sec) + "); set allow_nonsecular to proceed");
  }
}

EvolutionRun run_evolution(const Scenario& s) {
  EvolutionRun run{prepare(s), {}, {}, {}, kInf, kInf};
  require_secular(run.setup);
  const ScenarioSetup& st = run.setup;
  run.trajectory = evolve(st.davies.model, st.rho0, st.times);
  annotate(run.trajectory, st.split, st.reg.sigma_eps);
  run.flags = check_conditions(run.trajectory, st.params, st.davies.rates, st.secular);
  for (std::size_t i = 0; i < st.times.size(); ++i) {
    const DynamicalBounds b =
        dynamical_bounds(st.davies.rates, st.secular, st.act0.c, st.act0.eps_q, st.times[i]);
    run.bounds.push_back(b);
    const ActivationReport& a = run.trajectory.points[i].activation;
    run.worst_c_slack = std::min(run.worst_c_slack, a.c - b.c_lower);
    run.worst_eps_slack = std::min(run.worst_eps_slack, b.eps_q_upper - a.eps_q);
  }
  return run;
}

CommandOutcome evolve_cmd(const Scenario& s, std::ostream& csv) {
  const EvolutionRun run = run_evolution(s);
  CsvWriter w(csv, {"t", "trace_dist", "rel_entropy", "c", "eps_Q", "A", "R2", "c_lower",
                    "epsQ_upper", "lc_ok", "cd_ok"});
  const Trajectory& tr = run.trajectory;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const TrajectoryPoint& p = tr.points[i];
    const ExtendedReal& d = p.rel_entropy;
    w.row({fmt(tr.times[i]), fmt(p.trace_dist), d.is_finite() ? fmt(d.value()) : "inf",
           fmt(p.activation.c), fmt(p.activation.eps_q), fmt(p.activation.a_func),
           fmt(p.activation.r2), fmt(run.bounds[i].c_lower), fmt(run.bounds[i].eps_q_upper),
           CsvWriter::cell(static_cast<bool>(run.flags.lc_ok[i])),
           CsvWriter::cell(static_cast<bool>(run.flags.cd_ok[i]))});
  }
  CommandOutcome out;
  const bool c_ok = run.worst_c_slack >= -kTrajectoryTol;
  const bool e_ok = run.worst_eps_slack >= -kTrajectoryTol;
  out.messages.push_back(std::string(c_ok ? "PASS" : "FAIL") +
                         " coherence lower bound, worst slack " + fmt(run.worst_c_slack));
  out.messages.push_back(std::string(e_ok ? "PASS" : "FAIL") +
                         " population upper bound, worst slack " + fmt(run.worst_eps_slack));
  out.exit_code = c_ok && e_ok ? 0 : 1;
  return out;
}

CertificationRun run_certification(const Scenario& s) {
  CertificationRun run;
  run.evolution = run_evolution(s);
  const ScenarioSetup& st = run.evolution.setup;
  const Trajectory& tr = run.evolution.trajectory;
  run.curve = certified_curve(st.params, st.times);
  run.worst_soundness_slack = kInf;
  run.worst_monotone_slack = kInf;
  run.worst_envelope_slack = kInf;

  const double branch_end = std::sqrt(st.params.a0 / std::exp(1.0));
  const double theta2 = st.params.theta * st.params.theta;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const TrajectoryPoint& p = tr.points[i];
    const double bound = run.curve.entropy_bound[i];
    const bool premise = p.rel_entropy.at_most(bound, 1e-12 * std::max(1.0, bound));
    run.premise_ok.push_back(premise);
    const bool in_regime = run.evolution.flags.lc_ok[i] && st.params.lc_static_ok() &&
                           p.activation.r2 >= theta2 && p.activation.a_func <= branch_end &&
                           run.curve.on_branch[i] && premise;
    run.regime.push_back(in_regime);
    if (in_regime) {
      ++run.regime_points;
      run.worst_soundness_slack =
          std::min(run.worst_soundness_slack, run.curve.a_cert[i] - p.activation.a_func);
    }
    if (run.curve.on_branch[i]) {
      if (i + 1 < tr.times.size() && run.curve.on_branch[i + 1]) {
        run.worst_monotone_slack =
            std::min(run.worst_monotone_slack, run.curve.a_cert[i] - run.curve.a_cert[i + 1]);
      }
      if (run.curve.t0 && tr.times[i] >= *run.curve.t0 && tr.times[i] > 0.0) {
        run.worst_envelope_slack =
            std::min(run.worst_envelope_slack, run.curve.envelope[i] - run.curve.a_cert[i]);
      }
    }
  }
  return run;
}

CommandOutcome certify_cmd(const Scenario& s, std::ostream& csv) {
  const CertificationRun run = run_certification(s);
  const CertCurve& cc = run.curve;
  const double t_star = opt_or_nan(run.evolution.setup.window.t_star);
  CsvWriter w(csv, {"t", "entropy_bound", "a_cert", "envelope", "on_branch", "T_star", "t0",
                    "c_prime"});
  for (std::size_t i = 0; i < cc.times.size(); ++i) {
    w.row({fmt(cc.times[i]), fmt(cc.entropy_bound[i]), fmt(cc.a_cert[i]), fmt(cc.envelope[i]),
           CsvWriter::cell(static_cast<bool>(cc.on_branch[i])), fmt(t_star), fmt(opt_or_nan(cc.t0)),
           fmt(opt_or_nan(cc.c_prime))});
  }

  CommandOutcome out;
  auto report = [&](bool ok, const std::string& what) {
    out.messages.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
    if (!ok) out.exit_code = 1;
  };
  if (!cc.diagnostic.empty()) out.messages.push_back("note: " + cc.diagnostic);
  if (run.evolution.setup.window.empty()) {
    out.messages.push_back("note: no dominance window (" +
                           run.evolution.setup.window.failed_hypothesis + ")");
  }
  const auto premise_fail = std::count(run.premise_ok.begin(), run.premise_ok.end(), false);
  report(premise_fail == 0, "entropy decay premise at alpha = " + fmt(s.alpha) + " (" +
                                std::to_string(premise_fail) + " grid times violate it)");
  report(run.worst_monotone_slack >= -1e-12,
         "a_cert nonincreasing on-branch, worst slack " + fmt(run.worst_monotone_slack));
  report(run.worst_envelope_slack >= -1e-12,
         "a_cert below envelope for t >= t0, worst slack " + fmt(run.worst_envelope_slack));
  report(run.worst_soundness_slack >= -kSoundnessTol,
         "measured activation below a_cert at " + std::to_string(run.regime_points) +
             " regime times, worst slack " + fmt(run.worst_soundness_slack));
  return out;
}

WindowRun run_window(const Scenario& s) {
  WindowRun run;
  run.setup = prepare(s);
  require_secular(run.setup);
  const ScenarioSetup& st = run.setup;
  const RateParams& rates = st.davies.rates;
  run.lt_inputs = low_temperature_inputs(st.davies.model, rates);
  run.low_temperature = low_temperature_window(st.scenario.beta, run.lt_inputs.delta_e,
                                               run.lt_inputs.eta_up, rates.eta,
                                               st.secular.gamma_max, st.params.a_theta, st.act0.c,
                                               st.act0.eps_q);

  const std::vector<double>& base = st.times;
  run.grid_step = base.size() > 1 ? base[1] - base[0] : 0.0;
  double horizon = base.empty() ? 0.0 : base.back();
  if (st.window.t_star) horizon = std::max(horizon, 2.0 * *st.window.t_star);
  if (run.grid_step > 0.0) {
    const auto n = static_cast<std::size_t>(std::ceil(horizon / run.grid_step));
    for (std::size_t i = 0; i <= n; ++i) run.grid.push_back(static_cast<double>(i) * run.grid_step);
  } else {
    run.grid.push_back(0.0);
  }

  run.cd_holds_before_t_star = st.window.t_star.has_value();
  for (double t : run.grid) {
    const auto [lhs, rhs] = cd_sides(rates, st.secular.gamma_max, st.params.a_theta, st.act0.c,
                                     st.act0.eps_q, t);
    const bool ok = rhs > 0.0 && lhs <= rhs;
    if (st.window.t_star && t <= *st.window.t_star && !ok) run.cd_holds_before_t_star = false;
    if (!ok) break;
    run.cd_boundary = t;
  }
  if (st.window.t_star && run.cd_boundary) {
    run.agrees_within_step = std::abs(*run.cd_boundary - *st.window.t_star) <= run.grid_step;
  }
  return run;
}

CommandOutcome window_cmd(const Scenario& s, std::ostream& out) {
  const WindowRun run = run_window(s);
  const ScenarioSetup& st = run.setup;
  const RateParams& rates = st.davies.rates;
  out << "scenario: " << st.scenario.name << '\n';
  out << "k: " << fmt(rates.k) << '\n';
  out << "mu: " << fmt(rates.mu) << '\n';
  out << "eta: " << fmt(rates.eta) << '\n';
  out << "eps_bar: " << fmt(rates.eps_bar) << '\n';
  out << "gamma_max: " << fmt(st.secular.gamma_max) << '\n';
  out << "A_theta: " << fmt(st.params.a_theta) << '\n';
  out << "c0: " << fmt(st.act0.c) << '\n';
  out << "eps0: " << fmt(st.act0.eps_q) << '\n';
  if (st.window.t_star) {
    out << "T_star: " << fmt(*st.window.t_star) << '\n';
  } else {
    out << "T_star: none (" << st.window.failed_hypothesis << ")\n";
  }
  if (run.low_temperature.t_star_lower) {
    out << "T_star_lower: " << fmt(*run.low_temperature.t_star_lower) << '\n';
  } else {
    out << "T_star_lower: none (" << run.low_temperature.failed_hypothesis << ")\n";
  }
  out << "eps_bar_upper: " << fmt(run.low_temperature.eps_bar_upper) << '\n';
  out << "grid_step: " << fmt(run.grid_step) << '\n';
  out << "cd_grid_boundary: " << (run.cd_boundary ? fmt(*run.cd_boundary) : "none") << '\n';

  CommandOutcome res;
  if (st.window.empty()) {
    res.exit_code = 1;
    res.messages.push_back("FAIL dominance window is empty: " + st.window.failed_hypothesis);
    return res;
  }
  res.messages.push_back(std::string(run.cd_holds_before_t_star ? "PASS" : "FAIL") +
                         " (CD) holds at every grid time up to T*");
  res.messages.push_back(std::string("note: grid boundary ") +
                         (run.agrees_within_step ? "agrees" : "does not agree") +
                         " with T* within one grid step");
  if (run.low_temperature.t_star_lower) {
    const bool lt_ok = *run.low_temperature.t_star_lower <= *st.window.t_star + 1e-9;
    res.messages.push_back(std::string(lt_ok ? "PASS" : "FAIL") +
                           " low-temperature lower bound does not exceed T*");
    if (!lt_ok) res.exit_code = 1;
  }
  if (!run.cd_holds_before_t_star) res.exit_code = 1;
  return res;
}

FrRun run_fr_compare(const Scenario& s) {
  FrRun run;
  run.evolution = run_evolution(s);
  const ScenarioSetup& st = run.evolution.setup;
  const Trajectory& tr = run.evolution.trajectory;
  const double a0 = st.local.a0;
  run.worst_dominance_slack = kInf;
  run.worst_ratio_slack = kInf;
  run.worst_fidelity_slack = kInf;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const DensityMatrix& rho = tr.states[i];
    const BlockDecomposition b = block_decompose(rho.hermitian(), st.split);
    if (min_eigenvalue(HermitianMatrix(b.a)) < a0) continue;
    if (!(tr.points[i].activation.c > 0.0)) continue;
    FrRow row{tr.times[i], fr_compare(rho, st.reg.sigma_eps, st.split, a0)};
    const FrReport& r = row.report;
    run.worst_fidelity_slack = std::min(run.worst_fidelity_slack, r.c / a0 - r.fidelity_defect);
    if (r.in_class) {
      ++run.in_class_rows;
      run.worst_dominance_slack = std::min(run.worst_dominance_slack, r.ours - r.fr_remainder);
      const double ratio = r.ratio.value_or(kInf);
      run.worst_ratio_slack = std::min(run.worst_ratio_slack, ratio - r.ratio_floor);
    }
    run.rows.push_back(row);
  }
  return run;
}

CommandOutcome fr_compare_cmd(const Scenario& s, std::ostream& out) {
  const FrRun run = run_fr_compare(s);
  CsvWriter w(out, {"t", "eps_Q", "c", "ours", "fr_remainder", "ratio", "ratio_floor", "in_class",
                    "fidelity"});
  for (const FrRow& row : run.rows) {
    const FrReport& r = row.report;
    w.row({fmt(row.t), fmt(r.eps_q), fmt(r.c), fmt(r.ours), fmt(r.fr_remainder),
           fmt(r.ratio.value_or(kInf)), fmt(r.ratio_floor), CsvWriter::cell(r.in_class),
           fmt(r.fidelity)});
  }
  CommandOutcome res;
  auto report = [&](bool ok, const std::string& what) {
    res.messages.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
    if (!ok) res.exit_code = 1;
  };
  res.messages.push_back("note: " + std::to_string(run.rows.size()) + " rows satisfy the support condition, " +
                         std::to_string(run.in_class_rows) + " lie in the near-boundary class");
  report(run.worst_fidelity_slack >= -1e-10,
         "F(rho, pinch rho) >= 1 - c/a0, worst slack " + fmt(run.worst_fidelity_slack));
  report(run.worst_dominance_slack >= -1e-9,
         "coherence bound dominates the recovery remainder, worst slack " +
             fmt(run.worst_dominance_slack));
  report(run.worst_ratio_slack >= -1e-9,
         "ratio above a0 log(a0/eps_Q)/4, worst slack " + fmt(run.worst_ratio_slack));
  return res;
}

}  // namespace bcert::harness
