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


// Python bindings for the core numerics and the scenario commands.

#include <sstream>
#include <string>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcert/activation.hpp"
#include "bcert/certification.hpp"
#include "bcert/entropy.hpp"
#include "bcert/harness/commands.hpp"
#include "bcert/harness/scenario.hpp"
#include "bcert/harness/suites.hpp"
#include "bcert/separation.hpp"

namespace py = pybind11;
using namespace bcert;

namespace {

double as_float(const ExtendedReal& x) { return x.value_or(std::numeric_limits<double>::infinity()); }

SupportSplit split_from_projector(const Matrix& p) {
  const Index d = p.rows();
  return split_from_bases(projector_range(p), projector_range(Matrix(Matrix::Identity(d, d) - p)));
}

py::dict activation_dict(const ActivationReport& a) {
  py::dict d;
  d["c"] = a.c;
  d["eps_q"] = a.eps_q;
  d["a_func"] = a.a_func;
  d["r2"] = a.r2;
  return d;
}

py::tuple run_command(const std::string& path,
                      harness::CommandOutcome (*cmd)(const harness::Scenario&, std::ostream&)) {
  const harness::Scenario s = harness::load_scenario(path);
  std::ostringstream out;
  const harness::CommandOutcome o = cmd(s, out);
  return py::make_tuple(o.exit_code, out.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Relative-entropy and activation certificates for Davies semigroups";

  // Translators registered later are tried first, so the subclass comes last.
  auto& validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<harness::SecularRefusal>(m, "SecularRefusal", validation.ptr());

  m.def(
      "relative_entropy",
      [](const Matrix& rho, const Matrix& sigma) {
        return as_float(relative_entropy(DensityMatrix(rho), DensityMatrix(sigma)));
      },
      py::arg("rho"), py::arg("sigma"), "D(rho || sigma); +inf when the support condition fails.");
  m.def(
      "fidelity", [](const Matrix& x, const Matrix& y) { return fidelity(HermitianMatrix(x), HermitianMatrix(y)); },
      py::arg("x"), py::arg("y"));
  m.def("log_mean", &log_mean, py::arg("x"), py::arg("y"), "(log x - log y) / (x - y).");
  m.def(
      "bkm_integral",
      [](const Matrix& d0, const Matrix& y) { return bkm_integral(HermitianMatrix(d0), HermitianMatrix(y)); },
      py::arg("d0"), py::arg("y"));
  m.def(
      "activation",
      [](const Matrix& rho, const Matrix& p) { return activation_dict(activation(DensityMatrix(rho), split_from_projector(p))); },
      py::arg("rho"), py::arg("projector"), "Coherence c, population eps_q, A and R^2 relative to P.");
  m.def(
      "coherence_entropy",
      [](const Matrix& rho, const Matrix& p) {
        return as_float(coherence_entropy(DensityMatrix(rho), PinchingSpec::two_block(p)));
      },
      py::arg("rho"), py::arg("projector"));
  m.def("modulus_lower", &modulus_lower, py::arg("a_func"), py::arg("theta"), py::arg("a0"));
  m.def("invert_modulus", &invert_modulus, py::arg("c"), py::arg("target"));
  m.def(
      "dominance_window",
      [](double gamma_max, double k, double a_theta, double c0, double eps0, double eps_bar) {
        return dominance_window(gamma_max, k, a_theta, c0, eps0, eps_bar).t_star;
      },
      py::arg("gamma_max"), py::arg("k"), py::arg("a_theta"), py::arg("c0"), py::arg("eps0"),
      py::arg("eps_bar"), "T* or None when the window is empty.");
  m.def("near_boundary_threshold", &near_boundary_threshold, py::arg("a0"));

  m.def(
      "verify",
      [](const std::string& suite, std::size_t trials, std::uint64_t seed, unsigned threads) {
        harness::SuiteOptions opt;
        opt.threads = threads;
        harness::VerificationReport rep;
        {
          py::gil_scoped_release release;
          rep = harness::run_suite(suite, trials, seed, opt);
        }
        return py::make_tuple(rep.pass(), rep.to_text());
      },
      py::arg("suite") = "all", py::arg("trials") = 100, py::arg("seed") = 1, py::arg("threads") = 0,
      "Runs a verification suite; returns (passed, report text).");
  m.def(
      "evolve_csv", [](const std::string& path) { return run_command(path, &harness::evolve_cmd); },
      py::arg("scenario_path"), "Returns (exit_code, csv_text).");
  m.def(
      "certify_csv", [](const std::string& path) { return run_command(path, &harness::certify_cmd); },
      py::arg("scenario_path"), "Returns (exit_code, csv_text).");
}
