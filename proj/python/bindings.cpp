#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "conelab/barrier.hpp"
#include "conelab/bending.hpp"
#include "conelab/cli/scenario.hpp"
#include "conelab/covering.hpp"
#include "conelab/error.hpp"
#include "conelab/perron.hpp"
#include "conelab/spectral.hpp"

namespace py = pybind11;
using namespace conelab;

namespace {

cone::ConeSpec make(int p, int q) { return cone::make_cone(p, q); }

py::dict lambda0(int p, int q, double r_in, double r_out, int m_max, std::vector<double> eps) {
  spectral::Lambda0Options o;
  o.r_in = r_in;
  o.r_out = r_out;
  o.m_max = m_max;
  o.eps = std::move(eps);
  const spectral::Lambda0Result r = spectral::lambda0(make(p, q), o);
  py::dict d;
  d["lambda0"] = r.lambda0;
  d["error_estimate"] = r.error_estimate;
  d["eps"] = r.eps;
  d["schedule"] = r.schedule;
  d["lambda_sequence"] = r.lambda_sequence;
  return d;
}

py::dict covering_run(int dim, int balls, int targets, std::uint64_t seed, int c_bound) {
  covering::InstanceOptions o;
  o.dim = dim;
  o.balls = balls;
  o.targets = targets;
  const covering::BallSet bs = covering::random_instance(o, seed);
  const covering::FamilyAssignment fa = covering::assign_families(bs, c_bound > 0 ? c_bound : covering::default_c_bound(dim));
  const covering::VerifyReport v = covering::verify_families(bs, fa);
  py::dict d;
  d["families_used"] = fa.used;
  d["family"] = fa.family;
  d["separation"] = v.separation.pass;
  d["exclusion"] = v.exclusion.pass;
  d["cover"] = v.cover.pass;
  return d;
}

py::dict run_scenario(const std::string& name_or_path) {
  const cli::RunReport r = cli::run_scenario(cli::load_scenario(name_or_path));
  return py::module_::import("json").attr("loads")(cli::report_json(r).dump());
}

}  // namespace

PYBIND11_MODULE(_conelab, m) {
  m.doc() = "Bindings for the conelab numerical library";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("lambda0_closed_form", [](int p, int q) { return spectral::lambda0_closed_form(make(p, q)); }, py::arg("p"),
        py::arg("q"));
  m.def("lambda0", &lambda0, py::arg("p"), py::arg("q"), py::arg("r_in") = 0.5, py::arg("r_out") = 1.0,
        py::arg("m_max") = 4, py::arg("eps") = std::vector<double>{0.2, 0.1, 0.05});
  m.def(
      "indicial_exponent",
      [](int p, int q, double lambda) {
        const perron::IndicialRoots r = perron::indicial_exponent(make(p, q), lambda);
        return py::make_tuple(r.alpha, r.conjugate);
      },
      py::arg("p"), py::arg("q"), py::arg("lambda_"));
  m.def(
      "deflection_radius",
      [](int p, int q, double alpha, double mu, bool truncated) {
        return barrier::deflection_radius({cone::make_deformed(make(p, q), alpha), mu, truncated});
      },
      py::arg("p"), py::arg("q"), py::arg("alpha"), py::arg("mu"), py::arg("truncated") = false);
  m.def("kappa_difference", [](int n) {
    const barrier::Rational r = barrier::kappa_rational(n) - barrier::kappa_rational(n - 1);
    return py::make_tuple(r.numerator(), r.denominator());
  });
  m.def("covering", &covering_run, py::arg("dim"), py::arg("balls"), py::arg("targets"), py::arg("seed"),
        py::arg("c_bound") = 0);
  m.def(
      "h_eval",
      [](double k, double delta, double t) {
        const bending::HSample s = bending::h_eval(k, delta, t);
        return py::make_tuple(s.value, s.d1, s.d2);
      },
      py::arg("k"), py::arg("delta"), py::arg("t"));
  m.def("list_scenarios", [] {
    std::vector<std::string> names;
    for (const cli::Scenario& s : cli::bundled()) names.push_back(s.name);
    return names;
  });
  m.def("run_scenario", &run_scenario, py::arg("name_or_path"));
  m.attr("__version__") = cli::kVersion;
}
