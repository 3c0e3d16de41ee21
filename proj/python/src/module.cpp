#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "rcbound/bounds.hpp"
#include "rcbound/config.hpp"
#include "rcbound/errors.hpp"
#include "rcbound/fisher.hpp"
#include "rcbound/montecarlo.hpp"
#include "rcbound/parallel.hpp"
#include "rcbound/specs.hpp"
#include "rcbound/transforms.hpp"

namespace py = pybind11;

namespace {

double as_float(const rcb::Extended& e) {
  return e.is_infinite() ? std::numeric_limits<double>::infinity() : e.value();
}

py::object json_to_py(const rcb::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

rcb::Stream stream_for(std::uint64_t seed, const std::string& label) {
  return rcb::Stream{seed, 0}.derive(label);
}

}  // namespace

PYBIND11_MODULE(_rcbound, m) {
  m.doc() = "Lower bounds for estimation error under general norms";

  // translators run newest first, so the base class goes in first
  auto& error = py::register_exception<rcb::Error>(m, "RcboundError");
  py::register_exception<rcb::UsageError>(m, "UsageError", error.ptr());
  py::register_exception<rcb::DomainError>(m, "DomainError", error.ptr());
  py::register_exception<rcb::VerificationFailure>(m, "VerificationFailure", error.ptr());
  py::register_exception<rcb::NonConvergenceError>(m, "NonConvergenceError", error.ptr());

  m.def(
      "fisher_p",
      [](const std::string& family, double theta, double p) {
        return as_float(rcb::fisher_p(*rcb::make_family(family), theta, p).value);
      },
      py::arg("family"), py::arg("theta"), py::arg("p"));

  m.def(
      "lower_bound_lp",
      [](const std::string& family, double theta0, double q) -> py::object {
        const auto b = rcb::lower_bound_lp(*rcb::make_family(family), theta0, q);
        if (!b.has_bound) return py::none();
        return py::float_(b.bound);
      },
      py::arg("family"), py::arg("theta0"), py::arg("q"),
      "sqrt(n)-scaled lower bound in L_q, or None when the information is infinite.");

  m.def("rosenthal_constant", &rcb::rosenthal_bound, py::arg("p"));
  m.def("kb_constant", &rcb::kb_constant, py::arg("B"));

  m.def(
      "conjugate",
      [](const std::string& phi, const std::vector<double>& u) {
        const auto f = rcb::young_fenchel(rcb::parse_phi(phi));
        std::vector<double> out;
        out.reserve(u.size());
        for (double x : u) out.push_back(f(x));
        return out;
      },
      py::arg("phi"), py::arg("u"));

  m.def(
      "phi_bar",
      [](const std::string& phi, const std::vector<double>& lambdas) {
        const auto bar = rcb::phi_bar(rcb::parse_phi(phi));
        std::vector<double> out;
        for (double l : lambdas) {
          const auto v = bar.evaluate(l);
          out.push_back(v.diverged ? std::numeric_limits<double>::infinity() : v.value);
        }
        return out;
      },
      py::arg("phi"), py::arg("lambdas"));

  m.def(
      "clt_norm",
      [](const std::string& dist, const std::string& norm, const std::vector<std::size_t>& n_grid, std::size_t reps,
         std::uint64_t seed, int workers) {
        py::gil_scoped_release release;
        const auto est = rcb::clt_norm_estimate(rcb::make_distribution(dist), rcb::parse_norm(norm), n_grid, reps,
                                                stream_for(seed, "clt/" + dist + "/" + norm),
                                                rcb::resolve_workers(workers));
        std::vector<double> values;
        for (const auto& v : est.values) values.push_back(as_float(v));
        return std::make_pair(values, est.standard_errors);
      },
      py::arg("dist"), py::arg("norm"), py::arg("n_grid"), py::arg("reps"), py::arg("seed"), py::arg("workers") = 0,
      "Per-n estimates and standard errors of the normalized partial-sum norm.");

  m.def(
      "verify",
      [](const std::string& scenario_text, int workers) {
        const auto s = rcb::parse_scenario_text(scenario_text);
        rcb::BoundReport r;
        {
          py::gil_scoped_release release;
          r = rcb::verify_bound(s, rcb::resolve_workers(workers));
        }
        return json_to_py(rcb::report_to_json(r));
      },
      py::arg("scenario"), py::arg("workers") = 0,
      "Runs a scenario document (JSON text) and returns the report record.");

  m.def(
      "normalize_scenario",
      [](const std::string& scenario_text) { return json_to_py(rcb::scenario_to_json(rcb::parse_scenario_text(scenario_text))); },
      py::arg("scenario"));
}
