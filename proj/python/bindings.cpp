#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "debranges/errors.hpp"
#include "debranges/gram.hpp"
#include "debranges/kernels.hpp"
#include "debranges/run.hpp"
#include "debranges/sigma.hpp"
#include "debranges/structure.hpp"
#include "debranges/verify.hpp"

namespace py = pybind11;
using namespace debranges;

namespace {
ZeroSequence zeros_from(const std::vector<cplx>& v) { return canonicalize(v); }
}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spaces of entire functions with imposed zeros";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UnsupportedOrderError>(m, "UnsupportedOrderError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<LinearDependenceError>(m, "LinearDependenceError", base.ptr());
  py::register_exception<InvalidScheduleError>(m, "InvalidScheduleError", base.ptr());

  py::class_<StructureFunction>(m, "StructureFunction")
      .def_static("paley_wiener", &StructureFunction::paley_wiener, py::arg("x"),
                  py::arg("max_derivative_order") = kUnlimitedOrder)
      .def_static("polynomial_hb", &StructureFunction::polynomial_hb, py::arg("roots"),
                  py::arg("max_derivative_order") = 16)
      .def_property_readonly("max_derivative_order", &StructureFunction::max_derivative_order)
      .def_property_readonly("is_paley_wiener", &StructureFunction::is_paley_wiener)
      .def_property_readonly("pw_type", &StructureFunction::pw_type)
      .def_property_readonly("degree", &StructureFunction::degree);

  m.def("eval_E", &eval_E, py::arg("sf"), py::arg("w"), py::arg("order") = 0);
  m.def("eval_E_star", &eval_E_star, py::arg("sf"), py::arg("w"), py::arg("order") = 0);
  m.def("kernel", &kernel, py::arg("sf"), py::arg("z"), py::arg("w"));
  m.def("kernel_mixed_partial", &kernel_mixed_partial, py::arg("sf"), py::arg("a"), py::arg("b"), py::arg("z"),
        py::arg("w"));
  m.def("hb_margin", &hb_margin, py::arg("sf"), py::arg("z"));

  py::class_<ZeroSequence>(m, "ZeroSequence")
      .def_property_readonly("points", &ZeroSequence::points)
      .def_property_readonly("confluence", &ZeroSequence::confluence)
      .def("__len__", &ZeroSequence::size);
  m.def("canonicalize", [](const std::vector<cplx>& v) { return canonicalize(v); }, py::arg("points"));
  m.def("gamma", [](const std::vector<cplx>& zeros, cplx z) { return gamma(zeros_from(zeros), z); },
        py::arg("zeros"), py::arg("z"));

  py::class_<GramSystem>(m, "GramSystem")
      .def_static("build", [](const StructureFunction& sf, const std::vector<cplx>& zeros) {
        return GramSystem::build(sf, zeros_from(zeros));
      }, py::arg("space"), py::arg("zeros"))
      .def_property_readonly("matrix", &GramSystem::matrix)
      .def_property_readonly("zeros", &GramSystem::zeros)
      .def_property_readonly("det", &GramSystem::det)
      .def_property_readonly("condition_estimate", &GramSystem::condition_estimate)
      .def("__len__", &GramSystem::size);
  m.def("solve_beta", &solve_beta, py::arg("gram"), py::arg("z"));
  m.def("sigma_kernel", &sigma_kernel, py::arg("gram"), py::arg("z"), py::arg("w"));
  m.def("sigma_kernel_det", &sigma_kernel_det, py::arg("gram"), py::arg("z"), py::arg("w"));

  py::enum_<Which>(m, "Which").value("E_sigma", Which::E_sigma).value("F_sigma", Which::F_sigma);

  py::class_<SigmaStructureFunction>(m, "SigmaStructureFunction")
      .def_property_readonly("coeffs_E", &SigmaStructureFunction::coeffs_E)
      .def_property_readonly("coeffs_F", &SigmaStructureFunction::coeffs_F)
      .def_property_readonly("condition_estimate", &SigmaStructureFunction::condition_estimate)
      .def("eval", &SigmaStructureFunction::eval, py::arg("which"), py::arg("w"))
      .def("incomplete", &SigmaStructureFunction::incomplete, py::arg("which"), py::arg("w"));
  m.def("derive", &derive, py::arg("gram"));
  m.def("derive_iterative", [](const StructureFunction& sf, const std::vector<cplx>& zeros) {
    return derive_iterative(sf, zeros_from(zeros));
  }, py::arg("space"), py::arg("zeros"));

  py::class_<CheckReport>(m, "CheckReport")
      .def_readonly("check_id", &CheckReport::check_id)
      .def_readonly("samples", &CheckReport::samples)
      .def_readonly("max_rel_residual", &CheckReport::max_rel_residual)
      .def_readonly("tolerance", &CheckReport::tolerance)
      .def_readonly("condition_estimate", &CheckReport::condition_estimate)
      .def_readonly("passed", &CheckReport::passed)
      .def_readonly("metrics", &CheckReport::metrics)
      .def_readonly("note", &CheckReport::note)
      .def("__repr__", [](const CheckReport& r) {
        return "<CheckReport " + r.check_id + (r.passed ? " passed" : " FAILED") + ">";
      });
  m.def("check_ids", &check_ids);
  m.def("run_default_suite", [](const StructureFunction& sf, const std::vector<cplx>& zeros, std::uint64_t seed) {
    return run_default_suite(sf, zeros, seed);
  }, py::arg("space"), py::arg("zeros"), py::arg("seed") = 0);

  m.def("run_config", [](const std::string& json) {
    std::ostringstream out, err;
    int code;
    try {
      code = run(parse_config(json), out, err);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      code = kExitConfigError;
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("config_json"), "Runs a JSON configuration; returns (exit_code, stdout_text, stderr_text).");
}
