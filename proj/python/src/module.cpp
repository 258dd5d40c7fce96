// Python bindings. Potentials and Jost functions cross the boundary as plain
// lists: V = [V_1..V_b], f0 = [c_0..c_{2b-1}].

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lattice_ist/cli.hpp"
#include "lattice_ist/gelfand_levitan.hpp"
#include "lattice_ist/marchenko.hpp"
#include "lattice_ist/tev_inverse.hpp"

namespace py = pybind11;
using namespace lattice_ist;

namespace {

std::vector<double> to_list(std::span<const double> s) { return {s.begin(), s.end()}; }

std::vector<double> jost_list(const LaurentPoly& f0) {
  std::vector<double> out;
  for (int k = 0; k <= f0.hi(); ++k) out.push_back(f0.coeff(k));
  return out;
}

LaurentPoly jost_from_list(const std::vector<double>& f0) { return LaurentPoly(0, f0); }

SpectralData gl_data(const std::vector<double>& f0, int b, const std::optional<std::vector<std::pair<double, double>>>& bound) {
  if (!bound) return spectral_data_from_jost(jost_from_list(f0), b);
  SpectralData d;
  d.f0 = jost_from_list(f0);
  d.b = b;
  for (auto [z, C] : *bound) {
    if (z == 0.0) throw Error(ErrorCode::InvalidArgument, "bound state z must be nonzero");
    BoundState s;
    s.z = z;
    s.C = C;
    s.mu = 2.0 - z - 1.0 / z;
    d.bound_states.push_back(s);
  }
  return d;
}

InversionMethod parse_method(const std::string& m) {
  if (m == "marchenko") return InversionMethod::Marchenko;
  if (m == "gl") return InversionMethod::GelfandLevitan;
  throw Error(ErrorCode::InvalidArgument, "method must be \"marchenko\" or \"gl\"");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Forward and inverse scattering for the half-line discrete Schroedinger operator";

  // instances carry `code`, the failure class name
  static py::handle error = py::exception<Error>(m, "LatticeIstError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error(e.what());
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<BoundState>(m, "BoundState")
      .def_readonly("z", &BoundState::z)
      .def_readonly("mu", &BoundState::mu)
      .def_readonly("c", &BoundState::c)
      .def_readonly("C", &BoundState::C)
      .def("__repr__", [](const BoundState& s) {
        std::ostringstream o;
        o << "BoundState(z=" << s.z << ", mu=" << s.mu << ", c=" << s.c << ", C=" << s.C << ")";
        return o.str();
      });

  m.def(
      "jost_function", [](const std::vector<double>& V) { return jost_list(jost_function(Potential(V))); }, py::arg("V"),
      "Coefficients c_0..c_{2b-1} of the Jost function f0(z).");
  m.def(
      "bound_states", [](const std::vector<double>& V) { return spectral_data(Potential(V)).bound_states; }, py::arg("V"));
  m.def(
      "transmission_determinant",
      [](const std::vector<double>& V) {
        const auto t = transmission_det(Potential(V));
        return py::make_tuple(to_list(t.D.coeffs()), to_list(t.E.coeffs()));
      },
      py::arg("V"), "(D, E) as ascending coefficient lists in lambda; E = D / V_b is monic.");
  m.def(
      "transmission_eigenvalues",
      [](const std::vector<double>& V) { return transmission_eigenvalues(Potential(V)).eigenvalues; }, py::arg("V"));

  m.def(
      "marchenko_kernel", [](const std::vector<double>& f0, int b) { return marchenko_kernel(jost_from_list(f0), b).values(); },
      py::arg("f0"), py::arg("b"), "M_1..M_{2b-1}.");
  m.def(
      "marchenko_invert",
      [](const std::vector<double>& f0, int b) { return to_list(marchenko_invert(jost_from_list(f0), b).values()); },
      py::arg("f0"), py::arg("b"));
  m.def(
      "gl_invert",
      [](const std::vector<double>& f0, int b, std::optional<std::vector<std::pair<double, double>>> bound_states) {
        return to_list(gl_invert(gl_data(f0, b, bound_states)).values());
      },
      py::arg("f0"), py::arg("b"), py::arg("bound_states") = py::none(),
      "Bound states as (z, C) pairs; derived from f0 when omitted.");

  py::class_<InversionReport>(m, "InversionReport")
      .def_property_readonly("status", [](const InversionReport& r) { return std::string(to_string(r.status)); })
      .def_property_readonly("potential",
                             [](const InversionReport& r) -> std::optional<std::vector<double>> {
                               if (!r.potential) return std::nullopt;
                               return to_list(r.potential->values());
                             })
      .def_property_readonly("f0",
                             [](const InversionReport& r) -> std::optional<std::vector<double>> {
                               if (!r.f0) return std::nullopt;
                               return jost_list(*r.f0);
                             })
      .def_property_readonly("b", [](const InversionReport& r) { return r.diagnostics.b; })
      .def_property_readonly("K01_over_Vb", [](const InversionReport& r) { return r.diagnostics.K01_over_Vb; })
      .def_property_readonly("gap", [](const InversionReport& r) { return r.diagnostics.gap; })
      .def_property_readonly("warnings", [](const InversionReport& r) { return r.diagnostics.warnings; })
      .def_property_readonly("message", [](const InversionReport& r) { return r.diagnostics.message; })
      .def_property_readonly("gamma", [](const InversionReport& r) { return r.diagnostics.gamma; })
      .def_property_readonly("epsilon", [](const InversionReport& r) { return r.diagnostics.epsilon; })
      .def("__repr__", [](const InversionReport& r) { return std::string("InversionReport(status=") + to_string(r.status) + ")"; });

  m.def(
      "tev_invert",
      [](const std::vector<Complex>& eigs, const std::string& method) { return tev_invert(make_spectrum(eigs), parse_method(method)); },
      py::arg("eigenvalues"), py::arg("method") = "marchenko");

  m.def(
      "unusual_family_b3",
      [](double gamma, double epsilon) {
        const auto f = unusual_family_b3(gamma, epsilon);
        std::vector<std::vector<double>> pots;
        for (const auto& p : f.potentials) pots.push_back(to_list(p.values()));
        return py::make_tuple(f.one_parameter_family, pots);
      },
      py::arg("gamma"), py::arg("epsilon"), "(one_parameter_family, potentials) for V2 = -V1, b = 3.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out, err;
        const int code = run_cli(args, in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Runs the command-line front end in-process: (exit code, stdout, stderr).");
}
