#include <array>
#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rnshelix/error.hpp"
#include "rnshelix/expr.hpp"
#include "rnshelix/lorentz.hpp"
#include "rnshelix/pipeline.hpp"

namespace py = pybind11;
using namespace rnshelix;

namespace {

using Triple = std::array<double, 3>;

LVec3 vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple tup(const LVec3& v) { return {v.x1, v.x2, v.x3}; }

Mode parse_mode(const std::string& m) {
  if (m == "analyze") return Mode::Analyze;
  if (m == "synthesize") return Mode::Synthesize;
  if (m == "check-props") return Mode::CheckProps;
  throw py::value_error("mode must be analyze, synthesize or check-props");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lorentzian curve frames and relatively normal-slant helix analysis";
  m.attr("__version__") = kToolVersion;
  m.attr("CSV_HEADER") = kCsvHeader;

  static py::exception<Error> error_type(m, "RnshelixError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      exc.attr("validation") = is_validation_error(e.kind());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  m.def("mdot", [](const Triple& x, const Triple& y) { return mdot(vec(x), vec(y)); }, py::arg("x"), py::arg("y"),
        "Minkowski inner product -x1 y1 + x2 y2 + x3 y3.");
  m.def("mcross", [](const Triple& x, const Triple& y) { return tup(mcross(vec(x), vec(y))); }, py::arg("x"),
        py::arg("y"));
  m.def("mnorm", [](const Triple& x) { return mnorm(vec(x)); }, py::arg("x"));
  m.def(
      "causal_character",
      [](const Triple& v, double eps) { return std::string(to_string(causal_character(vec(v), eps))); },
      py::arg("v"), py::arg("eps") = kDefaultNullEps);
  m.def(
      "lorentz_angle",
      [](const Triple& v, const Triple& w, double eps) {
        const LorentzAngle a = lorentz_angle(vec(v), vec(w), eps);
        py::dict d;
        d["value"] = a.value;
        d["kind"] = std::string(to_string(a.kind));
        d["sign"] = a.sign;
        return d;
      },
      py::arg("v"), py::arg("w"), py::arg("eps") = kDefaultNullEps);

  m.def(
      "evaluate",
      [](const std::string& text, double s, double u, double v) { return parse_expr(text).eval(Vars{s, u, v}); },
      py::arg("expr"), py::arg("s") = 0.0, py::arg("u") = 0.0, py::arg("v") = 0.0,
      "Parse and evaluate an expression in s, u, v.");
  m.def("canonical_form", [](const std::string& text) { return parse_expr(text).to_string(); }, py::arg("expr"));

  m.def(
      "run_document",
      [](const std::string& json_text, const std::string& mode, std::optional<double> tol,
         std::optional<double> eps, std::optional<double> h, std::optional<int> samples) {
        Overrides o;
        o.tol = tol;
        o.eps = eps;
        o.h = h;
        o.samples = samples;
        Artifacts a;
        {
          py::gil_scoped_release release;
          a = run_document(json_text, parse_mode(mode), o, "<python>");
        }
        return py::make_tuple(a.report, a.csv, a.rows);
      },
      py::arg("document"), py::arg("mode") = "analyze", py::arg("tol") = py::none(), py::arg("eps") = py::none(),
      py::arg("h") = py::none(), py::arg("samples") = py::none(),
      "Run the analysis on a JSON document; returns (report_json, samples_csv, rows).");
}
