// Python bindings. Structured inputs travel as JSON text or nested lists;
// reports come back as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dama/approx.hpp"
#include "dama/boundary.hpp"
#include "dama/characterize.hpp"
#include "dama/coxeter.hpp"
#include "dama/error.hpp"
#include "dama/graph_of_groups.hpp"
#include "dama/io.hpp"
#include "dama/report.hpp"
#include "dama/simplicial.hpp"

namespace py = pybind11;
using namespace dama;

namespace {

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

FiniteMetricSpace metric_from(const std::vector<std::vector<double>>& dist) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dist.size(); ++i) names.push_back("x" + std::to_string(i));
  return FiniteMetricSpace(std::move(names), dist);
}

std::vector<FiniteMetricSpace> spaces_from(const std::vector<std::vector<std::vector<double>>>& xs) {
  std::vector<FiniteMetricSpace> out;
  for (const auto& d : xs) out.push_back(metric_from(d));
  return out;
}

std::vector<std::vector<std::string>> named(const SimplicialComplex& c, const std::vector<VertexSet>& sets) {
  std::vector<std::vector<std::string>> out;
  for (VertexSet s : sets) out.push_back(c.names_of(s));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "dama C++ core";
  m.attr("__version__") = "0.1.0";

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<PreconditionError> precondition_error(m, "PreconditionError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      PyErr_SetString(input_error.ptr(), e.what());
    } catch (const PreconditionError& e) {
      PyErr_SetString(precondition_error.ptr(), e.what());
    }
  });

  m.def(
      "normalize", [](const std::string& expr) { return to_string(normalize(parse_expr(expr))); }, py::arg("expr"),
      "Normal form of a boundary expression, e.g. normalize('Amalgam(Empty)') == 'Cantor'.");
  m.def(
      "is_normal_form", [](const std::string& expr) { return is_normal_form(parse_expr(expr)); }, py::arg("expr"));

  m.def(
      "is_finite_type",
      [](const std::string& coxeter_json) {
        const CoxeterSystem c = parse_coxeter(coxeter_json);
        return is_finite_type(c, c.all());
      },
      py::arg("coxeter_json"));
  m.def(
      "coxeter_classify",
      [](const std::string& coxeter_json, std::size_t cap) {
        const EndednessClass e = classify_endedness(parse_coxeter(coxeter_json), cap);
        py::dict d;
        d["ends"] = to_string(e.tag);
        d["virtually_free"] = e.virtually_free;
        return d;
      },
      py::arg("coxeter_json"), py::arg("cap_vertices") = 16);
  m.def(
      "coxeter_boundary",
      [](const std::string& coxeter_json, std::size_t cap) {
        return to_string(boundary_expression(parse_coxeter(coxeter_json), cap));
      },
      py::arg("coxeter_json"), py::arg("cap_vertices") = 16);

  m.def(
      "terminal_factors",
      [](const std::string& complex_json) {
        const SimplicialComplex c = parse_simplicial_complex(complex_json);
        return named(c, terminal_factors(c));
      },
      py::arg("complex_json"), "Terminal factors as sorted vertex-name lists.");
  m.def(
      "is_infinity_large",
      [](const std::string& complex_json) { return is_infinity_large(parse_simplicial_complex(complex_json)); },
      py::arg("complex_json"));

  m.def(
      "is_non_elementary", [](const std::string& gog_json) { return is_non_elementary(parse_graph_of_groups(gog_json)); },
      py::arg("gog_json"));
  m.def(
      "ball_sizes",
      [](const std::string& gog_json, const std::string& base, int radius) {
        const GraphOfGroups g = parse_graph_of_groups(gog_json);
        const int v = g.vertex_index(base);
        if (v < 0) throw InputError("base", "unknown vertex '" + base + "'");
        std::vector<std::size_t> sizes;
        for (int r = 0; r <= radius; ++r) sizes.push_back(bass_serre_ball(g, v, r).nodes.size());
        return sizes;
      },
      py::arg("gog_json"), py::arg("base"), py::arg("radius"),
      "Number of Bass-Serre tree vertices within distance 0..radius of the base vertex.");
  m.def(
      "gog_boundary",
      [](const std::string& gog_json) { return to_string(boundary_expression(parse_graph_of_groups(gog_json))); },
      py::arg("gog_json"));

  m.def(
      "approx_check",
      [](const std::vector<std::vector<std::vector<double>>>& spaces, int depth, int branching, double lambda) {
        return to_python(to_json(check_conditions(build_approx(spaces_from(spaces), depth, branching, lambda))));
      },
      py::arg("spaces"), py::arg("depth"), py::arg("branching"), py::arg("lambda_") = 1.0 / 3.0,
      "Builds the finite approximation from distance matrices and reports conditions (a1)-(a5).");
  m.def(
      "characterize",
      [](const std::vector<std::vector<std::vector<double>>>& spaces, int depth, int branching, double lambda) {
        const RegularStructure s = to_regular_structure(build_approx(spaces_from(spaces), depth, branching, lambda));
        py::dict d;
        d["regularity"] = to_python(to_json(check_regularity(s)));
        if (s.class_count() == 1) {
          const TLabelling l = build_t_labelling(s, depth);
          d["labelling"] = to_python(Json::parse(labelling_json(l)));
          d["verification"] = to_python(to_json(verify_labelling(l, s)));
        } else {
          const MergeResult mr = merge_families(s);
          d["merge_ratio"] = mr.ratio;
          d["merged_regularity"] = to_python(to_json(check_regularity(mr.merged)));
        }
        return d;
      },
      py::arg("spaces"), py::arg("depth"), py::arg("branching"), py::arg("lambda_") = 1.0 / 3.0,
      "Regularity report plus a verified labelling (one class) or a merge (several classes).");
}
