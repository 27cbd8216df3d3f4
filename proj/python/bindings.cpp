#include "tropjac/cli.hpp"
#include "tropjac/connectivization.hpp"
#include "tropjac/io.hpp"
#include "tropjac/outer_metrics.hpp"
#include "tropjac/report.hpp"
#include "tropjac/spd.hpp"
#include "tropjac/tropical_plane.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace tropjac;

namespace {

// Documents cross the boundary as JSON text; the Python layer wraps them in dicts.
Json doc(const std::string& text) { return parse_json(text, "argument"); }

std::string graph_report(const std::string& graph) {
  const MetricGraph g = graph_from_json(doc(graph));
  const ValidityReport r = validate_outer(g);
  return Json{{"is_outer_space_point", r.is_outer_space_point},
              {"is_connected", r.is_connected},
              {"min_valence", r.min_valence},
              {"separating_edges", r.separating_edges}}
      .dump();
}

Matrix period(const std::string& graph, const std::string& marking) {
  const MetricGraph g = graph_from_json(doc(graph));
  return period_matrix(g, marking.empty() ? cycle_basis(g) : marking_from_json(doc(marking)));
}

std::string period_exact(const std::string& graph, const std::string& marking) {
  const MetricGraph g = graph_from_json(doc(graph));
  return exact_matrix_to_json(period_matrix_exact(g, marking.empty() ? cycle_basis(g) : marking_from_json(doc(marking))))
      .dump();
}

std::vector<std::vector<int>> sets_of(const std::vector<C1Set>& sets) {
  std::vector<std::vector<int>> out;
  for (const auto& s : sets) out.push_back(s.edges);
  return out;
}

std::string connectivize(const std::string& graph, std::optional<std::uint64_t> seed) {
  const Connectivization c =
      three_edge_connectivize(graph_from_json(doc(graph)), {seed.has_value(), seed.value_or(0)});
  return Json{{"quotient", graph_to_json(c.quotient)}, {"sets", sets_of(c.sets)}, {"edge_of_set", c.edge_of_set}}.dump();
}

std::optional<std::vector<int>> cyclic(const std::string& a, const std::string& b) {
  auto r = cyclically_equivalent(graph_from_json(doc(a)), graph_from_json(doc(b)));
  if (!r) return std::nullopt;
  return r->image;
}

TensorSpec spec_of(const std::string& kind, double eps) {
  TensorSpec s{parse_tensor_kind(kind), eps};
  if (s.kind != TensorKind::ds2_eps) s.eps = 0;
  return s;
}

py::dict length_of(const std::string& path, const std::string& kind, double eps, double tol) {
  const PathLength r = path_length(path_from_json(doc(path)), spec_of(kind, eps), tol);
  py::dict d;
  d["value"] = r.value;
  d["error"] = r.error;
  d["converged"] = r.converged;
  d["diverging"] = r.diverging;
  d["trace"] = r.trace;
  return d;
}

py::dict area_of(const std::string& type, const std::string& marking, const std::string& kind, double eps, double tol) {
  MetricGraph g = type.empty() ? theta_type() : graph_from_json(doc(type));
  Marking m = type.empty() ? theta_marking() : marking.empty() ? cycle_basis(g) : marking_from_json(doc(marking));
  const VolumeResult r = simplex_area(SimplexModel(g, m), spec_of(kind, eps), tol);
  py::dict d;
  d["value"] = r.value;
  d["error"] = r.error;
  d["converged"] = r.converged;
  d["trace"] = r.trace;
  return d;
}

py::tuple interval(const std::string& p, const std::string& q, const std::string& metric, int budget) {
  const SimplexPoint a = point_from_json(doc(p)), b = point_from_json(doc(q));
  const DistanceInterval r = metric == "d1"   ? d1(a, b, budget)
                             : metric == "d2" ? d2(a, b, budget)
                             : metric == "dinf"
                                 ? dinf(a, b, budget)
                                 : throw std::invalid_argument("metric must be d1, d2 or dinf");
  return py::make_tuple(r.lower, r.upper);
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tropical Jacobians, metric graphs and outer space";
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<OuterSpaceError>(m, "OuterSpaceError", PyExc_ValueError);
  py::register_exception<NoRouteError>(m, "NoRouteError", PyExc_RuntimeError);
  py::register_exception<EnumerationOverflow>(m, "EnumerationOverflow", PyExc_RuntimeError);

  m.def("validate", &graph_report, py::arg("graph"));
  m.def("genus", [](const std::string& g) { return genus(graph_from_json(doc(g))); }, py::arg("graph"));
  m.def("period_matrix", &period, py::arg("graph"), py::arg("marking") = "");
  m.def("period_matrix_exact", &period_exact, py::arg("graph"), py::arg("marking") = "");
  m.def("cycle_basis", [](const std::string& g) { return cycle_basis(graph_from_json(doc(g))).basis; }, py::arg("graph"));
  m.def("principality_check",
        [](const std::string& g, const std::string& mk) {
          return principality_check(graph_from_json(doc(g)), marking_from_json(doc(mk)));
        },
        py::arg("graph"), py::arg("marking"));
  m.def("d_inv", &d_inv, py::arg("a"), py::arg("b"));
  m.def("shortest_vector",
        [](const Matrix& q, long long budget) {
          const ShortestVector r = shortest_vector(q, budget);
          return py::make_tuple(r.value, r.witness);
        },
        py::arg("q"), py::arg("node_budget") = 50'000'000LL);
  m.def("glnz_equivalent", &glnz_equivalent, py::arg("a"), py::arg("b"), py::arg("radius") = 3);
  m.def("c1_sets", [](const std::string& g) { return sets_of(c1_sets(graph_from_json(doc(g)))); }, py::arg("graph"));
  m.def("connectivize", &connectivize, py::arg("graph"), py::arg("seed") = py::none());
  m.def("cyclically_equivalent", &cyclic, py::arg("first"), py::arg("second"));
  m.def("torelli_equal",
        [](const std::string& a, const std::string& b) {
          return tropical_torelli_equal(graph_from_json(doc(a)), graph_from_json(doc(b))).equal;
        },
        py::arg("first"), py::arg("second"));
  m.def("tensor",
        [](const std::string& p, const std::string& kind, double eps) {
          return tensor(point_from_json(doc(p)), spec_of(kind, eps));
        },
        py::arg("point"), py::arg("kind") = "ds2", py::arg("eps") = 0.0);
  m.def("period_map", [](const std::string& p) { return period_map(point_from_json(doc(p))); }, py::arg("point"));
  m.def("distance_interval", &interval, py::arg("p"), py::arg("q"), py::arg("metric") = "d1", py::arg("budget") = 1);
  m.def("distance_upper_bound",
        [](const std::string& p, const std::string& q, const std::string& kind, double eps, int refinements) {
          const UpperBound r =
              distance_upper_bound(point_from_json(doc(p)), point_from_json(doc(q)), spec_of(kind, eps), {refinements, 20});
          return py::make_tuple(r.value, r.trace);
        },
        py::arg("p"), py::arg("q"), py::arg("kind") = "ds2", py::arg("eps") = 0.0, py::arg("refinements") = 3);
  m.def("path_length", &length_of, py::arg("path"), py::arg("kind") = "ds2", py::arg("eps") = 0.0,
        py::arg("tol") = 1e-6);
  m.def("simplex_area", &area_of, py::arg("type") = "", py::arg("marking") = "", py::arg("kind") = "ds2",
        py::arg("eps") = 0.0, py::arg("tol") = 1e-3);
  m.def("tropical_eval",
        [](const std::string& p, const std::string& x, const std::string& y) {
          return to_string(eval_exact(polynomial_from_json(doc(p)), parse_rational(x), parse_rational(y)));
        },
        py::arg("polynomial"), py::arg("x"), py::arg("y"));
  m.def("corner_locus",
        [](const std::string& p) {
          const CornerLocus locus = corner_locus(polynomial_from_json(doc(p)));
          Json vs = Json::array();
          for (const auto& v : locus.vertices) {
            Json rays = Json::array();
            for (const auto& r : v.rays) rays.push_back({{"direction", r.primitive}, {"weight", r.weight}});
            vs.push_back({{"point", {to_string(v.vertex[0]), to_string(v.vertex[1])}},
                          {"rays", rays},
                          {"balanced", check_balancing(v)}});
          }
          return Json{{"vertices", vs}, {"edge_count", locus.edges.size()}}.dump();
        },
        py::arg("polynomial"));
  m.def("run_criterion",
        [](int id, std::uint64_t seed) {
          const CriterionResult r = run_criterion(id, seed);
          return py::make_tuple(r.passed, format_line(r));
        },
        py::arg("id"), py::arg("seed") = 20261014ULL);
  m.def("run_cli", &run, py::arg("args"));
}
