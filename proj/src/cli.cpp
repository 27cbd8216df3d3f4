#include "tropjac/cli.hpp"

#include "tropjac/connectivization.hpp"
#include "tropjac/io.hpp"
#include "tropjac/outer_metrics.hpp"
#include "tropjac/report.hpp"
#include "tropjac/spd.hpp"
#include "tropjac/tropical_plane.hpp"

#include <CLI11.hpp>

#include <functional>
#include <ostream>

namespace tropjac {

namespace {

Json int_list(const std::vector<int>& v) { return Json(v); }

Json trace_json(const std::vector<double>& t) {
  Json out = Json::array();
  for (double x : t) out.push_back(decimal(x));
  return out;
}

Json point2_json(const Point2& p) { return {to_string(p[0]), to_string(p[1])}; }

Json sets_json(const std::vector<C1Set>& sets, const MetricGraph& g) {
  Json out = Json::array();
  for (const auto& s : sets) {
    Rational total = 0;
    for (int e : s.edges) total += g.edge(e).exact;
    out.push_back({{"edges", int_list(s.edges)}, {"length", exact(total)}});
  }
  return out;
}

Json connectivization_json(const Connectivization& c, const MetricGraph& input) {
  return {{"quotient", graph_to_json(c.quotient)},
          {"genus", genus(c.quotient)},
          {"sets", sets_json(c.sets, input)},
          {"edge_of_set", int_list(c.edge_of_set)},
          {"contracted_bridges", int_list(c.contracted_bridges)},
          {"contracted_pair_edges", int_list(c.contracted_pair_edges)}};
}

Json bijection_json(const std::optional<EdgeBijection>& b) {
  return b ? Json(int_list(b->image)) : Json(nullptr);
}

TensorSpec make_spec(const std::string& kind, double eps) {
  TensorSpec spec{parse_tensor_kind(kind), eps};
  if (spec.kind != TensorKind::ds2_eps) spec.eps = 0;
  return spec;
}

Json spec_json(const TensorSpec& spec) {
  Json j = {{"kind", to_string(spec.kind)}};
  if (spec.kind == TensorKind::ds2_eps) j["eps"] = decimal(spec.eps);
  return j;
}

struct Options {
  std::vector<std::string> files;
  std::string marking, point, type;
  std::string kind = "ds2";
  std::string metric = "d1";
  std::string x, y;
  std::vector<int> criteria;
  double eps = 0.05;
  double tol = 1e-3;
  int radius = 3;
  int budget = 1;
  int refinements = 3;
  int genus_flag = 2;
  long long node_budget = 50'000'000;
  std::uint64_t seed = 20261014;
  bool exact_mode = false;
  bool has_seed = false;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tropical Jacobians, metric graphs and outer space", "tropjac"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> action;
  // Exit code of a successful computation whose result is flagged (not converged, failed check).
  int status = exit_ok;
  auto emit = [&](const Json& j) { out << j.dump(2) << '\n'; };

  auto files = [&](CLI::App* sub, int n, const std::string& what) {
    sub->add_option("files", o.files, what)->required()->expected(n)->check(CLI::ExistingFile);
  };
  auto graph_arg = [&](int i) { return graph_from_json(read_json_file(o.files.at(static_cast<std::size_t>(i)))); };

  auto* validate = app.add_subcommand("validate", "check that a graph is a point of outer space");
  files(validate, 1, "graph JSON");
  validate->callback([&] {
    action = [&] {
      const MetricGraph g = graph_arg(0);
      const ValidityReport r = validate_outer(g);
      emit({{"is_outer_space_point", r.is_outer_space_point},
            {"is_connected", r.is_connected},
            {"min_valence", r.min_valence},
            {"separating_edges", int_list(r.separating_edges)},
            {"genus", r.is_connected ? Json(genus(g)) : Json(nullptr)},
            {"total_length", exact(g.exact_total_length())}});
      return exit_ok;
    };
  });

  auto* genus_cmd = app.add_subcommand("genus", "first Betti number of a graph");
  files(genus_cmd, 1, "graph JSON");
  genus_cmd->callback([&] {
    action = [&] {
      emit({{"genus", genus(graph_arg(0))}});
      return exit_ok;
    };
  });

  auto* period = app.add_subcommand("period", "period matrix of a marked graph");
  files(period, 1, "graph JSON");
  period->add_option("--marking", o.marking, "marking JSON (default: fundamental cycles)")->check(CLI::ExistingFile);
  period->add_flag("--exact", o.exact_mode, "rational entries as p/q strings");
  period->callback([&] {
    action = [&] {
      const MetricGraph g = graph_arg(0);
      const Marking m = o.marking.empty() ? cycle_basis(g) : marking_from_json(read_json_file(o.marking));
      emit(o.exact_mode ? exact_matrix_to_json(period_matrix_exact(g, m)) : matrix_to_json(period_matrix(g, m)));
      return exit_ok;
    };
  });

  auto* jdist = app.add_subcommand("jacobian-dist", "affine-invariant distance of two positive definite matrices");
  files(jdist, 2, "two matrix JSON files");
  jdist->callback([&] {
    action = [&] {
      const Matrix a = matrix_from_json(read_json_file(o.files[0]));
      const Matrix b = matrix_from_json(read_json_file(o.files[1]));
      emit({{"value", decimal(d_inv(a, b))}});
      return exit_ok;
    };
  });

  auto* sv = app.add_subcommand("shortest-vector", "minimum of a positive definite form on nonzero integer vectors");
  files(sv, 1, "matrix JSON");
  sv->add_option("--budget", o.node_budget, "enumeration node budget")->check(CLI::PositiveNumber);
  sv->callback([&] {
    action = [&] {
      const ShortestVector r = shortest_vector(matrix_from_json(read_json_file(o.files[0])), o.node_budget);
      Json w = Json::array();
      for (Eigen::Index i = 0; i < r.witness.size(); ++i) w.push_back(r.witness(i));
      emit({{"value", decimal(r.value)}, {"vector", w}});
      return exit_ok;
    };
  });

  auto* glnz = app.add_subcommand("glnz", "search for u in GL(n,Z) with u a u^T = b");
  files(glnz, 2, "two matrix JSON files");
  glnz->add_option("--radius", o.radius, "entry bound of the search")->check(CLI::Range(1, 10));
  glnz->callback([&] {
    action = [&] {
      const auto u = glnz_equivalent(matrix_from_json(read_json_file(o.files[0])),
                                     matrix_from_json(read_json_file(o.files[1])), o.radius);
      Json w = nullptr;
      if (u) {
        w = Json::array();
        for (Eigen::Index i = 0; i < u->rows(); ++i) {
          Json row = Json::array();
          for (Eigen::Index k = 0; k < u->cols(); ++k) row.push_back((*u)(i, k));
          w.push_back(row);
        }
      }
      emit({{"equivalent", u.has_value()}, {"witness", w}});
      return exit_ok;
    };
  });

  auto* c1 = app.add_subcommand("c1sets", "C1-sets of a graph");
  files(c1, 1, "graph JSON");
  c1->callback([&] {
    action = [&] {
      const MetricGraph g = graph_arg(0);
      emit({{"sets", sets_json(c1_sets(g), g)}});
      return exit_ok;
    };
  });

  auto* conn = app.add_subcommand("connectivize", "3-edge-connected quotient of a graph");
  files(conn, 1, "graph JSON");
  conn->add_option("--seed", o.seed, "randomize the order of pair contractions")->each([&](const std::string&) {
    o.has_seed = true;
  });
  conn->callback([&] {
    action = [&] {
      const MetricGraph g = graph_arg(0);
      emit(connectivization_json(three_edge_connectivize(g, {o.has_seed, o.seed}), g));
      return exit_ok;
    };
  });

  auto* cyc = app.add_subcommand("cyclic-eq", "length-preserving edge bijection matching cycles");
  files(cyc, 2, "two graph JSON files");
  cyc->callback([&] {
    action = [&] {
      const auto b = cyclically_equivalent(graph_arg(0), graph_arg(1));
      emit({{"equivalent", b.has_value()}, {"image", bijection_json(b)}});
      return exit_ok;
    };
  });

  auto* tor = app.add_subcommand("torelli", "do two graphs have isomorphic tropical Jacobians");
  files(tor, 2, "two graph JSON files");
  tor->callback([&] {
    action = [&] {
      const MetricGraph g1 = graph_arg(0), g2 = graph_arg(1);
      const TorelliResult r = tropical_torelli_equal(g1, g2);
      emit({{"equal", r.equal},
            {"first", connectivization_json(r.first, g1)},
            {"second", connectivization_json(r.second, g2)},
            {"witness", bijection_json(r.witness)}});
      return exit_ok;
    };
  });

  auto add_kind = [&](CLI::App* sub) {
    sub->add_option("--kind", o.kind, "ds0 | ds2 | ds2eps")
        ->check(CLI::IsMember({"ds0", "ds2", "ds2eps", "ds2_eps"}));
    sub->add_option("--eps", o.eps, "cutoff scale for ds2eps")->check(CLI::PositiveNumber);
  };

  auto* ten = app.add_subcommand("tensor", "Gram matrix of a tensor at a point, intrinsic coordinates");
  ten->add_option("--point", o.point, "point JSON")->required()->check(CLI::ExistingFile);
  add_kind(ten);
  ten->callback([&] {
    action = [&] {
      const SimplexPoint p = point_from_json(read_json_file(o.point));
      const TensorSpec spec = make_spec(o.kind, o.eps);
      Json j = spec_json(spec);
      j["value"] = matrix_to_json(tensor(p, spec));
      j["error"] = decimal(0);
      j["trace"] = Json::array();
      emit(j);
      return exit_ok;
    };
  });

  auto* plen = app.add_subcommand("pathlen", "length of a piecewise-linear path");
  files(plen, 1, "path JSON");
  add_kind(plen);
  plen->add_option("--tol", o.tol, "relative tolerance")->check(CLI::Range(1e-12, 0.5));
  plen->callback([&] {
    action = [&] {
      const PLPath path = path_from_json(read_json_file(o.files[0]));
      const TensorSpec spec = make_spec(o.kind, o.eps);
      const PathLength r = path_length(path, spec, o.tol);
      Json j = spec_json(spec);
      j["value"] = r.diverging ? Json("inf") : decimal(r.value);
      j["error"] = decimal(r.error);
      j["converged"] = r.converged;
      j["diverging"] = r.diverging;
      j["trace"] = trace_json(r.trace);
      emit(j);
      return r.converged || r.diverging ? exit_ok : exit_numeric;
    };
  });

  auto* dist = app.add_subcommand("dist", "distance bounds between two points");
  files(dist, 2, "two point JSON files");
  dist->add_option("--metric", o.metric, "d1 | d2 | dinf | ds0 | ds2 | ds2eps")
      ->check(CLI::IsMember({"d1", "d2", "dinf", "ds0", "ds2", "ds2eps", "ds2_eps"}));
  dist->add_option("--eps", o.eps, "cutoff scale for ds2eps")->check(CLI::PositiveNumber);
  dist->add_option("--budget", o.budget, "simplex changes allowed on a route")->check(CLI::Range(0, 1));
  dist->add_option("--refinements", o.refinements, "path subdivision stages")->check(CLI::Range(0, 8));
  dist->callback([&] {
    action = [&] {
      const SimplexPoint p = point_from_json(read_json_file(o.files[0]));
      const SimplexPoint q = point_from_json(read_json_file(o.files[1]));
      if (o.metric == "d1" || o.metric == "d2" || o.metric == "dinf") {
        const DistanceInterval r = o.metric == "d1"   ? d1(p, q, o.budget)
                                   : o.metric == "d2" ? d2(p, q, o.budget)
                                                      : dinf(p, q, o.budget);
        emit({{"metric", o.metric}, {"lower", decimal(r.lower)}, {"upper", decimal(r.upper)}});
        return exit_ok;
      }
      const TensorSpec spec = make_spec(o.metric, o.eps);
      const UpperBound r = distance_upper_bound(p, q, spec, {o.refinements, 20}, o.budget);
      Json j = {{"metric", to_string(spec.kind)}};
      if (spec.kind == TensorKind::ds2_eps) j["eps"] = decimal(spec.eps);
      j["upper"] = decimal(r.value);
      j["trace"] = trace_json(r.trace);
      emit(j);
      return exit_ok;
    };
  });

  auto* vol = app.add_subcommand("volume", "area of a 2-simplex of outer space");
  vol->add_option("--genus", o.genus_flag, "only 2 is supported")->check(CLI::IsMember({2}));
  add_kind(vol);
  vol->add_option("--tol", o.tol, "relative change between depths")->check(CLI::Range(1e-8, 0.5));
  vol->add_option("--type", o.type, "graph JSON of the simplex type (default: theta)")->check(CLI::ExistingFile);
  vol->add_option("--marking", o.marking, "marking JSON for --type")->check(CLI::ExistingFile);
  vol->callback([&] {
    action = [&] {
      MetricGraph type = theta_type();
      Marking m = theta_marking();
      if (!o.type.empty()) {
        type = graph_from_json(read_json_file(o.type));
        m = o.marking.empty() ? cycle_basis(type) : marking_from_json(read_json_file(o.marking));
      }
      const TensorSpec spec = make_spec(o.kind, o.eps);
      const VolumeResult r = simplex_area(SimplexModel(type, m), spec, o.tol);
      Json j = spec_json(spec);
      j["genus"] = 2;
      j["value"] = decimal(r.value);
      j["error"] = decimal(r.error);
      j["converged"] = r.converged;
      j["trace"] = trace_json(r.trace);
      emit(j);
      return r.converged ? exit_ok : exit_numeric;
    };
  });

  auto* teval = app.add_subcommand("tropical-eval", "evaluate a tropical polynomial (max-plus)");
  files(teval, 1, "polynomial JSON");
  teval->add_option("--x", o.x, "x coordinate (decimal or p/q)")->required();
  teval->add_option("--y", o.y, "y coordinate (decimal or p/q)")->required();
  teval->add_flag("--exact", o.exact_mode, "rational evaluation");
  teval->callback([&] {
    action = [&] {
      const TropicalPolynomial2 p = polynomial_from_json(read_json_file(o.files[0]));
      const Rational x = rational_from_json(Json(o.x), "--x"), y = rational_from_json(Json(o.y), "--y");
      const Json value = o.exact_mode ? exact(eval_exact(p, x, y)) : decimal(eval(p, to_double(x), to_double(y)));
      emit({{"value", value}});
      return exit_ok;
    };
  });

  auto* tcorn = app.add_subcommand("tropical-corners", "corner locus of a tropical polynomial");
  files(tcorn, 1, "polynomial JSON");
  tcorn->callback([&] {
    action = [&] {
      const CornerLocus locus = corner_locus(polynomial_from_json(read_json_file(o.files[0])));
      Json vertices = Json::array(), edges = Json::array();
      for (const auto& v : locus.vertices) {
        Json rays = Json::array();
        for (const auto& r : v.rays) rays.push_back({{"direction", r.primitive}, {"weight", r.weight}});
        vertices.push_back({{"point", point2_json(v.vertex)}, {"rays", rays}, {"balanced", check_balancing(v)}});
      }
      for (const auto& e : locus.edges) {
        edges.push_back({{"monomials", {e.monomial_a, e.monomial_b}},
                         {"origin", point2_json(e.origin)},
                         {"direction", e.direction},
                         {"lower", e.lower ? Json(to_string(*e.lower)) : Json(nullptr)},
                         {"upper", e.upper ? Json(to_string(*e.upper)) : Json(nullptr)},
                         {"weight", e.weight}});
      }
      emit({{"vertices", vertices}, {"edges", edges}});
      return exit_ok;
    };
  });

  auto* rep = app.add_subcommand("report", "run the acceptance suite");
  rep->add_option("--criteria", o.criteria, "criterion ids (default: all)")->check(CLI::Range(1, 10));
  rep->add_option("--seed", o.seed, "random seed");
  rep->callback([&] {
    action = [&] {
      const auto results = run_acceptance(o.criteria.empty() ? acceptance_ids() : o.criteria, o.seed);
      for (const auto& r : results) err << format_line(r) << '\n';
      const Json j = report_to_json(results);
      emit(j);
      return j["all_passed"].get<bool>() ? exit_ok : exit_failed_check;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  }

  try {
    status = action();
  } catch (const NoRouteError& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  } catch (const EnumerationOverflow& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
  return status;
}

}  // namespace tropjac
