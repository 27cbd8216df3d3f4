#include "tropjac/report.hpp"

#include "tropjac/connectivization.hpp"
#include "tropjac/corpus.hpp"
#include "tropjac/outer_metrics.hpp"
#include "tropjac/spd.hpp"
#include "tropjac/tropical_plane.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace tropjac {

namespace {

using Rng = std::mt19937_64;

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Vector random_interior(Rng& rng, int m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector x(m);
  for (int e = 0; e < m; ++e) x(e) = u(rng);
  x /= x.sum();
  x(m - 1) = 1 - x.head(m - 1).sum();
  return x;
}

// 1. Theta period matrix, exact.
void theta_period(CriterionResult& r, Rng& rng) {
  std::vector<std::array<Rational, 3>> triples{{Rational(1, 2), Rational(3, 10), Rational(1, 5)},
                                               {Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
  for (int i = 0; i < 30; ++i) {
    Rational a = random_rational(rng, 1, 499, 1000), b = random_rational(rng, 1, 499, 997);
    triples.push_back({a, b, 1 - a - b});
  }
  int agree = 0;
  for (const auto& [a, b, c] : triples) {
    auto p = period_matrix_exact(theta_graph(a, b, c), theta_marking());
    const std::vector<std::vector<Rational>> expected{{a + b, b}, {b, 1 - a}};
    if (p == expected) ++agree;
  }
  Matrix p = period_matrix(theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5)), theta_marking());
  r.details = {{"triples", triples.size()}, {"exact_matches", agree}, {"example", matrix_to_json(p)}};
  r.passed = agree == static_cast<int>(triples.size());
  r.summary = std::to_string(agree) + "/" + std::to_string(triples.size()) +
              " exact matches; (0.5,0.3,0.2) -> [[" + format_decimal(p(0, 0)) + "," + format_decimal(p(0, 1)) + "],[" +
              format_decimal(p(1, 0)) + "," + format_decimal(p(1, 1)) + "]]";
}

// 2. Period matrices are positive definite.
void positive_definite(CriterionResult& r, Rng& rng) {
  int ok = 0;
  double margin = std::numeric_limits<double>::infinity();
  std::map<int, int> by_genus;
  for (int i = 0; i < 1000; ++i) {
    const int genus = std::uniform_int_distribution<int>(2, 4)(rng);
    MetricGraph g = random_outer_graph(rng, genus, 10);
    Matrix p = period_matrix(g, cycle_basis(g));
    ++by_genus[genus];
    Eigen::LLT<Matrix> llt(p);
    const double lo = jacobi_eigen(p).values(0);
    if (llt.info() == Eigen::Success && lo > 0) ++ok;
    margin = std::min(margin, lo);
  }
  r.details = {{"graphs", 1000}, {"cholesky_ok", ok}, {"min_eigenvalue", margin},
               {"genus_counts", {by_genus[2], by_genus[3], by_genus[4]}}};
  r.passed = ok == 1000 && margin > 0;
  r.summary = std::to_string(ok) + "/1000 Cholesky ok, smallest eigenvalue " + fmt("%.3e", margin);
}

// 3. Torelli decision on the looped banana pair and on perturbed pairs.
void torelli_suite(CriterionResult& r, Rng& rng) {
  MetricGraph g1 = looped_banana(Rational(7, 20), Rational(7, 20), Rational(1, 10), Rational(1, 5));
  MetricGraph g2 = looped_banana(Rational(7, 20), Rational(7, 20), Rational(3, 20), Rational(3, 20));
  auto t = tropical_torelli_equal(g1, g2);
  const bool cyc = cyclically_equivalent(g1, g2).has_value();
  const Matrix p1 = period_matrix(g1, cycle_basis(g1)), p2 = period_matrix(g2, cycle_basis(g2));
  auto u = glnz_equivalent(p1, p2, 3);
  const bool witness_ok = u && (change_marking(p1, *u) - p2).cwiseAbs().maxCoeff() < 1e-9;

  int perturbed_false = 0;
  for (int i = 0; i < 20; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 3)(rng), 8);
    auto lengths = g.exact_lengths();
    const int e = std::uniform_int_distribution<int>(0, g.edge_count() - 1)(rng);
    lengths[e] += Rational(1, 997);
    if (!tropical_torelli_equal(g, g.with_exact_lengths(lengths)).equal) ++perturbed_false;
  }
  r.details = {{"torelli_equal", t.equal}, {"cyclically_equivalent", cyc}, {"glnz_witness", witness_ok},
               {"perturbed_pairs_false", perturbed_false}};
  r.passed = t.equal && !cyc && witness_ok && perturbed_false == 20;
  r.summary = std::string("torelli=") + (t.equal ? "true" : "false") + " cyclic=" + (cyc ? "true" : "false") +
              " glnz witness=" + (witness_ok ? "yes" : "no") + "; perturbed pairs false " +
              std::to_string(perturbed_false) + "/20";
}

// 4. Connectivization does not depend on the order of pair contractions.
void order_independence(CriterionResult& r, Rng& rng) {
  int graphs_ok = 0, genus_ok = 0;
  for (int i = 0; i < 50; ++i) {
    MetricGraph g = random_bridgeless_graph(rng, 6, 4);
    std::vector<MetricGraph> quotients{three_edge_connectivize(g).quotient};
    for (int k = 0; k < 5; ++k) quotients.push_back(three_edge_connectivize(g, {true, rng()}).quotient);
    bool all = true, keep = true;
    for (std::size_t a = 0; a < quotients.size(); ++a) {
      keep = keep && genus(quotients[a]) == genus(g);
      for (std::size_t b = a + 1; b < quotients.size(); ++b)
        all = all && cyclically_equivalent(quotients[a], quotients[b]).has_value();
    }
    graphs_ok += all;
    genus_ok += keep;
  }
  r.details = {{"graphs", 50}, {"orders_per_graph", 5}, {"equivalent", graphs_ok}, {"genus_preserved", genus_ok}};
  r.passed = graphs_ok == 50 && genus_ok == 50;
  r.summary = "pairwise cyclically equivalent on " + std::to_string(graphs_ok) + "/50, genus preserved on " +
              std::to_string(genus_ok) + "/50";
}

// 5. C1-sets of 3-edge-connected graphs are singletons; named graphs.
void c1_structure(CriterionResult& r, Rng& rng) {
  auto singletons = [](const MetricGraph& g) {
    auto sets = c1_sets(g);
    if (static_cast<int>(sets.size()) != g.edge_count()) return false;
    for (std::size_t e = 0; e < sets.size(); ++e)
      if (sets[e].edges != std::vector<int>{static_cast<int>(e)}) return false;
    return true;
  };
  std::vector<Rational> k4l;
  for (int i = 1; i <= 6; ++i) k4l.emplace_back(i, 21);
  int ok = singletons(k4_graph(k4l));
  for (int i = 0; i < 10; ++i) ok += singletons(random_three_edge_connected(rng, 5, 3));
  auto as_lists = [](const MetricGraph& g) {
    std::vector<std::vector<int>> out;
    for (const auto& s : c1_sets(g)) out.push_back(s.edges);
    return out;
  };
  const bool theta = as_lists(theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5))) ==
                     std::vector<std::vector<int>>{{0}, {1}, {2}};
  const bool banana = as_lists(banana_graph(Rational(1, 2), Rational(1, 2))) == std::vector<std::vector<int>>{{0, 1}};
  const bool looped = as_lists(looped_banana(Rational(7, 20), Rational(7, 20), Rational(1, 10), Rational(1, 5))) ==
                      std::vector<std::vector<int>>{{0}, {1}, {2, 3}};
  r.details = {{"three_edge_connected_singletons", ok}, {"theta", theta}, {"banana", banana}, {"looped_banana", looped}};
  r.passed = ok == 11 && theta && banana && looped;
  r.summary = "singletons on " + std::to_string(ok) + "/11; theta " + (theta ? "ok" : "MISMATCH") + ", banana " +
              (banana ? "ok" : "MISMATCH") + ", looped banana " + (looped ? "ok" : "MISMATCH");
}

// 6. Distances blow up toward a missing face.
void divergence(CriterionResult& r, Rng&) {
  SimplexModel m(theta_type(), theta_marking());
  const SimplexPoint x0 = make_point(m, Vector{{1.0 / 3, 1.0 / 3, 1 - 2.0 / 3}});
  const SimplexPoint start = make_point(m, Vector{{0.25, 0.25, 0.5}});
  std::vector<double> dinv, len;
  for (int k = 1; k <= 8; ++k) {
    const double t = std::pow(10.0, -k);
    SimplexPoint xt = make_point(m, Vector{{t, t, 1 - 2 * t}});
    dinv.push_back(d_inv(period_map(x0), period_map(xt)));
    len.push_back(path_length(straight_path(start, xt), {TensorKind::ds2, 0}).value);
  }
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return true;
  };
  r.details = {{"d_inv", dinv}, {"ds2_length", len}};
  r.passed = increasing(dinv) && increasing(len) && dinv.back() > 10 && len.back() > 10;
  r.summary = "k=8: d_inv " + fmt("%.4f", dinv.back()) + ", ds2 length " + fmt("%.4f", len.back()) +
              (increasing(dinv) && increasing(len) ? ", both strictly increasing" : ", NOT monotone");
}

// 7. Finite area of the theta simplex.
void finite_volume(CriterionResult& r, Rng&) {
  SimplexModel m(theta_type(), theta_marking());
  auto last_change = [](const VolumeResult& v) {
    const auto& t = v.trace;
    return t.size() < 2 ? 1.0 : std::abs(t.back() - t[t.size() - 2]) / std::abs(t.back());
  };
  const TensorSpec ds2{TensorKind::ds2, 0}, ds2e{TensorKind::ds2_eps, 0.05};
  auto area = simplex_area(m, ds2, 1e-3);
  auto area_e = simplex_area(m, ds2e, 1e-3);
  std::vector<double> ratios;
  for (double eps : {1e-2, 1e-3, 1e-4}) ratios.push_back(corner_area(m, 2, eps, ds2, 1e-4).value / std::sqrt(eps));
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double spread = (hi - lo) / lo;
  double slope = 0;
  for (int apex = 0; apex < 3; ++apex) {
    const double s = corner_slope(m, apex, ds2, {1e-3, 1e-4, 1e-5, 1e-6});
    slope = apex == 0 ? s : std::min(slope, s);
  }
  r.details = {{"area_ds2", area.value},         {"area_ds2_change", last_change(area)},
               {"area_ds2_trace", area.trace},   {"area_ds2eps", area_e.value},
               {"area_ds2eps_change", last_change(area_e)},
               {"corner_ratio", ratios},         {"corner_spread", spread},
               {"log_log_slope", slope}};
  r.passed = area.converged && last_change(area) < 0.01 && area_e.converged && last_change(area_e) < 0.01 &&
             spread < 0.25 && slope >= -1.6;
  r.summary = "area ds2 " + fmt("%.6f", area.value) + " (change " + fmt("%.1e", last_change(area)) + "), ds2eps " +
              fmt("%.6f", area_e.value) + " (change " + fmt("%.1e", last_change(area_e)) + "), corner/sqrt(eps) spread " +
              fmt("%.3f", spread) + ", slope " + fmt("%.3f", slope);
}

// 8. Balancing and a brute-force grid check of the corner locus.
void balancing(CriterionResult& r, Rng&) {
  int stars = 0, balanced = 0;
  long long points = 0, agree = 0;
  for (const auto& p : tropical_corpus()) {
    auto locus = corner_locus(p);
    for (const auto& v : locus.vertices) {
      ++stars;
      balanced += check_balancing(v);
    }
    for (int i = 0; i < 200; ++i)
      for (int k = 0; k < 200; ++k) {
        const Rational x(i - 100, 25), y(k - 100, 25);
        const double xd = to_double(x), yd = to_double(y);
        double best = -std::numeric_limits<double>::infinity();
        int hits = 0;
        for (const auto& m : p.monomials) best = std::max(best, m.j * xd + m.k * yd + to_double(m.a));
        for (const auto& m : p.monomials) hits += std::abs(m.j * xd + m.k * yd + to_double(m.a) - best) <= 1e-9;
        ++points;
        agree += (hits >= 2) == locus.contains({x, y});
      }
  }
  r.details = {{"polynomials", 10}, {"vertex_stars", stars}, {"balanced", balanced}, {"grid_points", points},
               {"grid_agreement", agree}};
  r.passed = stars > 0 && balanced == stars && agree == points;
  r.summary = std::to_string(balanced) + "/" + std::to_string(stars) + " stars balanced; grid agreement " +
              std::to_string(agree) + "/" + std::to_string(points);
}

// 9. Metric axioms for the distance upper bounds; tensor gluing.
void metric_axioms(CriterionResult& r, Rng& rng) {
  int symmetric = 0, triangle = 0, ordered = 0;
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 3)(rng), 7);
    SimplexModel m(g, random_marking(rng, g, 4));
    SimplexPoint p = make_point(m, random_interior(rng, m.edge_count()));
    SimplexPoint q = make_point(m, random_interior(rng, m.edge_count()));
    SimplexPoint s = make_point(m, random_interior(rng, m.edge_count()));
    bool sym = true, tri = true, ord = true;
    for (auto how : {Combination::sum, Combination::root_sum_square, Combination::max}) {
      auto pq = combined_distance(p, q, how), qp = combined_distance(q, p, how);
      auto qs = combined_distance(q, s, how), ps = combined_distance(p, s, how);
      worst = std::max(worst, std::abs(pq.upper - qp.upper));
      sym = sym && std::abs(pq.upper - qp.upper) <= 1e-9;
      tri = tri && ps.upper <= pq.upper + qs.upper + 1e-9;
      ord = ord && pq.lower <= pq.upper && qs.lower <= qs.upper && ps.lower <= ps.upper;
    }
    symmetric += sym;
    triangle += tri;
    ordered += ord;
  }

  int faces = 0, glued = 0;
  double gap = 0;
  for (int attempt = 0; faces < 50 && attempt < 2000; ++attempt) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 3)(rng), 7);
    std::vector<int> non_loops;
    for (const auto& e : g.edges())
      if (!e.is_loop()) non_loops.push_back(e.id);
    if (non_loops.empty()) continue;
    SimplexModel a(g, random_marking(rng, g, 3));
    const int cut = non_loops[std::uniform_int_distribution<std::size_t>(0, non_loops.size() - 1)(rng)];
    auto neighbors = neighbor_simplices(a, cut);
    if (neighbors.empty()) continue;
    const SimplexModel& b = neighbors[std::uniform_int_distribution<std::size_t>(0, neighbors.size() - 1)(rng)];
    for (const auto& face : shared_faces(a, b)) {
      if (face.face_edges != a.edge_count() - 1 || face.forest_first != std::vector<int>{cut}) continue;
      ++faces;
      const int k = face.face_edges;
      Vector z = random_interior(rng, k);
      Vector w = Vector::Zero(k);
      for (int t = 0; t < k; ++t) w(t) = std::uniform_real_distribution<double>(-1, 1)(rng);
      w.array() -= w.mean();
      auto lift = [&](const Vector& v, const std::vector<int>& map) {
        Vector x = Vector::Zero(static_cast<Eigen::Index>(map.size()));
        for (std::size_t e = 0; e < map.size(); ++e)
          if (map[e] >= 0) x(static_cast<Eigen::Index>(e)) = v(map[e]);
        return x;
      };
      bool ok = true;
      const TensorSpec specs[] = {{TensorKind::ds0, 0}, {TensorKind::ds2, 0}, {TensorKind::ds2_eps, 0.8 / (6 * a.genus())}};
      for (const auto& spec : specs) {
        const double qa = a.quadratic(lift(z, face.face_edge_first), lift(w, face.face_edge_first), spec);
        const double qb = b.quadratic(lift(z, face.face_edge_second), lift(w, face.face_edge_second), spec);
        const double d = std::abs(qa - qb) / std::max(1.0, std::abs(qa));
        gap = std::max(gap, d);
        ok = ok && d <= 1e-9;
      }
      glued += ok;
      break;
    }
  }
  r.details = {{"triples", 200},  {"symmetric", symmetric}, {"triangle", triangle}, {"lower_le_upper", ordered},
               {"max_asymmetry", worst}, {"faces", faces}, {"glued", glued}, {"max_gluing_gap", gap}};
  r.passed = symmetric == 200 && triangle == 200 && ordered == 200 && faces == 50 && glued == 50;
  r.summary = "symmetry " + std::to_string(symmetric) + "/200, triangle " + std::to_string(triangle) +
              "/200; gluing " + std::to_string(glued) + "/" + std::to_string(faces) + " faces, max gap " +
              fmt("%.1e", gap);
}

// 10. Fundamental-cycle bases are principal; index-scaled bases are not.
void principality(CriterionResult& r, Rng& rng) {
  int pass = 0, rejected = 0;
  for (int i = 0; i < 100; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 4)(rng), 10);
    Marking m = cycle_basis(g);
    pass += principality_check(g, m);
    const int scale = std::uniform_int_distribution<int>(2, 3)(rng);
    const std::size_t row = std::uniform_int_distribution<std::size_t>(0, m.basis.size() - 1)(rng);
    for (auto& c : m.basis[row]) c *= scale;
    rejected += !principality_check(g, m);
  }
  r.details = {{"graphs", 100}, {"fundamental_pass", pass}, {"scaled_rejected", rejected}};
  r.passed = pass == 100 && rejected == 100;
  r.summary = "fundamental bases principal " + std::to_string(pass) + "/100, scaled bases rejected " +
              std::to_string(rejected) + "/100";
}

struct Entry {
  const char* title;
  double limit;
  void (*run)(CriterionResult&, Rng&);
};

const std::map<int, Entry>& registry() {
  static const std::map<int, Entry> r{
      {1, {"theta period matrix", 1, theta_period}},
      {2, {"positive definiteness", 10, positive_definite}},
      {3, {"torelli suite", 30, torelli_suite}},
      {4, {"connectivization order-independence", 60, order_independence}},
      {5, {"C1-set structure", 10, c1_structure}},
      {6, {"completeness/divergence probe", 10, divergence}},
      {7, {"finite volume n=2", 300, finite_volume}},
      {8, {"balancing", 30, balancing}},
      {9, {"metric axioms and gluing", 60, metric_axioms}},
      {10, {"principality", 10, principality}},
  };
  return r;
}

}  // namespace

std::vector<int> acceptance_ids() {
  std::vector<int> ids;
  for (const auto& [id, e] : registry()) ids.push_back(id);
  return ids;
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  auto it = registry().find(id);
  if (it == registry().end()) throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.title = it->second.title;
  r.time_limit = it->second.limit;
  Rng rng(seed + static_cast<std::uint64_t>(id));
  const auto t0 = std::chrono::steady_clock::now();
  try {
    it->second.run(r, rng);
  } catch (const std::exception& e) {
    r.passed = false;
    r.summary = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.time_limit) {
    r.passed = false;
    r.summary += "; exceeded time limit";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, seed));
  return out;
}

Json report_to_json(const std::vector<CriterionResult>& results) {
  Json items = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    items.push_back({{"id", r.id},
                     {"title", r.title},
                     {"passed", r.passed},
                     {"summary", r.summary},
                     {"seconds", decimal(r.seconds)},
                     {"time_limit", decimal(r.time_limit)},
                     {"details", r.details}});
  }
  return {{"all_passed", all}, {"criteria", items}};
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << " " << r.title << " (" << fmt("%.2f", r.seconds) << " s, limit "
    << fmt("%g", r.time_limit) << " s): " << r.summary;
  return s.str();
}

}  // namespace tropjac
