#include "tropjac/corpus.hpp"

#include "tropjac/connectivization.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <tuple>

namespace tropjac {

MetricGraph theta_graph(const Rational& a, const Rational& b, const Rational& c) {
  return MetricGraph(2, {{0, 1, a}, {0, 1, b}, {0, 1, c}});
}

MetricGraph banana_graph(const Rational& a, const Rational& b) { return MetricGraph(2, {{0, 1, a}, {0, 1, b}}); }

MetricGraph looped_banana(const Rational& l1, const Rational& l2, const Rational& f1, const Rational& f2) {
  return MetricGraph(2, {{0, 0, l1}, {1, 1, l2}, {0, 1, f1}, {0, 1, f2}});
}

MetricGraph rose_graph(const std::vector<Rational>& petals) {
  std::vector<MetricGraph::EdgeSpec> edges;
  for (const auto& l : petals) edges.push_back({0, 0, l});
  return MetricGraph(1, std::move(edges));
}

MetricGraph k4_graph(const std::vector<Rational>& lengths) {
  if (lengths.size() != 6) throw GraphError("k4_graph: need six lengths");
  const int ends[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::vector<MetricGraph::EdgeSpec> edges;
  for (int i = 0; i < 6; ++i) edges.push_back({ends[i][0], ends[i][1], lengths[i]});
  return MetricGraph(4, std::move(edges));
}

MetricGraph dumbbell_graph(const Rational& l1, const Rational& bridge, const Rational& l2) {
  return MetricGraph(2, {{0, 0, l1}, {0, 1, bridge}, {1, 1, l2}});
}

Rational random_rational(std::mt19937_64& rng, int lo_num, int hi_num, int den) {
  return Rational(std::uniform_int_distribution<int>(lo_num, hi_num)(rng), den);
}

namespace {

MetricGraph random_multigraph(std::mt19937_64& rng, int vertices, int edges) {
  std::uniform_int_distribution<int> vertex(0, vertices - 1);
  std::vector<MetricGraph::EdgeSpec> specs;
  for (int e = 0; e < edges; ++e) specs.push_back({vertex(rng), vertex(rng), random_rational(rng, 1, 1000, 1000)});
  return MetricGraph(vertices, std::move(specs));
}

template <class Accept>
MetricGraph sample(std::mt19937_64& rng, int vertices, int edges, const Accept& accept, const char* what) {
  for (int attempt = 0; attempt < 200000; ++attempt) {
    MetricGraph g = random_multigraph(rng, vertices, edges);
    if (accept(g)) return g;
  }
  throw std::runtime_error(std::string(what) + ": sampling failed");
}

bool bridgeless_connected(const MetricGraph& g) { return is_connected(g) && bridges(g).empty(); }

}  // namespace

MetricGraph random_outer_graph(std::mt19937_64& rng, int genus, int max_edges) {
  if (genus < 2) throw GraphError("random_outer_graph: genus must be at least 2");
  const int max_vertices = std::min(2 * (genus - 1), max_edges - genus + 1);
  if (max_vertices < 1) throw GraphError("random_outer_graph: max_edges too small for the genus");
  const int vertices = std::uniform_int_distribution<int>(1, max_vertices)(rng);
  return sample(rng, vertices, vertices + genus - 1, [](const MetricGraph& g) { return validate_outer(g).is_outer_space_point; },
                "random_outer_graph");
}

MetricGraph random_bridgeless_graph(std::mt19937_64& rng, int max_vertices, int max_extra_edges) {
  const int vertices = std::uniform_int_distribution<int>(2, std::max(2, max_vertices))(rng);
  const int edges = vertices + std::uniform_int_distribution<int>(0, max_extra_edges)(rng);
  return sample(rng, vertices, edges, bridgeless_connected, "random_bridgeless_graph");
}

MetricGraph random_three_edge_connected(std::mt19937_64& rng, int max_vertices, int max_extra_edges) {
  const int vertices = std::uniform_int_distribution<int>(2, std::max(2, max_vertices))(rng);
  const int edges = (3 * vertices + 1) / 2 + std::uniform_int_distribution<int>(0, max_extra_edges)(rng);
  return sample(rng, vertices, edges,
                [](const MetricGraph& g) { return bridgeless_connected(g) && is_three_edge_connected(g); },
                "random_three_edge_connected");
}

IntMatrix random_unimodular(std::mt19937_64& rng, int n, int steps) {
  IntMatrix u = IntMatrix::Identity(n, n);
  if (n < 2) return u;
  std::uniform_int_distribution<int> row(0, n - 1), coin(0, 1);
  for (int s = 0; s < steps; ++s) {
    const int i = row(rng);
    int j = row(rng);
    while (j == i) j = row(rng);
    if (coin(rng))
      u.row(i) += u.row(j);
    else
      u.row(i) -= u.row(j);
  }
  return u;
}

Marking transform_marking(const Marking& m, const IntMatrix& u) {
  const int n = m.rank();
  if (u.rows() != n || u.cols() != n) throw MarkingError("transform_marking: matrix size does not match the rank");
  const std::size_t edges = n > 0 ? m.basis.front().size() : 0;
  Marking out;
  out.basis.assign(static_cast<std::size_t>(n), IntegerChain(edges, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t e = 0; e < edges; ++e) out.basis[i][e] += u(i, j) * m.basis[j][e];
  return out;
}

Marking random_marking(std::mt19937_64& rng, const MetricGraph& g, int steps) {
  Marking base = cycle_basis(g);
  return transform_marking(base, random_unimodular(rng, base.rank(), steps));
}

std::vector<SimplexModel> neighbor_simplices(const SimplexModel& a, int edge) {
  const MetricGraph& t = a.type();
  if (edge < 0 || edge >= t.edge_count()) throw GraphError("neighbor_simplices: no such edge");
  const Edge& cut = t.edge(edge);
  if (cut.is_loop()) throw GraphError("neighbor_simplices: a loop has no face");
  const int s = cut.src, d = cut.dst;

  // Surviving edges with d merged into s; half-edges at the merged vertex.
  struct Half {
    int edge;  // index into `kept`
    bool head;
  };
  std::vector<int> kept;
  std::vector<std::pair<int, int>> ends;
  std::vector<Half> halves;
  std::vector<bool> was_at_d;
  for (const auto& e : t.edges()) {
    if (e.id == edge) continue;
    const int k = static_cast<int>(kept.size());
    kept.push_back(e.id);
    int u = e.src, v = e.dst;
    if (u == d || u == s) {
      halves.push_back({k, false});
      was_at_d.push_back(u == d);
      u = s;
    }
    if (v == d || v == s) {
      halves.push_back({k, true});
      was_at_d.push_back(v == d);
      v = s;
    }
    ends.emplace_back(u, v);
  }
  const int h = static_cast<int>(halves.size());
  if (h > 24) throw GraphError("neighbor_simplices: merged vertex has too many half-edges");
  const int edges = t.edge_count();
  const Rational unit(1, edges);

  std::uint32_t original = 0;
  for (int i = 0; i < h; ++i)
    if (was_at_d[i]) original |= std::uint32_t{1} << i;
  const std::uint32_t all = (std::uint32_t{1} << h) - 1;

  std::vector<SimplexModel> out;
  for (std::uint32_t mask = 0; mask <= all; ++mask) {
    // mask = half-edges moved to vertex d; half-edge 0 stays at s.
    if (mask & 1) continue;
    const int moved = std::popcount(mask);
    if (moved < 2 || h - moved < 2) continue;
    if (mask == original || mask == (all & ~original)) continue;

    auto e2 = ends;
    for (int i = 0; i < h; ++i)
      if (mask >> i & 1) (halves[i].head ? e2[halves[i].edge].second : e2[halves[i].edge].first) = d;
    std::vector<MetricGraph::EdgeSpec> specs;
    for (const auto& [u, v] : e2) specs.push_back({u, v, unit});
    specs.push_back({s, d, unit});
    MetricGraph b(t.vertex_count(), std::move(specs));
    if (!validate_outer(b).is_outer_space_point) continue;

    Marking lifted;
    for (const auto& chain : a.marking().basis) {
      IntegerChain c;
      std::int64_t at_d = 0;
      for (std::size_t k = 0; k < kept.size(); ++k) {
        const auto coef = chain[static_cast<std::size_t>(kept[k])];
        c.push_back(coef);
        if (e2[k].second == d) at_d += coef;
        if (e2[k].first == d) at_d -= coef;
      }
      c.push_back(-at_d);
      lifted.basis.push_back(std::move(c));
    }
    try {
      SimplexModel candidate(b, lifted);
      auto faces = shared_faces(a, candidate);
      if (!faces.empty() && faces.front().face_edges == edges) continue;  // same simplex relabeled
      out.push_back(std::move(candidate));
    } catch (const GraphError&) {
    } catch (const OuterSpaceError&) {
    }
  }
  return out;
}

std::vector<TropicalPolynomial2> tropical_corpus() {
  auto poly = [](std::initializer_list<std::tuple<int, int, const char*>> terms) {
    TropicalPolynomial2 p;
    for (auto [j, k, a] : terms) p.monomials.push_back({j, k, parse_rational(a)});
    return p;
  };
  return {
      poly({{0, 0, "0"}, {1, 0, "0"}, {0, 1, "0"}}),
      poly({{0, 0, "1"}, {1, 0, "0"}, {0, 1, "-1/2"}}),
      poly({{0, 0, "0"}, {1, 0, "1"}, {0, 1, "1"}, {2, 0, "0"}, {1, 1, "3/2"}, {0, 2, "0"}}),
      poly({{0, 0, "0"}, {1, 0, "2"}, {2, 0, "3"}, {3, 0, "3"}, {0, 1, "2"}, {1, 1, "4"}, {2, 1, "4"},
            {0, 2, "3"}, {1, 2, "4"}, {0, 3, "3"}}),
      poly({{0, 0, "0"}, {1, 0, "0"}, {2, 0, "2"}}),
      poly({{0, 0, "0"}, {1, 0, "0"}, {2, 0, "0"}}),
      poly({{0, 0, "0"}, {2, 0, "0"}, {0, 2, "0"}}),
      poly({{0, 0, "1/3"}, {1, 0, "-2/7"}, {0, 1, "5/4"}, {1, 1, "0"}}),
      poly({{0, 0, "0"}, {3, 1, "-1"}, {1, 3, "-1"}, {2, 2, "-3/2"}, {1, 0, "1/5"}}),
      poly({{0, 0, "-1"}, {1, 0, "0"}, {0, 1, "0"}, {1, 1, "-1"}, {2, 1, "-7/2"}, {1, 2, "-7/2"}}),
  };
}

}  // namespace tropjac
