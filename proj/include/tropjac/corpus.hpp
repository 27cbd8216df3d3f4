#pragma once

#include "tropjac/homology.hpp"
#include "tropjac/outer_metrics.hpp"
#include "tropjac/tropical_plane.hpp"

#include <random>
#include <vector>

namespace tropjac {

// Named graphs. Edge ids follow argument order.
MetricGraph theta_graph(const Rational& a, const Rational& b, const Rational& c);  // three edges 0 -> 1
MetricGraph banana_graph(const Rational& a, const Rational& b);                    // two edges 0 -> 1
/// Loops l1 at vertex 0 and l2 at vertex 1, joined by f1 and f2 (both 0 -> 1).
MetricGraph looped_banana(const Rational& l1, const Rational& l2, const Rational& f1, const Rational& f2);
MetricGraph rose_graph(const std::vector<Rational>& petals);
MetricGraph k4_graph(const std::vector<Rational>& lengths);  // six edges, pairs (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
MetricGraph dumbbell_graph(const Rational& l1, const Rational& bridge, const Rational& l2);

/// Uniform random rational in [lo, hi] with the given denominator.
Rational random_rational(std::mt19937_64& rng, int lo_num, int hi_num, int den);

/// Connected, bridgeless, valence >= 3 graph of the given genus with at
/// most max_edges edges (rejection sampling over random multigraphs).
MetricGraph random_outer_graph(std::mt19937_64& rng, int genus, int max_edges);
/// Connected bridgeless graph with 2..max_vertices vertices; valence-2
/// vertices allowed, so separating pairs are common.
MetricGraph random_bridgeless_graph(std::mt19937_64& rng, int max_vertices, int max_extra_edges);
/// 3-edge-connected graph with at least two vertices.
MetricGraph random_three_edge_connected(std::mt19937_64& rng, int max_vertices, int max_extra_edges);

/// Unimodular n x n matrix from random elementary operations.
IntMatrix random_unimodular(std::mt19937_64& rng, int n, int steps);
/// The fundamental-cycle basis transformed by a random unimodular matrix.
Marking random_marking(std::mt19937_64& rng, const MetricGraph& g, int steps);
Marking transform_marking(const Marking& m, const IntMatrix& u);

/// Marked simplices other than `a` whose closure contains the face where
/// edge `edge` of `a` has length zero (all other splittings of the merged
/// vertex that give valid types). The new edge takes the last id.
std::vector<SimplexModel> neighbor_simplices(const SimplexModel& a, int edge);

/// Ten small tropical polynomials with integer and fractional
/// coefficients, including degenerate collinear and weight > 1 cases.
std::vector<TropicalPolynomial2> tropical_corpus();

}  // namespace tropjac
