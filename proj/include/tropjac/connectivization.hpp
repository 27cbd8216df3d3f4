#pragma once

#include "tropjac/graph.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tropjac {

/// Edge-id set S (sorted) with Gamma(S) a cycle and Gamma - S bridgeless.
struct C1Set {
  std::vector<int> edges;

  friend bool operator==(const C1Set&, const C1Set&) = default;
  friend auto operator<=>(const C1Set&, const C1Set&) = default;
};

/// A 3-edge-connected quotient with its canonical correspondence to the
/// C1-sets of the input (after bridge contraction). sets[k] is the C1-set
/// carried by quotient edge edge_of_set[k]; quotient lengths are the exact
/// sums over sets.
struct Connectivization {
  MetricGraph quotient;
  std::vector<C1Set> sets;           // in input edge ids
  std::vector<int> edge_of_set;      // quotient edge id per set
  std::vector<int> input_edge;       // input edge id that survives as each quotient edge
  std::vector<int> contracted_bridges;
  std::vector<int> contracted_pair_edges;  // input ids contracted by pair steps, in order
};

/// Bijection E(g1) -> E(g2): image[e] is the edge of g2 assigned to e.
struct EdgeBijection {
  std::vector<int> image;
};

struct TorelliResult {
  bool equal = false;
  Connectivization first;
  Connectivization second;
  std::optional<EdgeBijection> witness;  // between the two quotients
};

/// How operation (B) picks the next separating pair.
struct PairOrder {
  bool randomized = false;
  std::uint64_t seed = 0;
};

/// Vertices are the components of g - s; the edges of s (ascending id) are
/// re-attached between them with their lengths.
MetricGraph contracted_complement(const MetricGraph& g, const std::vector<int>& s);

bool is_c1_set(const MetricGraph& g, const std::vector<int>& s);

/// All C1-sets, sorted by their smallest edge. Throws on a bridge.
std::vector<C1Set> c1_sets(const MetricGraph& g);

/// Contracts bridges until none remain. old_to_new (optional) receives the
/// surviving-edge map, -1 for contracted edges.
MetricGraph two_edge_connectivize(const MetricGraph& g, std::vector<int>* old_to_new = nullptr);

Connectivization three_edge_connectivize(const MetricGraph& g, PairOrder order = {});

/// Whether every removal of one or two edges keeps g connected.
bool is_three_edge_connected(const MetricGraph& g);

/// Exhaustive search over length-preserving bijections (exact lengths)
/// that carry the cycle subgraphs of g1 onto those of g2.
std::optional<EdgeBijection> cyclically_equivalent(const MetricGraph& g1, const MetricGraph& g2);

/// Isomorphic tropical Jacobians iff the 3-edge connectivizations are
/// cyclically equivalent.
TorelliResult tropical_torelli_equal(const MetricGraph& g1, const MetricGraph& g2);

}  // namespace tropjac
