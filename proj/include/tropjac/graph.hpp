#pragma once

#include "tropjac/rational.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tropjac {

/// Raised when an operation's input violates its precondition.
class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Edge {
  int id = 0;
  int src = 0;
  int dst = 0;
  Rational exact;      // authoritative length
  double length = 0;   // cached to_double(exact)

  bool is_loop() const { return src == dst; }
};

/// Oriented multigraph with nonnegative edge lengths. Loops and parallel
/// edges are allowed. Edge ids are dense 0..E-1 and the (src,dst) order fixes
/// the orientation that all chain coefficients refer to.
///
/// Every length is held as an exact rational; the double is a cache. Graphs
/// built from doubles take the shortest round-trip decimal of each value.
class MetricGraph {
 public:
  struct EdgeSpec {
    int src;
    int dst;
    Rational length;
  };

  MetricGraph() = default;
  MetricGraph(int vertex_count, std::vector<EdgeSpec> edges);

  static MetricGraph from_doubles(int vertex_count,
                                  std::span<const std::pair<int, int>> ends,
                                  std::span<const double> lengths);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

  std::vector<double> lengths() const;
  std::vector<Rational> exact_lengths() const;
  double total_length() const;
  Rational exact_total_length() const;
  bool all_positive() const;

  /// Same topology, new lengths (one per edge, in id order).
  MetricGraph with_lengths(std::span<const double> lengths) const;
  MetricGraph with_exact_lengths(std::span<const Rational> lengths) const;

  /// Number of edge ends at v; a loop contributes two.
  int valence(int v) const;

  friend bool operator==(const MetricGraph& a, const MetricGraph& b);

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
};

struct ValidityReport {
  bool is_connected = false;
  int min_valence = 0;
  std::vector<int> separating_edges;
  bool is_outer_space_point = false;
};

/// Subgraph that is connected with every vertex of subgraph-valence 2.
struct CycleSubgraph {
  std::vector<int> edges;  // sorted ids
  double total_length = 0;
  Rational exact_length;
};

struct Contraction {
  MetricGraph graph;
  std::vector<int> old_to_new;  // -1 for the contracted edge
};

bool is_connected(const MetricGraph& g);

ValidityReport validate_outer(const MetricGraph& g);

/// |E| - |V| + 1. Throws GraphError on disconnected input.
int genus(const MetricGraph& g);

/// Edges whose removal disconnects g, ascending. Loops are never bridges.
std::vector<int> bridges(const MetricGraph& g);

/// Pairs {e1,e2} (e1 < e2), neither a bridge, whose joint removal
/// disconnects g. Throws GraphError if g has a bridge.
std::vector<std::pair<int, int>> separating_pairs(const MetricGraph& g);

/// Merges the endpoints of e and drops it. Surviving edges keep their
/// relative order and are re-numbered densely. Throws on a loop.
Contraction contract_edge(const MetricGraph& g, int e);

/// All cycle subgraphs, sorted by exact length then by edge-id list.
/// Exponential in the worst case; meant for graphs with at most ~16 edges.
std::vector<CycleSubgraph> enumerate_cycles(const MetricGraph& g);

/// Length of the shortest cycle subgraph. Throws on genus 0 or a
/// non-positive length.
double systole(const MetricGraph& g);

/// Scales lengths so they sum to 1 (exactly, in rational arithmetic).
MetricGraph normalize(const MetricGraph& g);

/// Bridges of the subgraph formed by the edges with keep[e] (all vertices
/// retained; works across components).
std::vector<int> bridges_in(const MetricGraph& g, const std::vector<bool>& keep);

/// Connected-component label per vertex using only edges with keep[e].
std::vector<int> component_labels(const MetricGraph& g, const std::vector<bool>& keep, int* count = nullptr);

}  // namespace tropjac
