#include "tropjac/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tropjac {

MetricGraph::MetricGraph(int vertex_count, std::vector<EdgeSpec> edges) : vertex_count_(vertex_count) {
  if (vertex_count <= 0) throw GraphError("graph needs at least one vertex");
  edges_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto& spec = edges[i];
    if (spec.src < 0 || spec.src >= vertex_count || spec.dst < 0 || spec.dst >= vertex_count)
      throw GraphError("edge " + std::to_string(i) + " has an endpoint outside 0.." +
                       std::to_string(vertex_count - 1));
    if (spec.length < 0) throw GraphError("edge " + std::to_string(i) + " has negative length");
    Edge e;
    e.id = static_cast<int>(i);
    e.src = spec.src;
    e.dst = spec.dst;
    e.length = to_double(spec.length);
    e.exact = std::move(spec.length);
    edges_.push_back(std::move(e));
  }
}

MetricGraph MetricGraph::from_doubles(int vertex_count, std::span<const std::pair<int, int>> ends,
                                      std::span<const double> lengths) {
  if (ends.size() != lengths.size()) throw GraphError("edge and length counts differ");
  std::vector<EdgeSpec> specs;
  specs.reserve(ends.size());
  for (std::size_t i = 0; i < ends.size(); ++i)
    specs.push_back({ends[i].first, ends[i].second, rational_from_double(lengths[i])});
  return MetricGraph(vertex_count, std::move(specs));
}

std::vector<double> MetricGraph::lengths() const {
  std::vector<double> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.length);
  return out;
}

std::vector<Rational> MetricGraph::exact_lengths() const {
  std::vector<Rational> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back(e.exact);
  return out;
}

double MetricGraph::total_length() const {
  double s = 0;
  for (const auto& e : edges_) s += e.length;
  return s;
}

Rational MetricGraph::exact_total_length() const {
  Rational s = 0;
  for (const auto& e : edges_) s += e.exact;
  return s;
}

bool MetricGraph::all_positive() const {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.exact > 0; });
}

MetricGraph MetricGraph::with_lengths(std::span<const double> lengths) const {
  if (lengths.size() != edges_.size()) throw GraphError("length vector size does not match edge count");
  std::vector<EdgeSpec> specs;
  specs.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i)
    specs.push_back({edges_[i].src, edges_[i].dst, rational_from_double(lengths[i])});
  return MetricGraph(vertex_count_, std::move(specs));
}

MetricGraph MetricGraph::with_exact_lengths(std::span<const Rational> lengths) const {
  if (lengths.size() != edges_.size()) throw GraphError("length vector size does not match edge count");
  std::vector<EdgeSpec> specs;
  specs.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) specs.push_back({edges_[i].src, edges_[i].dst, lengths[i]});
  return MetricGraph(vertex_count_, std::move(specs));
}

int MetricGraph::valence(int v) const {
  int d = 0;
  for (const auto& e : edges_) d += (e.src == v) + (e.dst == v);
  return d;
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertex_count_ != b.vertex_count_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.src != y.src || x.dst != y.dst || x.exact != y.exact) return false;
  }
  return true;
}

std::vector<int> component_labels(const MetricGraph& g, const std::vector<bool>& keep, int* count) {
  const int n = g.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    if (!keep.empty() && !keep[e.id]) continue;
    int a = find(e.src), b = find(e.dst);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    int r = find(v);
    if (label[r] < 0) label[r] = next++;
    label[v] = label[r];
  }
  if (count) *count = next;
  return label;
}

bool is_connected(const MetricGraph& g) {
  int count = 0;
  component_labels(g, {}, &count);
  return count == 1;
}

namespace {

struct Incidence {
  int edge;
  int other;
};

std::vector<std::vector<Incidence>> adjacency(const MetricGraph& g, const std::vector<bool>& keep) {
  std::vector<std::vector<Incidence>> adj(static_cast<std::size_t>(g.vertex_count()));
  for (const auto& e : g.edges()) {
    if (!keep.empty() && !keep[e.id]) continue;
    if (e.is_loop()) continue;
    adj[e.src].push_back({e.id, e.dst});
    adj[e.dst].push_back({e.id, e.src});
  }
  return adj;
}

// Tarjan low-link over every component of the kept subgraph. Parallel edges
// are distinguished by id, so only the tree edge itself is skipped.
std::vector<int> bridges_of(const MetricGraph& g, const std::vector<bool>& keep) {
  const int n = g.vertex_count();
  auto adj = adjacency(g, keep);
  std::vector<int> disc(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
  std::vector<int> out;
  int timer = 0;

  struct Frame {
    int vertex;
    int parent_edge;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.vertex].size()) {
        Incidence inc = adj[f.vertex][f.next++];
        if (inc.edge == f.parent_edge) continue;
        if (disc[inc.other] < 0) {
          disc[inc.other] = low[inc.other] = timer++;
          stack.push_back({inc.other, inc.edge, 0});
        } else {
          low[f.vertex] = std::min(low[f.vertex], disc[inc.other]);
        }
      } else {
        Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          int parent = stack.back().vertex;
          low[parent] = std::min(low[parent], low[done.vertex]);
          if (low[done.vertex] > disc[parent]) out.push_back(done.parent_edge);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> bridges_in(const MetricGraph& g, const std::vector<bool>& keep) { return bridges_of(g, keep); }

ValidityReport validate_outer(const MetricGraph& g) {
  ValidityReport r;
  r.is_connected = is_connected(g);
  r.min_valence = g.vertex_count() > 0 ? g.valence(0) : 0;
  for (int v = 1; v < g.vertex_count(); ++v) r.min_valence = std::min(r.min_valence, g.valence(v));
  r.separating_edges = bridges_of(g, {});
  r.is_outer_space_point = r.is_connected && r.min_valence >= 3 && r.separating_edges.empty();
  return r;
}

int genus(const MetricGraph& g) {
  if (!is_connected(g)) throw GraphError("genus: graph is disconnected");
  return g.edge_count() - g.vertex_count() + 1;
}

std::vector<int> bridges(const MetricGraph& g) {
  if (!is_connected(g)) throw GraphError("bridges: graph is disconnected");
  return bridges_of(g, {});
}

std::vector<std::pair<int, int>> separating_pairs(const MetricGraph& g) {
  if (!is_connected(g)) throw GraphError("separating_pairs: graph is disconnected");
  if (!bridges_of(g, {}).empty()) throw GraphError("separating_pairs: graph has a bridge");
  // f pairs with e exactly when f is a bridge of g - e.
  std::vector<std::pair<int, int>> out;
  std::vector<bool> keep(static_cast<std::size_t>(g.edge_count()), true);
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    keep[e.id] = false;
    for (int f : bridges_of(g, keep))
      if (f > e.id) out.emplace_back(e.id, f);
    keep[e.id] = true;
  }
  std::sort(out.begin(), out.end());
  return out;
}

Contraction contract_edge(const MetricGraph& g, int e) {
  if (e < 0 || e >= g.edge_count()) throw GraphError("contract_edge: no edge " + std::to_string(e));
  const Edge& target = g.edge(e);
  if (target.is_loop()) throw GraphError("contract_edge: edge " + std::to_string(e) + " is a loop");

  // dst merges into src; vertices above dst shift down.
  auto remap = [&](int v) {
    if (v == target.dst) v = target.src;
    return v > target.dst ? v - 1 : v;
  };
  Contraction c;
  c.old_to_new.assign(static_cast<std::size_t>(g.edge_count()), -1);
  std::vector<MetricGraph::EdgeSpec> specs;
  for (const auto& edge : g.edges()) {
    if (edge.id == e) continue;
    c.old_to_new[edge.id] = static_cast<int>(specs.size());
    specs.push_back({remap(edge.src), remap(edge.dst), edge.exact});
  }
  c.graph = MetricGraph(g.vertex_count() - 1, std::move(specs));
  return c;
}

std::vector<CycleSubgraph> enumerate_cycles(const MetricGraph& g) {
  // Each cycle is found exactly once from its smallest edge e = (u,v): the
  // rest of the cycle is the unique simple v -> u path through larger ids.
  const int n = g.vertex_count();
  auto adj = adjacency(g, {});
  std::vector<CycleSubgraph> out;
  std::vector<bool> on_path(static_cast<std::size_t>(n), false);
  std::vector<int> path;

  auto emit = [&](std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    CycleSubgraph c;
    for (int id : ids) c.exact_length += g.edge(id).exact;
    c.total_length = to_double(c.exact_length);
    c.edges = std::move(ids);
    out.push_back(std::move(c));
  };

  for (const auto& start : g.edges()) {
    if (start.is_loop()) {
      emit({start.id});
      continue;
    }
    const int target = start.src;
    auto search = [&](auto&& self, int v) -> void {
      for (const auto& inc : adj[v]) {
        if (inc.edge <= start.id) continue;
        if (inc.other == target) {
          std::vector<int> ids = path;
          ids.push_back(start.id);
          ids.push_back(inc.edge);
          emit(std::move(ids));
          continue;
        }
        if (on_path[inc.other]) continue;
        on_path[inc.other] = true;
        path.push_back(inc.edge);
        self(self, inc.other);
        path.pop_back();
        on_path[inc.other] = false;
      }
    };
    on_path[start.dst] = true;
    on_path[target] = true;
    search(search, start.dst);
    on_path[start.dst] = false;
    on_path[target] = false;
  }

  std::sort(out.begin(), out.end(), [](const CycleSubgraph& a, const CycleSubgraph& b) {
    if (a.exact_length != b.exact_length) return a.exact_length < b.exact_length;
    return a.edges < b.edges;
  });
  return out;
}

double systole(const MetricGraph& g) {
  if (!g.all_positive()) throw GraphError("systole: lengths must be positive");
  auto cycles = enumerate_cycles(g);
  if (cycles.empty()) throw GraphError("systole: graph has genus 0");
  return cycles.front().total_length;
}

MetricGraph normalize(const MetricGraph& g) {
  Rational total = g.exact_total_length();
  if (total == 0) throw GraphError("normalize: total length is zero");
  std::vector<Rational> scaled;
  scaled.reserve(static_cast<std::size_t>(g.edge_count()));
  for (const auto& e : g.edges()) scaled.push_back(e.exact / total);
  return g.with_exact_lengths(scaled);
}

}  // namespace tropjac
