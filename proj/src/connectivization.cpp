#include "tropjac/connectivization.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace tropjac {

namespace {

std::vector<int> normalized_subset(const MetricGraph& g, std::vector<int> s, const char* what) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) throw GraphError(std::string(what) + ": edge set is empty");
  for (int e : s)
    if (e < 0 || e >= g.edge_count()) throw GraphError(std::string(what) + ": no edge " + std::to_string(e));
  return s;
}

void require_bridgeless(const MetricGraph& g, const char* what) {
  if (!is_connected(g)) throw GraphError(std::string(what) + ": graph is disconnected");
  if (!bridges(g).empty()) throw GraphError(std::string(what) + ": graph has a bridge");
}

bool is_circle(const MetricGraph& h) {
  if (!is_connected(h)) return false;
  for (int v = 0; v < h.vertex_count(); ++v)
    if (h.valence(v) != 2) return false;
  return true;
}

bool c1_unchecked(const MetricGraph& g, const std::vector<int>& s) {
  if (!is_circle(contracted_complement(g, s))) return false;
  std::vector<bool> keep(static_cast<std::size_t>(g.edge_count()), true);
  for (int e : s) keep[e] = false;
  return bridges_in(g, keep).empty();
}

}  // namespace

MetricGraph contracted_complement(const MetricGraph& g, const std::vector<int>& s_in) {
  auto s = normalized_subset(g, s_in, "contracted_complement");
  std::vector<bool> keep(static_cast<std::size_t>(g.edge_count()), true);
  for (int e : s) keep[e] = false;
  int count = 0;
  auto label = component_labels(g, keep, &count);
  std::vector<MetricGraph::EdgeSpec> specs;
  specs.reserve(s.size());
  for (int e : s) {
    const Edge& edge = g.edge(e);
    specs.push_back({label[edge.src], label[edge.dst], edge.exact});
  }
  return MetricGraph(count, std::move(specs));
}

bool is_c1_set(const MetricGraph& g, const std::vector<int>& s) {
  require_bridgeless(g, "is_c1_set");
  return c1_unchecked(g, normalized_subset(g, s, "is_c1_set"));
}

std::vector<C1Set> c1_sets(const MetricGraph& g) {
  require_bridgeless(g, "c1_sets");
  const int m = g.edge_count();
  // A C1-set with two or more edges has every pair of its edges forming a
  // separating pair, so only cliques of that relation are candidates.
  std::vector<std::vector<bool>> paired(static_cast<std::size_t>(m), std::vector<bool>(static_cast<std::size_t>(m)));
  for (auto [a, b] : separating_pairs(g)) paired[a][b] = paired[b][a] = true;

  std::vector<C1Set> out;
  std::vector<int> current;
  auto extend = [&](auto&& self, int next) -> void {
    if (!current.empty() && c1_unchecked(g, current)) out.push_back({current});
    for (int e = next; e < m; ++e) {
      bool compatible = std::all_of(current.begin(), current.end(), [&](int f) { return paired[f][e]; });
      if (!compatible) continue;
      current.push_back(e);
      self(self, e + 1);
      current.pop_back();
    }
  };
  extend(extend, 0);
  std::sort(out.begin(), out.end());

  std::vector<int> hits(static_cast<std::size_t>(m), 0);
  for (const auto& s : out)
    for (int e : s.edges) ++hits[e];
  for (int e = 0; e < m; ++e)
    if (hits[e] != 1)
      throw std::logic_error("c1_sets: edge " + std::to_string(e) + " lies in " + std::to_string(hits[e]) +
                             " C1-sets");
  return out;
}

MetricGraph two_edge_connectivize(const MetricGraph& g, std::vector<int>* old_to_new) {
  if (!is_connected(g)) throw GraphError("two_edge_connectivize: graph is disconnected");
  MetricGraph h = g;
  std::vector<int> map(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e) map[e] = e;
  for (;;) {
    auto b = bridges(h);
    if (b.empty()) break;
    auto c = contract_edge(h, b.front());
    for (auto& id : map)
      if (id >= 0) id = c.old_to_new[id];
    h = std::move(c.graph);
  }
  if (old_to_new) *old_to_new = std::move(map);
  return h;
}

bool is_three_edge_connected(const MetricGraph& g) {
  if (!is_connected(g) || !bridges(g).empty()) return false;
  return separating_pairs(g).empty();
}

Connectivization three_edge_connectivize(const MetricGraph& g, PairOrder order) {
  Connectivization out;
  std::vector<int> to_g2;
  MetricGraph g2 = two_edge_connectivize(g, &to_g2);
  std::vector<int> from_g2(static_cast<std::size_t>(g2.edge_count()), -1);
  for (int e = 0; e < g.edge_count(); ++e) {
    if (to_g2[e] >= 0)
      from_g2[to_g2[e]] = e;
    else
      out.contracted_bridges.push_back(e);
  }

  auto sets2 = c1_sets(g2);

  std::mt19937_64 rng(order.seed);
  MetricGraph h = g2;
  std::vector<int> to_h(static_cast<std::size_t>(g2.edge_count()));
  for (int e = 0; e < g2.edge_count(); ++e) to_h[e] = e;
  for (;;) {
    auto pairs = separating_pairs(h);
    if (pairs.empty()) break;
    // Loops never lie in a separating pair, so every step keeps the genus.
    int victim = pairs.front().first;
    if (order.randomized) {
      auto pick = std::uniform_int_distribution<std::size_t>(0, pairs.size() - 1)(rng);
      victim = std::uniform_int_distribution<int>(0, 1)(rng) ? pairs[pick].second : pairs[pick].first;
    }
    for (int e = 0; e < g2.edge_count(); ++e)
      if (to_h[e] == victim) out.contracted_pair_edges.push_back(from_g2[e]);
    auto c = contract_edge(h, victim);
    for (auto& id : to_h)
      if (id >= 0) id = c.old_to_new[id];
    h = std::move(c.graph);
  }

  // Each C1-set keeps exactly one surviving edge; that edge carries the sum.
  std::vector<Rational> lengths(static_cast<std::size_t>(h.edge_count()));
  std::vector<int> owner(static_cast<std::size_t>(h.edge_count()), -1);
  out.input_edge.assign(static_cast<std::size_t>(h.edge_count()), -1);
  for (std::size_t k = 0; k < sets2.size(); ++k) {
    C1Set in_input;
    Rational sum = 0;
    int survivor = -1;
    for (int e2 : sets2[k].edges) {
      in_input.edges.push_back(from_g2[e2]);
      sum += g2.edge(e2).exact;
      if (to_h[e2] >= 0) {
        if (survivor >= 0) throw std::logic_error("three_edge_connectivize: C1-set kept two edges");
        survivor = to_h[e2];
        out.input_edge[survivor] = from_g2[e2];
      }
    }
    if (survivor < 0) throw std::logic_error("three_edge_connectivize: C1-set lost all its edges");
    std::sort(in_input.edges.begin(), in_input.edges.end());
    lengths[survivor] = sum;
    owner[survivor] = static_cast<int>(k);
    out.sets.push_back(std::move(in_input));
    out.edge_of_set.push_back(survivor);
  }
  if (std::any_of(owner.begin(), owner.end(), [](int k) { return k < 0; }))
    throw std::logic_error("three_edge_connectivize: quotient edge outside every C1-set");
  out.quotient = h.with_exact_lengths(lengths);
  return out;
}

std::optional<EdgeBijection> cyclically_equivalent(const MetricGraph& g1, const MetricGraph& g2) {
  const int m = g1.edge_count();
  if (m != g2.edge_count()) return std::nullopt;
  if (m > 64) throw GraphError("cyclically_equivalent: more than 64 edges");
  if (m == 0) return EdgeBijection{};
  {
    auto l1 = g1.exact_lengths(), l2 = g2.exact_lengths();
    std::sort(l1.begin(), l1.end());
    std::sort(l2.begin(), l2.end());
    if (l1 != l2) return std::nullopt;
  }
  auto c1 = enumerate_cycles(g1);
  auto c2 = enumerate_cycles(g2);
  if (c1.size() != c2.size()) return std::nullopt;

  auto mask_of = [](const CycleSubgraph& c) {
    std::uint64_t mask = 0;
    for (int e : c.edges) mask |= std::uint64_t{1} << e;
    return mask;
  };
  std::set<std::uint64_t> target;
  std::vector<int> through1(static_cast<std::size_t>(m), 0), through2(static_cast<std::size_t>(m), 0);
  for (const auto& c : c2) {
    target.insert(mask_of(c));
    for (int e : c.edges) ++through2[e];
  }
  for (const auto& c : c1)
    for (int e : c.edges) ++through1[e];

  // Cycles of g1 checked at the step where their largest edge is assigned.
  std::vector<std::vector<std::uint64_t>> completes(static_cast<std::size_t>(m));
  for (const auto& c : c1) completes[c.edges.back()].push_back(mask_of(c));

  std::vector<std::vector<int>> candidates(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e)
    for (int f = 0; f < m; ++f)
      if (g1.edge(e).exact == g2.edge(f).exact && through1[e] == through2[f]) candidates[e].push_back(f);

  std::vector<int> image(static_cast<std::size_t>(m), -1);
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  auto mapped = [&](std::uint64_t mask) {
    std::uint64_t out = 0;
    for (int e = 0; e < m; ++e)
      if (mask >> e & 1) out |= std::uint64_t{1} << image[e];
    return out;
  };
  auto assign = [&](auto&& self, int e) -> bool {
    if (e == m) return true;
    for (int f : candidates[e]) {
      if (used[f]) continue;
      image[e] = f;
      bool ok = std::all_of(completes[e].begin(), completes[e].end(),
                            [&](std::uint64_t mask) { return target.count(mapped(mask)) > 0; });
      if (ok) {
        used[f] = true;
        if (self(self, e + 1)) return true;
        used[f] = false;
      }
      image[e] = -1;
    }
    return false;
  };
  if (!assign(assign, 0)) return std::nullopt;
  return EdgeBijection{image};
}

TorelliResult tropical_torelli_equal(const MetricGraph& g1, const MetricGraph& g2) {
  TorelliResult r;
  r.first = three_edge_connectivize(g1);
  r.second = three_edge_connectivize(g2);
  r.witness = cyclically_equivalent(r.first.quotient, r.second.quotient);
  r.equal = r.witness.has_value();
  return r;
}

}  // namespace tropjac
