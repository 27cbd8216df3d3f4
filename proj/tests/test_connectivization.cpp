#include "oracles.hpp"
#include "tropjac/connectivization.hpp"
#include "tropjac/corpus.hpp"

#include <doctest.h>

#include <random>

using namespace tropjac;

namespace {

const Rational third(1, 3);

MetricGraph lb() { return looped_banana(Rational(7, 20), Rational(7, 20), Rational(1, 10), Rational(1, 5)); }

// Contracting the complement of s leaves a circle, and removing s leaves no bridge.
bool brute_c1(const MetricGraph& g, const std::vector<int>& s) {
  const std::set<int> in(s.begin(), s.end());
  oracle::Dsu d(g.vertex_count());
  for (const auto& e : g.edges())
    if (!in.count(e.id)) d.unite(e.src, e.dst);
  std::map<int, int> degree;
  oracle::Dsu q(g.vertex_count());
  for (int e : s) {
    ++degree[d.find(g.edge(e).src)];
    ++degree[d.find(g.edge(e).dst)];
    q.unite(d.find(g.edge(e).src), d.find(g.edge(e).dst));
  }
  int root = -1;
  for (const auto& [c, deg] : degree) {
    if (deg != 2) return false;
    if (root < 0) root = q.find(c);
    if (q.find(c) != root) return false;
  }
  const int base = oracle::components_without(g, in);
  for (const auto& e : g.edges()) {
    if (in.count(e.id)) continue;
    auto more = in;
    more.insert(e.id);
    if (oracle::components_without(g, more) > base) return false;
  }
  return true;
}

std::vector<std::vector<int>> brute_c1_sets(const MetricGraph& g) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << g.edge_count()); ++mask) {
    std::vector<int> s;
    for (int e = 0; e < g.edge_count(); ++e)
      if (mask >> e & 1) s.push_back(e);
    if (brute_c1(g, s)) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> as_lists(const std::vector<C1Set>& sets) {
  std::vector<std::vector<int>> out;
  for (const auto& s : sets) out.push_back(s.edges);
  return out;
}

std::vector<Rational> sorted_lengths(const MetricGraph& g) {
  auto l = g.exact_lengths();
  std::sort(l.begin(), l.end());
  return l;
}

}  // namespace

TEST_CASE("contracted complement") {
  auto t = contracted_complement(theta_graph(third, third, third), {0});
  CHECK(t.vertex_count() == 1);
  CHECK(t.edge_count() == 1);
  CHECK(t.edge(0).is_loop());

  auto b = contracted_complement(banana_graph(Rational(1, 2), Rational(1, 2)), {0, 1});
  CHECK(b.vertex_count() == 2);
  CHECK(b.edge_count() == 2);

  auto c = contracted_complement(lb(), {2, 3});
  CHECK(c.vertex_count() == 2);
  CHECK(c.edge_count() == 2);
  for (const auto& e : c.edges()) CHECK_FALSE(e.is_loop());
}

TEST_CASE("C1-set predicate") {
  CHECK(is_c1_set(theta_graph(third, third, third), {0}));
  auto banana = banana_graph(Rational(1, 2), Rational(1, 2));
  CHECK_FALSE(is_c1_set(banana, {0}));
  CHECK(is_c1_set(banana, {0, 1}));
  CHECK(is_c1_set(lb(), {2, 3}));
  CHECK(is_c1_set(lb(), {0}));
  CHECK_FALSE(is_c1_set(lb(), {2}));
}

TEST_CASE("C1-sets of named graphs") {
  CHECK(as_lists(c1_sets(k4_graph(std::vector<Rational>(6, Rational(1, 6))))) ==
        std::vector<std::vector<int>>{{0}, {1}, {2}, {3}, {4}, {5}});
  CHECK(as_lists(c1_sets(theta_graph(third, third, third))) == std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK(as_lists(c1_sets(lb())) == std::vector<std::vector<int>>{{0}, {1}, {2, 3}});
}

TEST_CASE("C1-sets partition the edges and match brute force") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 60; ++i) {
    MetricGraph g = random_bridgeless_graph(rng, 5, 3);
    auto sets = as_lists(c1_sets(g));
    CHECK(sets == brute_c1_sets(g));
    std::vector<int> seen(static_cast<std::size_t>(g.edge_count()), 0);
    for (const auto& s : sets)
      for (int e : s) ++seen[e];
    for (int c : seen) CHECK(c == 1);
  }
}

TEST_CASE("2-edge connectivization") {
  auto fig8 = two_edge_connectivize(dumbbell_graph(Rational(2, 5), Rational(1, 5), Rational(2, 5)));
  CHECK(fig8.vertex_count() == 1);
  CHECK(fig8.edge_count() == 2);
  auto theta = theta_graph(third, third, third);
  CHECK(two_edge_connectivize(theta) == theta);

  MetricGraph chain(3, {{0, 0, Rational(1, 5)}, {0, 1, Rational(1, 10)}, {1, 1, Rational(1, 5)}, {1, 2, Rational(1, 10)},
                        {2, 2, Rational(2, 5)}});
  auto rose = two_edge_connectivize(chain);
  CHECK(rose.vertex_count() == 1);
  CHECK(sorted_lengths(rose) == std::vector<Rational>{Rational(1, 5), Rational(1, 5), Rational(2, 5)});
}

TEST_CASE("3-edge connectivization") {
  auto c = three_edge_connectivize(lb());
  CHECK(c.quotient.vertex_count() == 1);
  CHECK(sorted_lengths(c.quotient) == std::vector<Rational>{Rational(3, 10), Rational(7, 20), Rational(7, 20)});
  CHECK(genus(c.quotient) == 3);

  auto k4 = k4_graph({Rational(1, 21), Rational(2, 21), Rational(3, 21), Rational(4, 21), Rational(5, 21), Rational(6, 21)});
  CHECK(three_edge_connectivize(k4).quotient == k4);
  auto theta = theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5));
  CHECK(three_edge_connectivize(theta).quotient == theta);

  std::mt19937_64 rng(47);
  for (int i = 0; i < 50; ++i) {
    MetricGraph g = random_bridgeless_graph(rng, 6, 4);
    auto r = three_edge_connectivize(g, {true, rng()});
    CHECK(genus(r.quotient) == genus(g));
    CHECK(is_three_edge_connected(r.quotient));
    CHECK(r.quotient.exact_total_length() == g.exact_total_length());
    // Each quotient edge carries the total length of its C1-set.
    for (std::size_t s = 0; s < r.sets.size(); ++s) {
      Rational total = 0;
      for (int e : r.sets[s].edges) total += g.edge(e).exact;
      CHECK(r.quotient.edge(r.edge_of_set[s]).exact == total);
    }
  }
}

TEST_CASE("cyclic equivalence") {
  auto a = theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5));
  auto b = theta_graph(Rational(3, 10), Rational(1, 5), Rational(1, 2));
  auto w = cyclically_equivalent(a, b);
  REQUIRE(w);
  for (int e = 0; e < 3; ++e) CHECK(b.edge(w->image[e]).exact == a.edge(e).exact);
  CHECK_FALSE(cyclically_equivalent(a, theta_graph(Rational(1, 2), Rational(1, 4), Rational(1, 4))));
  CHECK_FALSE(cyclically_equivalent(rose_graph({Rational(1, 2), Rational(1, 2)}),
                                    banana_graph(Rational(1, 2), Rational(1, 2))));
  CHECK_FALSE(cyclically_equivalent(rose_graph({Rational(1, 2), Rational(3, 10), Rational(1, 5)}), a));
}

TEST_CASE("Torelli decision") {
  auto other = looped_banana(Rational(7, 20), Rational(7, 20), Rational(3, 20), Rational(3, 20));
  CHECK(tropical_torelli_equal(lb(), other).equal);
  CHECK_FALSE(cyclically_equivalent(lb(), other));
  CHECK(tropical_torelli_equal(lb(), lb()).equal);
  CHECK_FALSE(tropical_torelli_equal(rose_graph({Rational(1, 2), Rational(1, 2)}),
                                     rose_graph({Rational(3, 5), Rational(2, 5)}))
                  .equal);
}
