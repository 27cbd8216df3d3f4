#include "tropjac/corpus.hpp"
#include "tropjac/tropical_plane.hpp"

#include <doctest.h>

#include <random>

using namespace tropjac;

namespace {

TropicalPolynomial2 poly(std::initializer_list<std::tuple<int, int, int>> terms) {
  TropicalPolynomial2 p;
  for (auto [j, k, a] : terms) p.monomials.push_back({j, k, Rational(a)});
  return p;
}

// Number of monomials attaining the max, exactly.
int ties(const TropicalPolynomial2& p, const Rational& x, const Rational& y) {
  const Rational best = eval_exact(p, x, y);
  int n = 0;
  for (const auto& m : p.monomials) n += m.j * x + m.k * y + m.a == best;
  return n;
}

}  // namespace

TEST_CASE("evaluation") {
  auto line = poly({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}});
  CHECK(eval(line, 0, 0) == 0);
  CHECK(eval(line, 2, 1) == 2);
  CHECK(eval_exact(line, Rational(-1, 3), Rational(-7, 2)) == 0);
  auto conic = poly({{2, 0, 0}, {1, 1, 1}, {0, 2, 0}, {0, 0, 0}});
  CHECK(eval(conic, 0.5, -0.25) == doctest::Approx(std::max({1.0, 1.25, -0.5, 0.0})));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(validate(poly({{0, 0, 0}})), TropicalError);
  CHECK_THROWS_AS(validate(poly({{1, 0, 0}, {1, 0, 2}})), TropicalError);
}

TEST_CASE("corner locus of the tropical line") {
  auto locus = corner_locus(poly({{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}));
  REQUIRE(locus.vertices.size() == 1);
  const auto& v = locus.vertices[0];
  CHECK(v.vertex == Point2{0, 0});
  std::vector<Lattice2> dirs;
  for (const auto& r : v.rays) {
    dirs.push_back(r.primitive);
    CHECK(r.weight == 1);
  }
  std::sort(dirs.begin(), dirs.end());
  CHECK(dirs == std::vector<Lattice2>{{-1, 0}, {0, -1}, {1, 1}});
  CHECK(check_balancing(v));
  CHECK(locus.edges.size() == 3);
}

TEST_CASE("one-variable quadratic has a single weight-two line") {
  // max(0, x, 2x + 2): 0 = x at x = 0 is dominated by 2x + 2, and x = 2x + 2
  // at x = -2 by 0; the corner is where 0 = 2x + 2.
  auto p = poly({{0, 0, 0}, {1, 0, 0}, {2, 0, 2}});
  auto locus = corner_locus(p);
  CHECK(locus.vertices.empty());
  REQUIRE(locus.edges.size() == 1);
  CHECK(locus.edges[0].weight == 2);
  CHECK(locus.edges[0].origin[0] == -1);
  CHECK(locus.contains({Rational(-1), Rational(5)}));
  CHECK_FALSE(locus.contains({Rational(0), Rational(0)}));
  CHECK_FALSE(locus.contains({Rational(-2), Rational(0)}));
}

TEST_CASE("collinear exponents") {
  // max(0, x, 2x): all three tie on x = 0, a single edge of weight 2.
  auto locus = corner_locus(poly({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}));
  CHECK(locus.vertices.empty());
  REQUIRE(locus.edges.size() == 1);
  CHECK(locus.edges[0].weight == 2);
  CHECK(locus.edges[0].origin[0] == 0);
  // Moving the middle coefficient up splits it into two weight-1 lines.
  auto split = corner_locus(poly({{0, 0, 0}, {1, 0, 1}, {2, 0, 0}}));
  REQUIRE(split.edges.size() == 2);
  for (const auto& e : split.edges) CHECK(e.weight == 1);
}

TEST_CASE("corner locus agrees with exact grid search") {
  for (const auto& p : tropical_corpus()) {
    auto locus = corner_locus(p);
    for (const auto& v : locus.vertices) {
      CHECK(check_balancing(v));
      CHECK(ties(p, v.vertex[0], v.vertex[1]) >= 3);
    }
    for (int i = -30; i <= 30; ++i)
      for (int k = -30; k <= 30; ++k) {
        const Rational x(i, 8), y(k, 8);
        CHECK(locus.contains({x, y}) == (ties(p, x, y) >= 2));
      }
    for (const auto& e : locus.edges) {
      // A point strictly inside the edge is attained by its extreme pair; collinear
      // exponents in between may tie as well.
      Rational t = 1;
      if (e.lower && e.upper) t = (*e.lower + *e.upper) / 2;
      else if (e.lower) t = *e.lower + 1;
      else if (e.upper) t = *e.upper - 1;
      const Rational x = e.origin[0] + t * e.direction[0], y = e.origin[1] + t * e.direction[1];
      CHECK(ties(p, x, y) >= 2);
      CHECK_FALSE(locus.vertices.end() !=
                  std::find_if(locus.vertices.begin(), locus.vertices.end(),
                               [&](const VertexStar& v) { return v.vertex == Point2{x, y}; }));
      const Rational best = eval_exact(p, x, y);
      const auto& ma = p.monomials[e.monomial_a];
      const auto& mb = p.monomials[e.monomial_b];
      CHECK(ma.j * x + ma.k * y + ma.a == best);
      CHECK(mb.j * x + mb.k * y + mb.a == best);
      CHECK(e.weight == weight(ma, mb));
    }
  }
}

TEST_CASE("random polynomials balance") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 50; ++i) {
    TropicalPolynomial2 p;
    std::set<std::pair<int, int>> used;
    const int n = std::uniform_int_distribution<int>(3, 8)(rng);
    while (static_cast<int>(p.monomials.size()) < n) {
      const int j = std::uniform_int_distribution<int>(0, 4)(rng), k = std::uniform_int_distribution<int>(0, 4)(rng);
      if (!used.insert({j, k}).second) continue;
      p.monomials.push_back({j, k, random_rational(rng, -20, 20, 4)});
    }
    for (const auto& v : corner_locus(p).vertices) CHECK(check_balancing(v));
  }
}

TEST_CASE("weights and balancing") {
  CHECK(weight({1, 0, 0}, {0, 1, 0}) == 1);
  CHECK(weight({2, 0, 0}, {0, 0, 0}) == 2);
  CHECK(weight({4, 2, 0}, {0, 0, 0}) == 2);
  CHECK_THROWS(weight({1, 1, 0}, {1, 1, 3}));

  CHECK(check_balancing({{0, 0}, {{{1, 0}, 1}, {{-1, 0}, 1}}}));
  CHECK_FALSE(check_balancing({{0, 0}, {{{1, 0}, 1}, {{0, 1}, 1}}}));
  CHECK(check_balancing({{0, 0}, {{{1, 0}, 2}, {{-1, -1}, 1}, {{-1, 1}, 1}}}));
}

TEST_CASE("induced metric") {
  CHECK(induced_edge_scale(1) == 1);
  CHECK(induced_edge_scale(2) == 0.5);
  CHECK(induced_edge_scale(3) == doctest::Approx(1.0 / 3));
  CornerEdge e;
  e.direction = {1, 1};
  e.lower = Rational(0);
  e.upper = Rational(3);
  e.weight = 1;
  CHECK(induced_edge_length(e) == Rational(3));
  e.weight = 3;
  CHECK(induced_edge_length(e) == Rational(1));
  e.upper.reset();
  CHECK_FALSE(induced_edge_length(e));
}
