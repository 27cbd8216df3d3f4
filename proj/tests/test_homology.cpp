#include "tropjac/corpus.hpp"
#include "tropjac/homology.hpp"

#include <doctest.h>

#include <random>

using namespace tropjac;

namespace {

const Rational third(1, 3);

// Non-tree edges of an independent DSU spanning tree.
std::vector<int> cotree(const MetricGraph& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v) parent[v] = v;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> out;
  for (int e = g.edge_count() - 1; e >= 0; --e) {
    const int a = find(g.edge(e).src), b = find(g.edge(e).dst);
    if (a == b)
      out.push_back(e);
    else
      parent[a] = b;
  }
  return out;
}

// A set of cycles is a Z-basis iff its coefficients on a cotree form a unimodular matrix.
long long cotree_determinant(const MetricGraph& g, const Marking& m) {
  const auto co = cotree(g);
  const int n = static_cast<int>(co.size());
  if (m.rank() != n) return 0;
  IntMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) a(i, k) = m.basis[i][co[k]];
  return static_cast<long long>(determinant(a));
}

Matrix brute_period(const MetricGraph& g, const Marking& m) {
  const int n = m.rank();
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int e = 0; e < g.edge_count(); ++e)
        p(i, k) += static_cast<double>(m.basis[i][e] * m.basis[k][e]) * g.edge(e).length;
  return p;
}

}  // namespace

TEST_CASE("boundary convention") {
  auto theta = theta_graph(third, third, third);
  CHECK(boundary(theta, std::vector<double>{1, -1, 0}) == std::vector<double>{0, 0});
  CHECK(boundary(theta, std::vector<double>{1, 0, 0}) == std::vector<double>{-1, 1});
  CHECK(boundary(rose_graph({Rational(1)}), std::vector<double>{1}) == std::vector<double>{0});
  CHECK(is_cycle(theta, std::vector<std::int64_t>{1, 0, -1}));
  CHECK_FALSE(is_cycle(theta, std::vector<std::int64_t>{1, 1, 0}));
}

TEST_CASE("fundamental cycle basis") {
  auto theta = theta_graph(third, third, third);
  CHECK(spanning_tree(theta) == std::vector<int>{0});
  auto m = cycle_basis(theta);
  CHECK(m.basis == std::vector<IntegerChain>{{-1, 1, 0}, {-1, 0, 1}});
  auto rose = cycle_basis(rose_graph({Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
  CHECK(rose.basis == std::vector<IntegerChain>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});

  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 4)(rng), 10);
    auto b = cycle_basis(g);
    CHECK(b.rank() == genus(g));
    for (const auto& c : b.basis) CHECK(is_cycle(g, c));
    CHECK(std::abs(cotree_determinant(g, b)) == 1);
  }
}

TEST_CASE("period matrix of theta and rose") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    Rational a = random_rational(rng, 1, 400, 1000), b = random_rational(rng, 1, 400, 1000);
    auto p = period_matrix_exact(theta_graph(a, b, 1 - a - b), theta_marking());
    CHECK(p == std::vector<std::vector<Rational>>{{a + b, b}, {b, 1 - a}});
  }
  auto eq = period_matrix(theta_graph(third, third, third), theta_marking());
  CHECK(eq(0, 0) == doctest::Approx(2.0 / 3));
  CHECK(eq(0, 1) == doctest::Approx(1.0 / 3));
  CHECK(eq(1, 1) == doctest::Approx(2.0 / 3));

  auto rose = rose_graph({Rational(1, 2), Rational(3, 10), Rational(1, 5)});
  auto pr = period_matrix(rose, cycle_basis(rose));
  CHECK((pr - Vector(Vector{{0.5, 0.3, 0.2}}).asDiagonal().toDenseMatrix()).norm() < 1e-15);
}

TEST_CASE("period matrix agrees with the pairing and with marking changes") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 4)(rng), 10);
    const Marking base = cycle_basis(g);
    const IntMatrix u = random_unimodular(rng, base.rank(), 6);
    const Marking m = transform_marking(base, u);
    const Matrix p = period_matrix(g, m);
    CHECK((p - brute_period(g, m)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((p - change_marking(period_matrix(g, base), u)).cwiseAbs().maxCoeff() < 1e-9);
    Matrix sum = Matrix::Zero(m.rank(), m.rank());
    for (int e = 0; e < g.edge_count(); ++e) sum += g.edge(e).length * edge_period_contribution(m, e);
    CHECK((p - sum).cwiseAbs().maxCoeff() < 1e-12);
    for (int a = 0; a < m.rank(); ++a) {
      std::vector<double> ca(m.basis[a].begin(), m.basis[a].end());
      for (int b = 0; b < m.rank(); ++b) {
        std::vector<double> cb(m.basis[b].begin(), m.basis[b].end());
        CHECK(q_pairing(g, ca, cb) == doctest::Approx(p(a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("one-forms and integration") {
  auto theta = theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5));
  CHECK(is_one_form(theta, {{1, -1, 0}}));
  CHECK_FALSE(is_one_form(theta, {{1, 0, 0}}));
  CHECK(is_one_form(rose_graph({Rational(1, 2), Rational(1, 2)}), {{3, -7}}));
  CHECK(integrate(theta, {{1, -1, 0}}, {{1, -1, 0}}) == doctest::Approx(0.8));
  CHECK(integrate(theta, {{0, 0, 0}}, {{1, -1, 0}}) == 0);
  auto w = cycle_to_form(theta, std::vector<std::int64_t>{1, -1, 0});
  CHECK(w.coefficients == std::vector<double>{1, -1, 0});
  CHECK(cycle_to_form(theta, std::vector<std::int64_t>{0, 0, 0}).coefficients == std::vector<double>{0, 0, 0});

  // Bilinearity: integrating the form of a cycle equals the pairing.
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    MetricGraph g = random_outer_graph(rng, 3, 8);
    auto m = random_marking(rng, g, 4);
    std::vector<double> a(m.basis[0].begin(), m.basis[0].end()), b(m.basis[1].begin(), m.basis[1].end());
    CHECK(integrate(g, cycle_to_form(g, m.basis[0]), {b}) == doctest::Approx(q_pairing(g, a, b)));
  }
}

TEST_CASE("principality") {
  auto theta = theta_graph(third, third, third);
  CHECK(principality_check(theta, cycle_basis(theta)));
  CHECK(principality_check(theta, theta_marking()));
  Marking doubled = theta_marking();
  for (auto& c : doubled.basis[0]) c *= 2;
  CHECK_FALSE(principality_check(theta, doubled));
  auto rose = rose_graph({third, third, third});
  CHECK(principality_check(rose, cycle_basis(rose)));

  std::mt19937_64 rng(37);
  for (int i = 0; i < 100; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 4)(rng), 10);
    Marking m = random_marking(rng, g, 5);
    const int row = std::uniform_int_distribution<int>(0, m.rank() - 1)(rng);
    const int other = (row + 1) % m.rank();
    const int k = std::uniform_int_distribution<int>(-2, 2)(rng);
    for (std::size_t e = 0; e < m.basis[row].size(); ++e) m.basis[row][e] = 3 * m.basis[row][e] + k * m.basis[other][e];
    CHECK(principality_check(g, m) == (std::abs(cotree_determinant(g, m)) == 1));
    CHECK_FALSE(principality_check(g, m));
  }
}

TEST_CASE("validate_marking rejects non-bases") {
  auto theta = theta_graph(third, third, third);
  CHECK_THROWS_AS(validate_marking(theta, {{{1, 1, 0}, {0, -1, 1}}}), MarkingError);
  CHECK_THROWS_AS(validate_marking(theta, {{{1, -1, 0}}}), MarkingError);
  CHECK_THROWS_AS(validate_marking(theta, {{{2, -2, 0}, {0, -1, 1}}}), MarkingError);
  CHECK_NOTHROW(validate_marking(theta, theta_marking()));
}

TEST_CASE("change of marking") {
  Matrix p{{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}};
  CHECK((change_marking(p, IntMatrix::Identity(2, 2)) - p).norm() == 0);
  IntMatrix flip{{1, 0}, {0, -1}};
  Matrix expected{{2.0 / 3, -1.0 / 3}, {-1.0 / 3, 2.0 / 3}};
  CHECK((change_marking(p, flip) - expected).norm() < 1e-15);
}

TEST_CASE("integer linear algebra") {
  CHECK(determinant(IntMatrix{{2, 1}, {7, 4}}) == 1);
  CHECK(determinant(IntMatrix{{0, 1, 2}, {3, 4, 5}, {6, 7, 9}}) == -3);
  auto s = smith_invariants({{2, 4}, {6, 8}});
  CHECK(s == std::vector<BigInt>{2, 4});
  auto t = smith_invariants({{1, 0, 0}, {0, 0, 0}});
  CHECK(t == std::vector<BigInt>{1, 0});
  // Product of invariants equals |det| for square matrices.
  std::mt19937_64 rng(41);
  for (int i = 0; i < 50; ++i) {
    IntMatrix a(3, 3);
    std::vector<std::vector<BigInt>> b(3, std::vector<BigInt>(3));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) b[r][c] = a(r, c) = std::uniform_int_distribution<int>(-5, 5)(rng);
    auto inv = smith_invariants(b);
    BigInt prod = 1;
    for (const auto& x : inv) prod *= x;
    BigInt det = determinant(a);
    CHECK(prod == (det < 0 ? BigInt(-det) : det));
    for (std::size_t k = 1; k < inv.size(); ++k)
      if (inv[k - 1] != 0) CHECK(inv[k] % inv[k - 1] == 0);
  }
}
