#include "tropjac/homology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tropjac {

namespace {

void check_size(const MetricGraph& g, std::size_t n, const char* what) {
  if (n != static_cast<std::size_t>(g.edge_count()))
    throw GraphError(std::string(what) + ": coefficient count " + std::to_string(n) + " does not match " +
                     std::to_string(g.edge_count()) + " edges");
}

template <class T>
std::vector<T> boundary_impl(const MetricGraph& g, std::span<const T> chain) {
  check_size(g, chain.size(), "boundary");
  std::vector<T> out(static_cast<std::size_t>(g.vertex_count()), T{0});
  for (const auto& e : g.edges()) {
    if (e.is_loop()) continue;
    out[e.dst] += chain[e.id];
    out[e.src] -= chain[e.id];
  }
  return out;
}

}  // namespace

std::vector<double> boundary(const MetricGraph& g, std::span<const double> chain) {
  return boundary_impl(g, chain);
}

std::vector<std::int64_t> boundary(const MetricGraph& g, std::span<const std::int64_t> chain) {
  return boundary_impl(g, chain);
}

bool is_cycle(const MetricGraph& g, std::span<const double> chain, double tol) {
  auto b = boundary(g, chain);
  return std::all_of(b.begin(), b.end(), [tol](double x) { return std::abs(x) <= tol; });
}

bool is_cycle(const MetricGraph& g, std::span<const std::int64_t> chain) {
  auto b = boundary(g, chain);
  return std::all_of(b.begin(), b.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<int> spanning_tree(const MetricGraph& g) {
  if (!is_connected(g)) throw GraphError("spanning_tree: graph is disconnected");
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> tree;
  for (const auto& e : g.edges()) {
    int a = find(e.src), b = find(e.dst);
    if (a == b) continue;
    parent[a] = b;
    tree.push_back(e.id);
  }
  return tree;
}

Marking cycle_basis(const MetricGraph& g) {
  auto tree = spanning_tree(g);
  const int n = g.vertex_count();
  std::vector<bool> in_tree(static_cast<std::size_t>(g.edge_count()), false);
  for (int id : tree) in_tree[id] = true;

  // Root the tree at vertex 0: parent vertex, parent edge and the sign of
  // walking from a vertex up to its parent along that edge.
  std::vector<std::vector<int>> tree_adj(static_cast<std::size_t>(n));
  for (int id : tree) {
    tree_adj[g.edge(id).src].push_back(id);
    tree_adj[g.edge(id).dst].push_back(id);
  }
  std::vector<int> up_edge(static_cast<std::size_t>(n), -1), up_vertex(static_cast<std::size_t>(n), -1),
      depth(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> up_sign(static_cast<std::size_t>(n), 0);
  std::vector<int> order{0};
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    for (int id : tree_adj[v]) {
      const Edge& e = g.edge(id);
      int w = e.src == v ? e.dst : e.src;
      if (seen[w]) continue;
      seen[w] = true;
      up_edge[w] = id;
      up_vertex[w] = v;
      up_sign[w] = (e.src == w) ? 1 : -1;  // w -> v along orientation when src == w
      depth[w] = depth[v] + 1;
      order.push_back(w);
    }
  }

  Marking m;
  for (const auto& e : g.edges()) {
    if (in_tree[e.id]) continue;
    IntegerChain c(static_cast<std::size_t>(g.edge_count()), 0);
    c[e.id] = 1;
    // Close the cycle by walking from head (dst) back to tail (src).
    int a = e.dst, b = e.src;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        c[up_edge[a]] += up_sign[a];
        a = up_vertex[a];
      } else {
        // Path segment from the meeting point down to src, traversed downward.
        c[up_edge[b]] -= up_sign[b];
        b = up_vertex[b];
      }
    }
    m.basis.push_back(std::move(c));
  }
  return m;
}

double q_pairing(const MetricGraph& g, std::span<const double> c1, std::span<const double> c2) {
  check_size(g, c1.size(), "q_pairing");
  check_size(g, c2.size(), "q_pairing");
  double s = 0;
  for (const auto& e : g.edges()) s += c1[e.id] * c2[e.id] * e.length;
  return s;
}

double q_pairing(const MetricGraph& g, const OneChain& c1, const OneChain& c2) {
  return q_pairing(g, c1.coefficients, c2.coefficients);
}

std::vector<BigInt> smith_invariants(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  const std::size_t diag = std::min(rows, cols);
  std::vector<BigInt> out;
  using boost::multiprecision::abs;

  for (std::size_t t = 0; t < diag; ++t) {
    // Pivot: smallest nonzero magnitude in the trailing block.
    auto find_pivot = [&](std::size_t& pr, std::size_t& pc) {
      bool found = false;
      BigInt best;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (!found || abs(a[i][j]) < best)) {
            best = abs(a[i][j]);
            pr = i;
            pc = j;
            found = true;
          }
      return found;
    };
    std::size_t pr = 0, pc = 0;
    if (!find_pivot(pr, pc)) {
      for (; t < diag; ++t) out.push_back(0);
      break;
    }
    for (;;) {
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        BigInt q = a[i][t] / a[t][t];
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        BigInt q = a[t][j] / a[t][t];
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (clean) {
        // Divisibility: fold any trailing entry not divisible by the pivot.
        bool divisible = true;
        for (std::size_t i = t + 1; i < rows && divisible; ++i)
          for (std::size_t j = t + 1; j < cols; ++j)
            if (a[i][j] % a[t][t] != 0) {
              for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
              divisible = false;
              break;
            }
        if (divisible) break;
      }
      find_pivot(pr, pc);
    }
    out.push_back(abs(a[t][t]));
  }
  return out;
}

namespace {

std::vector<std::vector<BigInt>> to_big(const Marking& m) {
  std::vector<std::vector<BigInt>> rows;
  for (const auto& c : m.basis) {
    std::vector<BigInt> row;
    row.reserve(c.size());
    for (auto x : c) row.emplace_back(x);
    rows.push_back(std::move(row));
  }
  return rows;
}

// The cycle lattice is saturated in Z^E, so n independent cycles span it
// exactly when every Smith invariant of their coefficient matrix is 1.
bool spans_cycle_lattice(const MetricGraph& g, const Marking& m) {
  if (m.rank() != genus(g)) return false;
  if (m.rank() == 0) return true;
  auto inv = smith_invariants(to_big(m));
  return std::all_of(inv.begin(), inv.end(), [](const BigInt& d) { return d == 1; });
}

void check_cycles(const MetricGraph& g, const Marking& m, const char* what) {
  for (std::size_t i = 0; i < m.basis.size(); ++i) {
    check_size(g, m.basis[i].size(), what);
    if (!is_cycle(g, std::span<const std::int64_t>(m.basis[i])))
      throw MarkingError(std::string(what) + ": basis vector " + std::to_string(i) + " is not a cycle");
  }
}

}  // namespace

void validate_marking(const MetricGraph& g, const Marking& m) {
  check_cycles(g, m, "marking");
  const int n = genus(g);
  if (m.rank() != n)
    throw MarkingError("marking: expected " + std::to_string(n) + " basis cycles, got " + std::to_string(m.rank()));
  if (!spans_cycle_lattice(g, m)) throw MarkingError("marking: basis does not span the integer cycle lattice");
}

Matrix edge_period_contribution(const Marking& m, int e) {
  const int n = m.rank();
  Vector col(n);
  for (int i = 0; i < n; ++i) col(i) = static_cast<double>(m.basis[i].at(static_cast<std::size_t>(e)));
  return col * col.transpose();
}

Matrix period_matrix(const MetricGraph& g, const Marking& m) {
  if (!g.all_positive()) throw GraphError("period_matrix: lengths must be positive");
  validate_marking(g, m);
  const int n = m.rank();
  Matrix p = Matrix::Zero(n, n);
  for (const auto& e : g.edges())
    for (int i = 0; i < n; ++i) {
      auto ci = m.basis[i][e.id];
      if (ci == 0) continue;
      for (int j = 0; j < n; ++j) p(i, j) += static_cast<double>(ci * m.basis[j][e.id]) * e.length;
    }
  return p;
}

std::vector<std::vector<Rational>> period_matrix_exact(const MetricGraph& g, const Marking& m) {
  if (!g.all_positive()) throw GraphError("period_matrix: lengths must be positive");
  validate_marking(g, m);
  const auto n = static_cast<std::size_t>(m.rank());
  std::vector<std::vector<Rational>> p(n, std::vector<Rational>(n, Rational(0)));
  for (const auto& e : g.edges())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        auto c = m.basis[i][e.id] * m.basis[j][e.id];
        if (c != 0) p[i][j] += Rational(c) * e.exact;
      }
  return p;
}

bool is_one_form(const MetricGraph& g, const OneForm& w, double tol) {
  check_size(g, w.coefficients.size(), "is_one_form");
  return is_cycle(g, std::span<const double>(w.coefficients), tol);
}

double integrate(const MetricGraph& g, const OneForm& w, const OneChain& c) {
  if (!is_one_form(g, w, 1e-9)) throw GraphError("integrate: form is not balanced");
  check_size(g, c.coefficients.size(), "integrate");
  if (!is_cycle(g, std::span<const double>(c.coefficients), 1e-9)) throw GraphError("integrate: chain is not a cycle");
  return q_pairing(g, w.coefficients, c.coefficients);
}

OneForm cycle_to_form(const MetricGraph& g, std::span<const std::int64_t> cycle) {
  check_size(g, cycle.size(), "cycle_to_form");
  if (!is_cycle(g, cycle)) throw GraphError("cycle_to_form: chain is not a cycle");
  OneForm w;
  w.coefficients.assign(cycle.begin(), cycle.end());
  return w;
}

bool principality_check(const MetricGraph& g, const Marking& m) {
  check_cycles(g, m, "principality_check");
  return spans_cycle_lattice(g, m);
}

BigInt determinant(const IntMatrix& u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("determinant: matrix is not square");
  const auto n = static_cast<std::size_t>(u.rows());
  if (n == 0) return 1;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  // Bareiss fraction-free elimination.
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

Matrix change_marking(const Matrix& p, const IntMatrix& u) {
  if (u.rows() != p.rows() || u.cols() != p.cols())
    throw std::invalid_argument("change_marking: dimension mismatch");
  BigInt d = determinant(u);
  if (d != 1 && d != -1) throw std::invalid_argument("change_marking: matrix is not unimodular");
  Matrix ud = u.cast<double>();
  return ud * p * ud.transpose();
}

}  // namespace tropjac
