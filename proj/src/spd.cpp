#include "tropjac/spd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tropjac {

SymmetricEigen jacobi_eigen(const Matrix& s) {
  if (s.rows() != s.cols()) throw SpdError("jacobi_eigen: matrix is not square");
  const Eigen::Index n = s.rows();
  Matrix a = 0.5 * (s + s.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());

  auto off = [&] {
    double sum = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
  };

  for (int sweep = 0; sweep < 100 && off() > 1e-13 * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

bool is_spd(const Matrix& y) {
  if (y.rows() != y.cols() || y.rows() == 0) return false;
  if (!y.allFinite()) return false;
  if (((y - y.transpose()).cwiseAbs().maxCoeff()) > 1e-12) return false;
  Eigen::LLT<Matrix> llt(y);
  if (llt.info() != Eigen::Success) return false;
  return (llt.matrixL().toDenseMatrix().diagonal().array() > 0).all();
}

void require_spd(const Matrix& y, const char* what) {
  if (!is_spd(y)) throw SpdError(std::string(what) + ": matrix is not symmetric positive definite");
}

namespace {

void require_symmetric(const Matrix& h, Eigen::Index n, const char* what) {
  if (h.rows() != n || h.cols() != n) throw SpdError(std::string(what) + ": dimension mismatch");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw SpdError(std::string(what) + ": tangent is not symmetric");
}

}  // namespace

double tensor_eval(const Matrix& y, const Matrix& h1, const Matrix& h2) {
  require_spd(y, "tensor_eval");
  require_symmetric(h1, y.rows(), "tensor_eval");
  require_symmetric(h2, y.rows(), "tensor_eval");
  Eigen::LLT<Matrix> llt(y);
  Matrix a = llt.solve(h1);
  Matrix b = llt.solve(h2);
  return (a * b).trace();
}

double d_inv(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw SpdError("d_inv: dimension mismatch");
  require_spd(a, "d_inv");
  require_spd(b, "d_inv");
  if (a == b) return 0;
  Eigen::LLT<Matrix> llt(a);
  Matrix linv_b = llt.matrixL().solve(b);
  Matrix c = llt.matrixL().solve(linv_b.transpose());
  auto eig = jacobi_eigen(c);
  double sum = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) <= 0) throw SpdError("d_inv: lost positive definiteness numerically");
    double l = std::log(eig.values(i));
    sum += l * l;
  }
  return std::sqrt(sum);
}

ShortestVector shortest_vector(const Matrix& q, long long node_budget) {
  require_spd(q, "shortest_vector");
  const Eigen::Index n = q.rows();
  Eigen::LLT<Matrix> llt(q);
  // q = R^T R with R upper triangular; v^T q v = sum_i (R_ii v_i + sum_{j>i} R_ij v_j)^2.
  Matrix r = llt.matrixU();

  double bound = q.diagonal().minCoeff();
  const double slack = 1e-10;
  std::vector<IntVector> ties;
  double best = std::numeric_limits<double>::infinity();

  IntVector v = IntVector::Zero(n);
  long long nodes = 0;
  // Partial sums: tail[i] = sum over rows k >= i of squared row terms.
  std::vector<double> tail(static_cast<std::size_t>(n + 1), 0.0);

  auto descend = [&](auto&& self, Eigen::Index i, bool higher_all_zero) -> void {
    if (++nodes > node_budget)
      throw EnumerationOverflow("shortest_vector: enumeration exceeded " + std::to_string(node_budget) +
                                " nodes; matrix too ill-conditioned");
    double center_num = 0;
    for (Eigen::Index j = i + 1; j < n; ++j) center_num += r(i, j) * static_cast<double>(v(j));
    const double rii = r(i, i);
    const double center = -center_num / rii;
    const double room = bound * (1 + slack) - tail[static_cast<std::size_t>(i + 1)];
    if (room < 0) return;
    const double half_width = std::sqrt(room) / rii;
    if (half_width > 1e7) throw EnumerationOverflow("shortest_vector: coordinate range too large");
    long long lo = static_cast<long long>(std::ceil(center - half_width));
    long long hi = static_cast<long long>(std::floor(center + half_width));
    if (higher_all_zero) lo = std::max(lo, 0LL);  // fix the sign of the last nonzero entry
    for (long long x = lo; x <= hi; ++x) {
      v(i) = x;
      const double term = rii * static_cast<double>(x) + center_num;
      tail[static_cast<std::size_t>(i)] = tail[static_cast<std::size_t>(i + 1)] + term * term;
      if (tail[static_cast<std::size_t>(i)] > bound * (1 + slack)) continue;
      const bool all_zero = higher_all_zero && x == 0;
      if (i == 0) {
        if (all_zero) continue;
        double value = static_cast<double>((v.cast<double>().transpose() * q * v.cast<double>())(0, 0));
        if (value < best * (1 - slack)) {
          best = value;
          ties.clear();
          bound = std::min(bound, value);
        }
        if (value <= best * (1 + slack)) ties.push_back(v);
      } else {
        self(self, i - 1, all_zero);
      }
    }
    v(i) = 0;
  };
  descend(descend, n - 1, true);

  if (ties.empty()) throw EnumerationOverflow("shortest_vector: no lattice vector found within bound");
  for (auto& t : ties) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (t(i) != 0) {
        if (t(i) < 0) t = -t;
        break;
      }
  }
  auto l1 = [](const IntVector& t) { return t.cwiseAbs().sum(); };
  std::sort(ties.begin(), ties.end(), [&](const IntVector& a, const IntVector& b) {
    if (l1(a) != l1(b)) return l1(a) < l1(b);
    return std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size());
  });
  ShortestVector out;
  out.witness = ties.front();
  Vector w = out.witness.cast<double>();
  out.value = w.dot(q * w);
  return out;
}

std::optional<IntMatrix> glnz_equivalent(const Matrix& a, const Matrix& b, int radius) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::nullopt;
  if (radius < 1) throw SpdError("glnz_equivalent: radius must be at least 1");
  require_spd(a, "glnz_equivalent");
  require_spd(b, "glnz_equivalent");
  const Eigen::Index n = a.rows();
  constexpr double tol = 1e-9;

  // Candidate rows for max-entry m, lexicographic in [-m, m]^n.
  auto candidates_for = [&](int m) {
    std::vector<IntVector> rows;
    IntVector w = IntVector::Constant(n, -m);
    for (;;) {
      rows.push_back(w);
      Eigen::Index k = n - 1;
      while (k >= 0 && w(k) == m) {
        w(k) = -m;
        --k;
      }
      if (k < 0) break;
      ++w(k);
    }
    return rows;
  };

  for (int m = 1; m <= radius; ++m) {
    auto all_rows = candidates_for(m);
    // Per target row i, keep rows whose quadratic value matches b_ii.
    std::vector<std::vector<Vector>> pool(static_cast<std::size_t>(n));
    std::vector<std::vector<IntVector>> pool_int(static_cast<std::size_t>(n));
    for (const auto& w : all_rows) {
      Vector wd = w.cast<double>();
      double val = wd.dot(a * wd);
      for (Eigen::Index i = 0; i < n; ++i)
        if (std::abs(val - b(i, i)) < tol) {
          pool[static_cast<std::size_t>(i)].push_back(a * wd);
          pool_int[static_cast<std::size_t>(i)].push_back(w);
        }
    }

    IntMatrix u(n, n);
    std::vector<std::size_t> pick(static_cast<std::size_t>(n));
    std::optional<IntMatrix> found;
    auto place = [&](auto&& self, Eigen::Index i) -> bool {
      if (i == n) {
        if (u.cwiseAbs().maxCoeff() != m) return false;
        BigInt d = determinant(u);
        if (d != 1 && d != -1) return false;
        Matrix ud = u.cast<double>();
        if ((ud * a * ud.transpose() - b).cwiseAbs().maxCoeff() >= tol) return false;
        found = u;
        return true;
      }
      const auto& cands = pool_int[static_cast<std::size_t>(i)];
      for (std::size_t c = 0; c < cands.size(); ++c) {
        bool ok = true;
        for (Eigen::Index j = 0; j < i && ok; ++j) {
          const Vector& aw = pool[static_cast<std::size_t>(i)][c];
          double cross = u.row(j).cast<double>().dot(aw);
          ok = std::abs(cross - b(j, i)) < tol;
        }
        if (!ok) continue;
        u.row(i) = cands[c].transpose();
        if (self(self, i + 1)) return true;
      }
      return false;
    };
    if (place(place, 0)) return found;
  }
  return std::nullopt;
}

}  // namespace tropjac
