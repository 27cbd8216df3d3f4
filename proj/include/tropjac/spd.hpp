#pragma once

#include "tropjac/homology.hpp"

#include <optional>
#include <stdexcept>

namespace tropjac {

class SpdError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The lattice enumeration would exceed its node budget; the matrix is too
/// ill-conditioned for exhaustive search.
class EnumerationOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-13 times the matrix norm.
SymmetricEigen jacobi_eigen(const Matrix& s);

/// Symmetric to 1e-12 (absolute) and Cholesky succeeds.
bool is_spd(const Matrix& y);

/// Throws SpdError naming `what` unless y is SPD.
void require_spd(const Matrix& y, const char* what);

/// Tr(y^-1 h1 y^-1 h2), the GL(n,R)-invariant tensor at y.
double tensor_eval(const Matrix& y, const Matrix& h1, const Matrix& h2);

/// Invariant distance sqrt(sum_i log^2 lambda_i), lambda the eigenvalues of
/// a^-1 b, computed as the spectrum of L^-1 b L^-T with a = L L^T.
double d_inv(const Matrix& a, const Matrix& b);

struct ShortestVector {
  double value = 0;
  IntVector witness;
};

/// Exact minimum of v^T q v over nonzero integer v by Cholesky-bounded
/// enumeration. Among minimizers the witness has its first nonzero entry
/// positive, then the smallest l1 norm, then is lexicographically largest.
ShortestVector shortest_vector(const Matrix& q, long long node_budget = 50'000'000);

/// First integer u with entries in [-radius, radius], |det u| = 1 and
/// ||u a u^T - b||_inf < 1e-9, searching by increasing max |entry| and then
/// lexicographically (row-major). std::nullopt is inconclusive.
std::optional<IntMatrix> glnz_equivalent(const Matrix& a, const Matrix& b, int radius);

}  // namespace tropjac
