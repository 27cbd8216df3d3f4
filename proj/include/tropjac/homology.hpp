#pragma once

#include "tropjac/graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace tropjac {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Real 1-chain: one coefficient per edge id, relative to edge orientation.
struct OneChain {
  std::vector<double> coefficients;
};

/// Tropical 1-form sum a_e dt_e, t_e running along the edge orientation.
struct OneForm {
  std::vector<double> coefficients;
};

using IntegerChain = std::vector<std::int64_t>;

/// Ordered integer cycle basis identifying H_1(G, Z) with Z^n.
struct Marking {
  std::vector<IntegerChain> basis;

  int rank() const { return static_cast<int>(basis.size()); }
};

/// Raised when a marking is not a Z-basis of the cycle lattice of its graph.
class MarkingError : public GraphError {
 public:
  using GraphError::GraphError;
};

/// Sum of incoming minus sum of outgoing coefficients at each vertex.
std::vector<double> boundary(const MetricGraph& g, std::span<const double> chain);
std::vector<std::int64_t> boundary(const MetricGraph& g, std::span<const std::int64_t> chain);

bool is_cycle(const MetricGraph& g, std::span<const double> chain, double tol = 1e-12);
bool is_cycle(const MetricGraph& g, std::span<const std::int64_t> chain);

/// Fundamental cycles of the spanning tree built greedily in edge-id order.
/// One cycle per non-tree edge (ascending id); the non-tree edge carries +1
/// and the tree path back from its head to its tail completes the cycle.
Marking cycle_basis(const MetricGraph& g);

/// Edge ids of the spanning tree used by cycle_basis.
std::vector<int> spanning_tree(const MetricGraph& g);

/// Q(c1, c2) = sum_e c1_e c2_e l(e).
double q_pairing(const MetricGraph& g, std::span<const double> c1, std::span<const double> c2);
double q_pairing(const MetricGraph& g, const OneChain& c1, const OneChain& c2);

/// Throws MarkingError unless m is a Z-basis of the integer cycle lattice.
void validate_marking(const MetricGraph& g, const Marking& m);

/// P_ij = Q(sigma_i, sigma_j). Requires positive lengths and a valid marking.
Matrix period_matrix(const MetricGraph& g, const Marking& m);

/// Same entries in exact rational arithmetic.
std::vector<std::vector<Rational>> period_matrix_exact(const MetricGraph& g, const Marking& m);

/// Matrix of Q restricted to edge e: column(e) column(e)^T, where
/// column(e)_i is the coefficient of e in sigma_i. P = sum_e l(e) M_e.
Matrix edge_period_contribution(const Marking& m, int e);

/// Balancing at every vertex: outgoing minus incoming coefficients vanish.
bool is_one_form(const MetricGraph& g, const OneForm& w, double tol = 1e-12);

/// Period pairing of a form against a cycle, sum_e w_e c_e l(e).
double integrate(const MetricGraph& g, const OneForm& w, const OneChain& c);

/// The form i_Q(c) of an integer cycle: the same coefficients read as a_e.
OneForm cycle_to_form(const MetricGraph& g, std::span<const std::int64_t> cycle);

/// True iff every integral cycle lies in the Z-span of m.basis. The basis
/// vectors must be cycles; an index-k sublattice returns false.
bool principality_check(const MetricGraph& g, const Marking& m);

/// u p u^T for a unimodular integer u.
Matrix change_marking(const Matrix& p, const IntMatrix& u);

/// Exact determinant of a small integer matrix (fraction-free elimination).
BigInt determinant(const IntMatrix& u);

/// Diagonal of the Smith normal form, nonnegative, each dividing the next.
/// Zero entries fill out min(rows, cols).
std::vector<BigInt> smith_invariants(std::vector<std::vector<BigInt>> a);

}  // namespace tropjac
