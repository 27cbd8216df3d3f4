#pragma once

#include "tropjac/rational.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tropjac {

class TropicalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "a x^j y^k", i.e. the affine function j x + k y + a.
struct Monomial {
  int j = 0;
  int k = 0;
  Rational a;
};

/// Tropical polynomial in two variables: the max of its monomials.
struct TropicalPolynomial2 {
  std::vector<Monomial> monomials;
};

using Point2 = std::array<Rational, 2>;
using Lattice2 = std::array<long long, 2>;

struct Ray {
  Lattice2 primitive{};
  int weight = 1;
};

struct VertexStar {
  Point2 vertex;
  std::vector<Ray> rays;  // sorted by primitive direction
};

/// Maximal segment (or ray, or line) of the corner locus. Points are
/// origin + t * direction for t in [lower, upper]; a missing bound is
/// unbounded on that side.
struct CornerEdge {
  int monomial_a = 0;  // extreme pair of monomials attaining the max
  int monomial_b = 0;
  Point2 origin;
  Lattice2 direction{};  // primitive
  std::optional<Rational> lower;
  std::optional<Rational> upper;
  int weight = 1;
};

struct CornerLocus {
  std::vector<VertexStar> vertices;  // sorted lexicographically
  std::vector<CornerEdge> edges;

  bool contains(const Point2& p) const;
};

/// Throws TropicalError on fewer than 2 monomials or repeated exponents.
void validate(const TropicalPolynomial2& p);

Rational eval_exact(const TropicalPolynomial2& p, const Rational& x, const Rational& y);
double eval(const TropicalPolynomial2& p, double x, double y);

/// Where the maximum is attained at least twice, computed exactly from the
/// pairwise equality lines clipped by every other monomial. At most 12
/// monomials.
CornerLocus corner_locus(const TropicalPolynomial2& p);

/// gcd(|j1 - j2|, |k1 - k2|). Throws on equal exponents.
int weight(const Monomial& m1, const Monomial& m2);

/// Sum of weight * primitive over the rays is zero.
bool check_balancing(const VertexStar& v);

/// Euclidean length assigned to the primitive vector of an edge of the
/// given weight in the induced metric: 1 / weight.
double induced_edge_scale(int edge_weight);

/// Length of a bounded corner edge in the induced metric, i.e. its lattice
/// length divided by its weight. std::nullopt for unbounded edges.
std::optional<Rational> induced_edge_length(const CornerEdge& e);

}  // namespace tropjac
