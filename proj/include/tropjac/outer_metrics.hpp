#pragma once

#include "tropjac/homology.hpp"
#include "tropjac/spd.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tropjac {

class OuterSpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No connecting route within the search budget.
class NoRouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TensorKind { ds0, ds2, ds2_eps };

struct TensorSpec {
  TensorKind kind = TensorKind::ds2;
  double eps = 0;  // cutoff scale, ds2_eps only
};

std::string to_string(TensorKind k);
TensorKind parse_tensor_kind(const std::string& s);

/// Throws unless 0 < eps < 1/(6 genus) for ds2_eps.
void check_spec(const TensorSpec& spec, int genus);

/// Smoothed cycle length: l below eps, eps above 2 eps, and the cubic
/// Hermite blend eps (1 + s (1 - s)^2), s = (l - eps) / eps, in between.
double cutoff_length(double l, double eps);
double cutoff_derivative(double l, double eps);

/// Combinatorial data of a marked simplex: the graph type, its marking, the
/// homology column of every edge and the edge sets of all cycle subgraphs.
/// Coordinates are edge lengths x in R^E; intrinsic coordinates drop the
/// last edge, whose length is 1 - sum of the others.
class SimplexModel {
 public:
  SimplexModel(const MetricGraph& type, const Marking& marking);

  const MetricGraph& type() const { return type_; }
  const Marking& marking() const { return marking_; }
  int edge_count() const { return type_.edge_count(); }
  int genus() const { return marking_.rank(); }
  int dimension() const { return edge_count() - 1; }
  const IntMatrix& columns() const { return columns_; }  // genus x E
  const std::vector<std::vector<int>>& cycles() const { return cycles_; }

  Matrix period(const Vector& x) const;
  double cycle_length(std::size_t c, const Vector& x) const;
  double min_cycle_length(const Vector& x) const;

  /// x >= 0 and every cycle has positive length, i.e. x lies in the open
  /// simplex or on a face that belongs to outer space.
  bool admissible(const Vector& x) const;

  /// E x E Gram matrix of the tensor in edge-length coordinates.
  Matrix ambient_gram(const Vector& x, const TensorSpec& spec) const;
  /// Gram matrix in intrinsic coordinates, B^T A B with B = [I; -1^T].
  Matrix intrinsic_gram(const Vector& x, const TensorSpec& spec) const;
  /// v^T A(x) v for an ambient tangent vector v.
  double quadratic(const Vector& x, const Vector& v, const TensorSpec& spec) const;

  Vector from_intrinsic(const Vector& y) const;
  Vector to_intrinsic(const Vector& x) const;

 private:
  MetricGraph type_;
  Marking marking_;
  IntMatrix columns_;
  std::vector<std::vector<int>> cycles_;
};

/// A point of outer space: a marked metric graph whose edge lengths are the
/// simplex coordinates.
struct SimplexPoint {
  MetricGraph graph;
  Marking marking;
};

/// Sum 1 within 1e-12, valid combinatorial type, valid marking; coordinates
/// positive, or with allow_faces nonnegative with every cycle positive.
void validate_point(const SimplexPoint& p, bool allow_faces = false);

SimplexPoint make_point(const SimplexModel& model, const Vector& x);
Vector coordinates(const SimplexPoint& p);
bool same_simplex(const SimplexPoint& p, const SimplexPoint& q);

Matrix period_map(const SimplexPoint& p);

Matrix tensor_ds0(const SimplexPoint& p);
Matrix tensor_ds2(const SimplexPoint& p);
Matrix tensor_ds2_eps(const SimplexPoint& p, double eps);
Matrix tensor(const SimplexPoint& p, const TensorSpec& spec);

/// Euclidean distance of the coordinate vectors in R^E. Same type and
/// marking required.
double d0_simplex(const SimplexPoint& p, const SimplexPoint& q);

/// Face shared by the closures of two simplices: contracting forest_first
/// in the first type and forest_second in the second yields the same marked
/// graph. face_edge_first[e] is the face edge of edge e (-1 if contracted);
/// likewise for the second.
struct FaceMatch {
  std::vector<int> forest_first;
  std::vector<int> forest_second;
  std::vector<int> face_edge_first;
  std::vector<int> face_edge_second;
  int face_edges = 0;
};

/// All shared faces, largest first. Identical marked types share their
/// whole simplex (empty forests).
std::vector<FaceMatch> shared_faces(const SimplexModel& a, const SimplexModel& b);

/// Same point of outer space: equal after dropping zero-length edges.
bool same_point(const SimplexModel& a, const Vector& xa, const SimplexModel& b, const Vector& xb,
                double tol = 1e-12);

struct D0Bound {
  double value = 0;
  bool exact = false;            // same simplex
  Vector junction_first;  // face point of a routed bound, in each simplex
  Vector junction_second;
  std::optional<FaceMatch> face;
};

/// Same simplex: exact. Otherwise with budget >= 1, the shortest route through
/// one shared face. Throws NoRouteError when none exists within budget.
D0Bound d0_upper_bound(const SimplexPoint& p, const SimplexPoint& q, int budget = 1);

struct DistanceInterval {
  double lower = 0;
  double upper = 0;
};

enum class Combination { sum, root_sum_square, max };

DistanceInterval combined_distance(const SimplexPoint& p, const SimplexPoint& q, Combination how, int budget = 1);
DistanceInterval d1(const SimplexPoint& p, const SimplexPoint& q, int budget = 1);
DistanceInterval d2(const SimplexPoint& p, const SimplexPoint& q, int budget = 1);
DistanceInterval dinf(const SimplexPoint& p, const SimplexPoint& q, int budget = 1);

/// Piecewise-linear path; each leg is a polyline inside the closure of one
/// marked simplex, and consecutive legs meet at the same point.
struct PathLeg {
  MetricGraph type;
  Marking marking;
  std::vector<Vector> nodes;
};

struct PLPath {
  std::vector<PathLeg> legs;
};

PLPath straight_path(const SimplexPoint& p, const SimplexPoint& q, int segments = 1);

/// Throws OuterSpaceError on an inadmissible interior node, mismatched
/// junctions, or a node off the simplex. First and last node may lie on a
/// missing face.
void validate_path(const PLPath& path);

struct PathLength {
  double value = 0;
  double error = 0;
  bool converged = false;
  bool diverging = false;
  std::vector<double> trace;  // estimate per refinement level
};

PathLength path_length(const PLPath& path, const TensorSpec& spec, double rel_tol = 1e-6);

struct UpperBound {
  double value = 0;
  std::vector<double> trace;  // best length after each stage
  PLPath path;
};

struct OptimizerBudget {
  int refinements = 3;  // segment count doubles each stage
  int sweeps = 20;      // coordinate-descent sweeps per stage
};

/// Length of the best PL path found; the trace is nonincreasing and a larger
/// budget never returns a larger value.
UpperBound distance_upper_bound(const SimplexPoint& p, const SimplexPoint& q, const TensorSpec& spec,
                                OptimizerBudget budget = {}, int face_budget = 1);

struct VolumeResult {
  double value = 0;
  double error = 0;
  bool converged = false;
  std::vector<double> trace;  // estimate per corner refinement depth
};

/// Area of a 2-simplex (three edges) under the tensor, with dyadic
/// refinement toward the corners where a cycle vanishes.
VolumeResult simplex_area(const SimplexModel& model, const TensorSpec& spec, double tol = 1e-3, int max_depth = 40);

/// Area of the corner region {x : x_j + x_k <= region} at the simplex vertex
/// where only edge `apex` is nonzero.
VolumeResult corner_area(const SimplexModel& model, int apex, double region, const TensorSpec& spec,
                         double tol = 1e-3, int max_depth = 40);

/// Area element sqrt(det G) at an ambient point.
double area_element(const SimplexModel& model, const Vector& x, const TensorSpec& spec);

/// Least-squares slope of log area_element against log s along the ray from
/// the apex vertex toward the midpoint of the opposite edge, s the summed
/// length of the two vanishing edges, sampled at the given s values.
double corner_slope(const SimplexModel& model, int apex, const TensorSpec& spec, const std::vector<double>& s_values);

/// Theta type (two vertices, three edges 0 -> 1) and its marking with cycles
/// e0 - e1 and e2 - e1.
MetricGraph theta_type();
Marking theta_marking();

}  // namespace tropjac
