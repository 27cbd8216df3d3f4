#pragma once

#include <array>
#include <functional>
#include <vector>

namespace tropjac::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n), cached per n.
const Rule& gauss_legendre(int n);

struct SegmentResult {
  double value = 0;
  double error = 0;
  bool converged = true;
  long evaluations = 0;
};

/// Adaptive bisection with a 7-point Gauss rule per panel, accepting a panel
/// when it agrees with the sum of its halves to rel_tol (relative to the
/// running total) or abs_floor. Panels deeper than max_depth mark the result
/// unconverged.
SegmentResult integrate_segment(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                int max_depth = 50, double abs_floor = 1e-300);

using Point = std::array<double, 2>;
using Triangle = std::array<Point, 3>;

/// 7x7 collapsed (Duffy) Gauss product rule on a triangle, collapsing onto
/// vertex 0. The u-Jacobian damps a point singularity at that vertex.
double triangle_rule(const std::function<double(const Point&)>& f, const Triangle& t);

/// The four midpoint children; child i (i < 3) keeps vertex i of t as its
/// vertex 0, child 3 is the central triangle.
std::array<Triangle, 4> split(const Triangle& t);

double area(const Triangle& t);

struct AdaptiveResult {
  double value = 0;
  double error = 0;
  bool converged = true;
};

/// Adaptive midpoint refinement of a cell whose integrand is smooth on the
/// closed cell.
AdaptiveResult integrate_regular(const std::function<double(const Point&)>& f, const Triangle& t, double rel_tol,
                                 int max_depth = 10);

}  // namespace tropjac::quad
