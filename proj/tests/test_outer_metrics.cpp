#include "tropjac/corpus.hpp"
#include "tropjac/outer_metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tropjac;

namespace {

SimplexModel theta_model() { return SimplexModel(theta_type(), theta_marking()); }

SimplexPoint theta_at(double a, double b) { return make_point(theta_model(), Vector{{a, b, 1 - a - b}}); }

Vector random_interior(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector x(m);
  for (int e = 0; e < m; ++e) x(e) = u(rng);
  x /= x.sum();
  x(m - 1) = 1 - x.head(m - 1).sum();
  return x;
}

Vector random_tangent(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vector v(m);
  for (int e = 0; e < m; ++e) v(e) = u(rng);
  v.array() -= v.mean();
  return v;
}

// d log det-free form: |v|^2 + Tr(P^-1 dP P^-1 dP) with dP the derivative of the period matrix along v.
double ds2_oracle(const SimplexModel& m, const Vector& x, const Vector& v) {
  const Matrix p = m.period(x);
  const Matrix dp = m.period(v);  // period is linear in the lengths
  const Matrix s = p.inverse() * dp;
  return v.squaredNorm() + (s * s).trace();
}

double hand_d_inv(const Matrix& a, const Matrix& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(b, a);
  return es.eigenvalues().array().log().matrix().norm();
}

}  // namespace

TEST_CASE("smoothed cycle length") {
  CHECK(cutoff_length(0.02, 0.05) == doctest::Approx(0.02));
  CHECK(cutoff_length(0.2, 0.05) == doctest::Approx(0.05));
  CHECK(cutoff_length(0.075, 0.05) == doctest::Approx(0.05625));
  CHECK(cutoff_derivative(0.02, 0.05) == 1);
  CHECK(cutoff_derivative(0.2, 0.05) == 0);
  // C1 at both junctions, and the derivative matches finite differences.
  for (double l : {0.05, 0.1}) {
    CHECK(cutoff_length(l - 1e-9, 0.05) == doctest::Approx(cutoff_length(l + 1e-9, 0.05)).epsilon(1e-7));
    CHECK(cutoff_derivative(l - 1e-9, 0.05) == doctest::Approx(cutoff_derivative(l + 1e-9, 0.05)).epsilon(1e-6));
  }
  for (double l = 0.051; l < 0.1; l += 0.007) {
    const double fd = (cutoff_length(l + 1e-7, 0.05) - cutoff_length(l - 1e-7, 0.05)) / 2e-7;
    CHECK(cutoff_derivative(l, 0.05) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(cutoff_length(l, 0.05) > 0);
  }
}

TEST_CASE("tensor specs are validated") {
  CHECK(parse_tensor_kind("ds2eps") == TensorKind::ds2_eps);
  CHECK(parse_tensor_kind("ds0") == TensorKind::ds0);
  CHECK_THROWS(parse_tensor_kind("ds3"));
  CHECK_NOTHROW(check_spec({TensorKind::ds2_eps, 0.08}, 2));
  CHECK_THROWS(check_spec({TensorKind::ds2_eps, 1.0 / 12}, 2));
  CHECK_THROWS(check_spec({TensorKind::ds2_eps, 0}, 2));
}

TEST_CASE("points are validated") {
  CHECK_THROWS_AS(validate_point({theta_graph(Rational(1, 2), Rational(1, 2), Rational(1, 2)), theta_marking()}),
                  OuterSpaceError);
  CHECK_THROWS(validate_point({theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5)), {{{1, 1, 0}, {0, -1, 1}}}}));
  CHECK_NOTHROW(validate_point({theta_graph(Rational(1, 2), Rational(3, 10), Rational(1, 5)), theta_marking()}));
  CHECK(theta_model().admissible(Vector{{0.5, 0.5, 0}}));
  CHECK_FALSE(theta_model().admissible(Vector{{1, 0, 0}}));
}

TEST_CASE("Euclidean simplex distance") {
  const SimplexPoint p = theta_at(1.0 / 3, 1.0 / 3), q = theta_at(0.5, 0.3);
  CHECK(d0_simplex(p, p) == 0);
  CHECK(d0_simplex(p, q) == doctest::Approx(std::sqrt(1.0 / 36 + 1.0 / 900 + 4.0 / 225)));
  CHECK(d0_simplex(p, q) == doctest::Approx(0.2160).epsilon(1e-4));
  CHECK(d0_simplex(theta_at(0.98, 0.01), theta_at(0.01, 0.98)) == doctest::Approx(0.97 * std::sqrt(2.0)));
}

TEST_CASE("distance intervals on the theta pair") {
  const SimplexPoint p = theta_at(1.0 / 3, 1.0 / 3), q = theta_at(0.5, 0.3);
  const Matrix pp{{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}}, pq{{0.8, 0.3}, {0.3, 0.5}};
  const double d0 = std::sqrt(1.0 / 36 + 1.0 / 900 + 4.0 / 225), dj = hand_d_inv(pp, pq);
  CHECK((period_map(q) - pq).norm() < 1e-15);

  auto one = d1(p, q), two = d2(p, q), inf = dinf(p, q);
  CHECK(one.upper == doctest::Approx(d0 + dj));
  CHECK(two.upper == doctest::Approx(std::hypot(d0, dj)));
  CHECK(inf.upper == doctest::Approx(std::max(d0, dj)));
  for (const auto& r : {one, two, inf}) CHECK(r.lower <= r.upper);
  for (auto r : {d1(p, p), d2(p, p), dinf(p, p)}) {
    CHECK(r.lower == 0);
    CHECK(r.upper == 0);
  }
  CHECK(d_inv(period_map(q), period_map(q)) == 0);
}

TEST_CASE("flat and singular tensors") {
  const Matrix g0{{2, 1}, {1, 2}};
  CHECK((tensor_ds0(theta_at(0.5, 0.3)) - g0).norm() == 0);
  CHECK((tensor_ds2_eps(theta_at(1.0 / 3, 1.0 / 3), 0.05) - g0).norm() < 1e-14);

  // Only the short cycle {0, 1} contributes, with l_eps = l.
  const SimplexModel m = theta_model();
  const Vector x{{0.01, 0.02, 0.97}};
  std::mt19937_64 rng(59);
  for (int i = 0; i < 20; ++i) {
    const Vector v = random_tangent(rng, 3);
    const double expected = v.squaredNorm() + std::pow((v(0) + v(1)) / 0.03, 2);
    CHECK(m.quadratic(x, v, {TensorKind::ds2_eps, 0.05}) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("ds2 tensor equals the pulled-back invariant tensor and is positive definite") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 1000; ++i) {
    MetricGraph g = random_outer_graph(rng, std::uniform_int_distribution<int>(2, 3)(rng), 7);
    SimplexModel m(g, random_marking(rng, g, 3));
    const Vector x = random_interior(rng, m.edge_count());
    const SimplexPoint p = make_point(m, x);
    const Matrix t = tensor_ds2(p);
    CHECK(is_spd(t));
    CHECK(is_spd(tensor_ds2_eps(p, 0.9 / (6 * m.genus()))));
    if (i % 10 == 0) {
      const Vector v = random_tangent(rng, m.edge_count());
      CHECK(m.quadratic(x, v, {TensorKind::ds2, 0}) == doctest::Approx(ds2_oracle(m, x, v)).epsilon(1e-10));
      // The intrinsic Gram matrix is the ambient one restricted to sum-zero directions.
      const Vector y = v.head(m.edge_count() - 1);
      CHECK(y.dot(t * y) == doctest::Approx(m.quadratic(x, v, {TensorKind::ds2, 0})).epsilon(1e-10));
    }
  }
}

TEST_CASE("tensors do not depend on the marking") {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 50; ++i) {
    MetricGraph g = random_outer_graph(rng, 3, 8);
    const Vector x = random_interior(rng, g.edge_count());
    SimplexModel a(g, cycle_basis(g)), b(g, random_marking(rng, g, 6));
    const SimplexPoint pa = make_point(a, x), pb = make_point(b, x);
    CHECK((tensor_ds2(pa) - tensor_ds2(pb)).cwiseAbs().maxCoeff() < 1e-8 * tensor_ds2(pa).norm());
    CHECK((tensor_ds2_eps(pa, 0.05) - tensor_ds2_eps(pb, 0.05)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("ds2_eps is continuous at the saturation threshold") {
  // A jump would leave a gap that does not shrink with the sampling offset.
  const SimplexModel m = theta_model();
  const Vector v{{0.3, -0.1, -0.2}};
  for (double eps : {0.02, 0.05, 0.08}) {
    const TensorSpec spec{TensorKind::ds2_eps, eps};
    for (double l : {2 * eps, eps}) {
      auto gap = [&](double h) {
        const Vector below{{l / 2 - h / 2, l / 2 - h / 2, 1 - l + h}}, above{{l / 2 + h / 2, l / 2 + h / 2, 1 - l - h}};
        return std::abs(m.quadratic(below, v, spec) - m.quadratic(above, v, spec));
      };
      const double wide = gap(1e-7), narrow = gap(1e-9);
      CHECK(narrow <= 0.05 * wide + 1e-9);
      CHECK(wide <= 1e-7 * 1e5);
    }
  }
}

TEST_CASE("path lengths") {
  const SimplexPoint p = theta_at(1.0 / 3, 1.0 / 3), q = theta_at(0.5, 0.3);
  CHECK(path_length(straight_path(p, p), {TensorKind::ds2, 0}).value == 0);
  // Under the flat tensor a straight path has its Euclidean length.
  auto flat = path_length(straight_path(p, q, 4), {TensorKind::ds0, 0});
  CHECK(flat.value == doctest::Approx(d0_simplex(p, q)).epsilon(1e-9));

  const SimplexPoint start = theta_at(0.25, 0.25);
  double previous = 0;
  for (int k = 1; k <= 8; ++k) {
    const double t = std::pow(10.0, -k);
    auto r = path_length(straight_path(start, theta_at(t, t)), {TensorKind::ds2, 0});
    CHECK(r.converged);
    CHECK(r.value > previous);
    previous = r.value;
  }
  CHECK(previous > 10);
}

TEST_CASE("paths into a missing face diverge under ds2 only") {
  PLPath path{{PathLeg{theta_type(), theta_marking(), {Vector{{0.25, 0.25, 0.5}}, Vector{{0, 0, 1}}}}}};
  CHECK_NOTHROW(validate_path(path));
  auto singular = path_length(path, {TensorKind::ds2, 0});
  CHECK(singular.diverging);
  auto flat = path_length(path, {TensorKind::ds0, 0});
  CHECK_FALSE(flat.diverging);
  CHECK(flat.value == doctest::Approx(std::sqrt(0.0625 * 2 + 0.25)).epsilon(1e-9));
  auto eps = path_length(path, {TensorKind::ds2_eps, 0.05});
  CHECK(eps.diverging);

  PLPath through{{PathLeg{theta_type(), theta_marking(),
                          {Vector{{0.25, 0.25, 0.5}}, Vector{{0, 0, 1}}, Vector{{0.3, 0.3, 0.4}}}}}};
  CHECK_THROWS_AS(validate_path(through), OuterSpaceError);
}

TEST_CASE("optimized upper bounds") {
  const SimplexPoint p = theta_at(1.0 / 3, 1.0 / 3), q = theta_at(0.05, 0.05);
  CHECK(distance_upper_bound(p, p, {TensorKind::ds2, 0}).value == 0);
  double previous = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= 3; ++r) {
    auto ub = distance_upper_bound(p, q, {TensorKind::ds2, 0}, {r, 20});
    CHECK(ub.value <= previous + 1e-12);
    for (std::size_t i = 1; i < ub.trace.size(); ++i) CHECK(ub.trace[i] <= ub.trace[i - 1]);
    CHECK(ub.value == doctest::Approx(path_length(ub.path, {TensorKind::ds2, 0}).value).epsilon(1e-5));
    previous = ub.value;
  }
  auto flat = distance_upper_bound(p, q, {TensorKind::ds0, 0}, {2, 20});
  CHECK(flat.value == doctest::Approx(d0_simplex(p, q)).epsilon(1e-9));
}

TEST_CASE("shared faces and neighbouring simplices") {
  const SimplexModel theta = theta_model();
  auto self = shared_faces(theta, theta);
  REQUIRE_FALSE(self.empty());
  CHECK(self.front().face_edges == 3);
  CHECK(self.front().forest_first.empty());

  // Same simplex under another marking of the same type.
  SimplexModel relabeled(theta_type(), {{{1, 0, -1}, {0, 1, -1}}});
  CHECK(shared_faces(theta, relabeled).front().face_edges == 3);

  std::mt19937_64 rng(71);
  int glued = 0;
  for (int i = 0; i < 40; ++i) {
    MetricGraph g = random_outer_graph(rng, 3, 8);
    SimplexModel a(g, random_marking(rng, g, 3));
    for (const auto& e : g.edges()) {
      if (e.is_loop()) continue;
      for (const auto& b : neighbor_simplices(a, e.id)) {
        auto faces = shared_faces(a, b);
        REQUIRE_FALSE(faces.empty());
        CHECK(faces.front().face_edges == a.edge_count() - 1);
        const FaceMatch& f = faces.front();
        // A face point is the same point of outer space seen from either side.
        const Vector z = random_interior(rng, f.face_edges);
        Vector xa = Vector::Zero(a.edge_count()), xb = Vector::Zero(b.edge_count());
        for (int k = 0; k < a.edge_count(); ++k)
          if (f.face_edge_first[k] >= 0) xa(k) = z(f.face_edge_first[k]);
        for (int k = 0; k < b.edge_count(); ++k)
          if (f.face_edge_second[k] >= 0) xb(k) = z(f.face_edge_second[k]);
        CHECK(same_point(a, xa, b, xb));
        CHECK((a.period(xa) - b.period(xb)).cwiseAbs().maxCoeff() < 1e-12);
        ++glued;
      }
    }
  }
  CHECK(glued > 0);
}

TEST_CASE("routed Euclidean bound") {
  std::mt19937_64 rng(73);
  int routed = 0;
  for (int i = 0; i < 30 && routed < 10; ++i) {
    MetricGraph g = random_outer_graph(rng, 2, 6);
    SimplexModel a(g, cycle_basis(g));
    for (const auto& e : g.edges()) {
      if (e.is_loop()) continue;
      auto neighbors = neighbor_simplices(a, e.id);
      if (neighbors.empty()) continue;
      const SimplexModel& b = neighbors.front();
      const SimplexPoint p = make_point(a, random_interior(rng, a.edge_count()));
      const SimplexPoint q = make_point(b, random_interior(rng, b.edge_count()));
      CHECK_THROWS_AS(d0_upper_bound(p, q, 0), NoRouteError);
      auto r = d0_upper_bound(p, q, 1);
      CHECK_FALSE(r.exact);
      REQUIRE(r.face);
      CHECK(same_point(a, r.junction_first, b, r.junction_second, 1e-9));
      const double hand = (coordinates(p) - r.junction_first).norm() + (coordinates(q) - r.junction_second).norm();
      CHECK(r.value == doctest::Approx(hand).epsilon(1e-9));
      auto cross = distance_upper_bound(p, q, {TensorKind::ds0, 0}, {1, 10});
      CHECK(cross.value <= r.value + 1e-9);
      ++routed;
      break;
    }
  }
  CHECK(routed > 0);
}

TEST_CASE("finite area of the theta simplex") {
  const SimplexModel m = theta_model();
  auto area = simplex_area(m, {TensorKind::ds2, 0}, 1e-3);
  CHECK(area.converged);
  CHECK(area.value > 8);
  CHECK(area.value < 9);
  CHECK(simplex_area(m, {TensorKind::ds0, 0}, 1e-6).value == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-6));

  std::vector<double> ratio;
  for (double eps : {1e-2, 1e-3, 1e-4}) ratio.push_back(corner_area(m, 2, eps, {TensorKind::ds2, 0}, 1e-4).value / std::sqrt(eps));
  CHECK(ratio[2] == doctest::Approx(ratio[0]).epsilon(0.05));
  CHECK(corner_slope(m, 2, {TensorKind::ds2, 0}, {1e-3, 1e-4, 1e-5, 1e-6}) == doctest::Approx(-1.5).epsilon(0.02));

  // Under the cutoff tensor the corner area shrinks linearly.
  const TensorSpec ds2e{TensorKind::ds2_eps, 0.05};
  const double c1 = corner_area(m, 2, 1e-3, ds2e, 1e-4).value, c2 = corner_area(m, 2, 1e-4, ds2e, 1e-4).value;
  CHECK(c1 / c2 == doctest::Approx(10).epsilon(0.1));

  CHECK_THROWS(simplex_area(SimplexModel(rose_graph({Rational(1, 3), Rational(1, 3), Rational(1, 3)}),
                                         cycle_basis(rose_graph({Rational(1, 3), Rational(1, 3), Rational(1, 3)}))),
                            {TensorKind::ds2, 0}));
}
