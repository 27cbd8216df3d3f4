#include "tropjac/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace tropjac::quad;

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 3, 7, 12}) {
    const Rule& r = gauss_legendre(n);
    double w = 0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2));
    // Exact for degree 2n - 1.
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
    CHECK(s == doctest::Approx(2.0 / (2 * n - 1)));
  }
}

TEST_CASE("adaptive segment integration") {
  auto r = integrate_segment([](double x) { return std::exp(x); }, 0, 1, 1e-12);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
  auto s = integrate_segment([](double x) { return 1 / std::sqrt(x); }, 0, 1, 1e-8);
  CHECK(s.value == doctest::Approx(2).epsilon(1e-6));
}

TEST_CASE("triangle rules") {
  const Triangle t{{{0, 0}, {1, 0}, {0, 1}}};
  CHECK(area(t) == doctest::Approx(0.5));
  CHECK(triangle_rule([](const Point&) { return 1.0; }, t) == doctest::Approx(0.5));
  CHECK(triangle_rule([](const Point& p) { return p[0] * p[1]; }, t) == doctest::Approx(1.0 / 24));
  double sum = 0;
  for (const auto& c : split(t)) {
    CHECK(area(c) == doctest::Approx(0.125));
    sum += triangle_rule([](const Point& p) { return p[0] * p[0]; }, c);
  }
  CHECK(sum == doctest::Approx(1.0 / 12));
  // Singular at vertex 0: the integral of 1/|p| over this triangle is sqrt(2) asinh(1).
  const double singular = triangle_rule([](const Point& p) { return 1 / std::hypot(p[0], p[1]); }, t);
  CHECK(singular == doctest::Approx(std::sqrt(2.0) * std::asinh(1.0)).epsilon(1e-3));
  auto reg = integrate_regular([](const Point& p) { return std::cos(p[0] + 2 * p[1]); }, t, 1e-10);
  CHECK(reg.converged);
  const double exact = std::cos(1.0) - (std::cos(2.0) + 1) / 2;
  CHECK(reg.value == doctest::Approx(exact).epsilon(1e-8));
}
