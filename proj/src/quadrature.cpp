#include "tropjac/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tropjac::quad {

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex lock;
  std::lock_guard guard(lock);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");

  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1;
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1);
    double w = 2 / ((1 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n == 1) {
    r.nodes = {0.0};
    r.weights = {2.0};
  }
  return cache.emplace(n, std::move(r)).first->second;
}

namespace {

double panel(const std::function<double(double)>& f, double a, double b, long& evals) {
  const Rule& g = gauss_legendre(7);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
  evals += static_cast<long>(g.nodes.size());
  return s * half;
}

}  // namespace

SegmentResult integrate_segment(const std::function<double(double)>& f, double a, double b, double rel_tol,
                                int max_depth, double abs_floor) {
  SegmentResult out;
  if (a == b) return out;
  struct Work {
    double a, b, whole;
    int depth;
  };
  // Breadth-first so the running total used for the relative test is a
  // decent estimate before small panels are judged.
  std::vector<Work> todo{{a, b, panel(f, a, b, out.evaluations), 0}};
  double estimate = std::abs(todo.front().whole);
  while (!todo.empty()) {
    std::vector<Work> next;
    double level_total = 0;
    for (const auto& w : todo) {
      const double m = 0.5 * (w.a + w.b);
      const double left = panel(f, w.a, m, out.evaluations);
      const double right = panel(f, m, w.b, out.evaluations);
      const double diff = std::abs(left + right - w.whole);
      level_total += std::abs(left + right);
      if (diff <= std::max(rel_tol * estimate, abs_floor) || w.b - w.a < 1e-15 * std::abs(b - a)) {
        out.value += left + right;
        out.error += diff;
      } else if (w.depth + 1 >= max_depth) {
        out.value += left + right;
        out.error += diff;
        out.converged = false;
      } else {
        next.push_back({w.a, m, left, w.depth + 1});
        next.push_back({m, w.b, right, w.depth + 1});
      }
    }
    estimate = std::max(estimate, std::abs(out.value) + level_total);
    todo = std::move(next);
  }
  return out;
}

double area(const Triangle& t) {
  return 0.5 * std::abs((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[2][0] - t[0][0]) * (t[1][1] - t[0][1]));
}

double triangle_rule(const std::function<double(const Point&)>& f, const Triangle& t) {
  const Rule& g = gauss_legendre(7);
  const double jac = 2.0 * area(t);
  double s = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double u = 0.5 * (g.nodes[i] + 1);
    for (std::size_t j = 0; j < g.nodes.size(); ++j) {
      const double v = 0.5 * (g.nodes[j] + 1);
      Point p{t[0][0] + u * (t[1][0] - t[0][0]) + u * v * (t[2][0] - t[1][0]),
              t[0][1] + u * (t[1][1] - t[0][1]) + u * v * (t[2][1] - t[1][1])};
      s += 0.25 * g.weights[i] * g.weights[j] * u * f(p);
    }
  }
  return s * jac;
}

std::array<Triangle, 4> split(const Triangle& t) {
  auto mid = [](const Point& a, const Point& b) { return Point{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])}; };
  const Point m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m02 = mid(t[0], t[2]);
  return {Triangle{t[0], m01, m02}, Triangle{t[1], m12, m01}, Triangle{t[2], m02, m12}, Triangle{m01, m12, m02}};
}

AdaptiveResult integrate_regular(const std::function<double(const Point&)>& f, const Triangle& t, double rel_tol,
                                 int max_depth) {
  AdaptiveResult out;
  auto recurse = [&](auto&& self, const Triangle& cell, double whole, int depth) -> void {
    auto kids = split(cell);
    double parts[4];
    double sum = 0;
    for (int i = 0; i < 4; ++i) sum += parts[i] = triangle_rule(f, kids[i]);
    const double diff = std::abs(sum - whole);
    if (diff <= rel_tol * std::abs(sum)) {
      out.value += sum;
      out.error += diff;
      return;
    }
    if (depth >= max_depth) {
      out.value += sum;
      out.error += diff;
      out.converged = false;
      return;
    }
    for (int i = 0; i < 4; ++i) self(self, kids[i], parts[i], depth + 1);
  };
  recurse(recurse, t, triangle_rule(f, t), 0);
  return out;
}

}  // namespace tropjac::quad
