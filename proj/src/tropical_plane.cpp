#include "tropjac/tropical_plane.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>

namespace tropjac {

namespace {

Rational value_at(const Monomial& m, const Rational& x, const Rational& y) { return m.j * x + m.k * y + m.a; }

Point2 along(const Point2& origin, const Lattice2& dir, const Rational& t) {
  return {origin[0] + t * dir[0], origin[1] + t * dir[1]};
}

}  // namespace

void validate(const TropicalPolynomial2& p) {
  if (p.monomials.size() < 2) throw TropicalError("tropical polynomial needs at least 2 monomials");
  std::set<std::pair<int, int>> seen;
  for (const auto& m : p.monomials)
    if (!seen.insert({m.j, m.k}).second)
      throw TropicalError("repeated exponent (" + std::to_string(m.j) + "," + std::to_string(m.k) + ")");
}

Rational eval_exact(const TropicalPolynomial2& p, const Rational& x, const Rational& y) {
  if (p.monomials.empty()) throw TropicalError("empty tropical polynomial");
  Rational best = value_at(p.monomials.front(), x, y);
  for (const auto& m : p.monomials) best = std::max(best, value_at(m, x, y));
  return best;
}

double eval(const TropicalPolynomial2& p, double x, double y) {
  if (p.monomials.empty()) throw TropicalError("empty tropical polynomial");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& m : p.monomials) best = std::max(best, m.j * x + m.k * y + to_double(m.a));
  return best;
}

int weight(const Monomial& m1, const Monomial& m2) {
  if (m1.j == m2.j && m1.k == m2.k) throw TropicalError("weight: monomials share an exponent");
  return std::gcd(std::abs(m1.j - m2.j), std::abs(m1.k - m2.k));
}

CornerLocus corner_locus(const TropicalPolynomial2& p) {
  validate(p);
  if (p.monomials.size() > 12) throw TropicalError("corner_locus: at most 12 monomials");
  const auto& ms = p.monomials;
  const int count = static_cast<int>(ms.size());
  CornerLocus out;

  for (int a = 0; a < count; ++a)
    for (int b = a + 1; b < count; ++b) {
      const int dj = ms[a].j - ms[b].j;
      const int dk = ms[a].k - ms[b].k;
      const int g = std::gcd(std::abs(dj), std::abs(dk));
      const Rational c = ms[a].a - ms[b].a;
      // dj x + dk y + c = 0, parametrized from its point nearest the origin.
      const Rational norm2 = Rational(dj * dj + dk * dk);
      const Point2 origin{-c * dj / norm2, -c * dk / norm2};
      const Lattice2 dir{-dk / g, dj / g};

      std::optional<Rational> lo, hi;
      bool empty = false;
      const Rational base_a = value_at(ms[a], origin[0], origin[1]);
      const Rational slope_a = Rational(ms[a].j * dir[0] + ms[a].k * dir[1]);
      for (int r = 0; r < count && !empty; ++r) {
        if (r == a || r == b) continue;
        // a - r = alpha + beta t must stay >= 0.
        const Rational alpha = base_a - value_at(ms[r], origin[0], origin[1]);
        const Rational beta = slope_a - Rational(ms[r].j * dir[0] + ms[r].k * dir[1]);
        if (beta == 0) {
          if (alpha < 0) empty = true;
        } else if (beta > 0) {
          Rational t = -alpha / beta;
          if (!lo || t > *lo) lo = t;
        } else {
          Rational t = -alpha / beta;
          if (!hi || t < *hi) hi = t;
        }
      }
      if (empty || (lo && hi && *lo >= *hi)) continue;

      Rational inner = lo && hi ? (*lo + *hi) / 2 : lo ? *lo + 1 : hi ? *hi - 1 : Rational(0);
      const Point2 probe = along(origin, dir, inner);
      const Rational top = eval_exact(p, probe[0], probe[1]);
      // Keep only the extreme pair of the (collinear) monomials tied here.
      auto projection = [&](int r) { return ms[r].j * dj + ms[r].k * dk; };
      bool extreme = true;
      for (int r = 0; r < count && extreme; ++r) {
        if (r == a || r == b || value_at(ms[r], probe[0], probe[1]) != top) continue;
        if (projection(r) > projection(a) || projection(r) < projection(b)) extreme = false;
      }
      if (!extreme) continue;

      CornerEdge e;
      e.monomial_a = a;
      e.monomial_b = b;
      e.origin = origin;
      e.direction = dir;
      e.lower = lo;
      e.upper = hi;
      e.weight = g;
      out.edges.push_back(std::move(e));
    }

  std::map<Point2, std::vector<Ray>> stars;
  for (const auto& e : out.edges) {
    if (e.lower) stars[along(e.origin, e.direction, *e.lower)].push_back({e.direction, e.weight});
    if (e.upper) stars[along(e.origin, e.direction, *e.upper)].push_back({{-e.direction[0], -e.direction[1]}, e.weight});
  }
  for (auto& [pt, rays] : stars) {
    std::sort(rays.begin(), rays.end(), [](const Ray& x, const Ray& y) { return x.primitive < y.primitive; });
    out.vertices.push_back({pt, std::move(rays)});
  }
  return out;
}

bool CornerLocus::contains(const Point2& pt) const {
  for (const auto& e : edges) {
    const Rational dx = pt[0] - e.origin[0];
    const Rational dy = pt[1] - e.origin[1];
    if (dx * e.direction[1] - dy * e.direction[0] != 0) continue;
    const Rational t =
        (dx * e.direction[0] + dy * e.direction[1]) /
        Rational(e.direction[0] * e.direction[0] + e.direction[1] * e.direction[1]);
    if (e.lower && t < *e.lower) continue;
    if (e.upper && t > *e.upper) continue;
    return true;
  }
  return false;
}

bool check_balancing(const VertexStar& v) {
  long long sx = 0, sy = 0;
  for (const auto& r : v.rays) {
    sx += r.weight * r.primitive[0];
    sy += r.weight * r.primitive[1];
  }
  return sx == 0 && sy == 0;
}

double induced_edge_scale(int edge_weight) {
  if (edge_weight < 1) throw TropicalError("induced_edge_scale: weight must be positive");
  return 1.0 / edge_weight;
}

std::optional<Rational> induced_edge_length(const CornerEdge& e) {
  if (!e.lower || !e.upper) return std::nullopt;
  return (*e.upper - *e.lower) / e.weight;
}

}  // namespace tropjac
