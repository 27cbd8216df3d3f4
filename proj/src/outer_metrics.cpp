#include "tropjac/outer_metrics.hpp"

#include "tropjac/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace tropjac {

namespace {

constexpr double kSumTol = 1e-12;

using Column = std::vector<std::int64_t>;

Column edge_column(const Marking& m, int e) {
  Column c(static_cast<std::size_t>(m.rank()));
  for (int i = 0; i < m.rank(); ++i) c[i] = m.basis[i][static_cast<std::size_t>(e)];
  return c;
}

Column negated(Column c) {
  for (auto& v : c) v = -v;
  return c;
}

Column canonical(const Column& c) {
  for (auto v : c)
    if (v != 0) return v > 0 ? c : negated(c);
  return c;
}

bool is_forest(const MetricGraph& g, const std::vector<int>& edges) {
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int e : edges) {
    int a = find(g.edge(e).src), b = find(g.edge(e).dst);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

// A marked graph with some forest contracted: the graph, each surviving
// edge's homology column, and the map back to the original edges.
struct MarkedFace {
  MetricGraph graph;
  std::vector<Column> columns;
  std::vector<int> original;   // face edge -> original edge
  std::vector<int> face_edge;  // original edge -> face edge or -1
};

MarkedFace contract_forest(const MetricGraph& g, const Marking& m, const std::vector<int>& forest) {
  MarkedFace f;
  f.face_edge.resize(static_cast<std::size_t>(g.edge_count()));
  std::iota(f.face_edge.begin(), f.face_edge.end(), 0);
  MetricGraph h = g;
  for (int e : forest) {
    auto c = contract_edge(h, f.face_edge[e]);
    for (auto& id : f.face_edge)
      if (id >= 0) id = c.old_to_new[id];
    h = std::move(c.graph);
  }
  f.graph = std::move(h);
  f.original.assign(static_cast<std::size_t>(f.graph.edge_count()), -1);
  for (int e = 0; e < g.edge_count(); ++e)
    if (f.face_edge[e] >= 0) f.original[f.face_edge[e]] = e;
  for (int e : f.original) f.columns.push_back(edge_column(m, e));
  return f;
}

// Vertex-consistent bijection a -> b carrying each column to plus or minus
// the matching column. With lengths, matched edges must also agree to tol.
std::optional<std::vector<int>> match_marked(const MarkedFace& a, const MarkedFace& b,
                                             const std::vector<double>* la = nullptr,
                                             const std::vector<double>* lb = nullptr, double tol = 0) {
  const int m = a.graph.edge_count();
  if (m != b.graph.edge_count() || a.graph.vertex_count() != b.graph.vertex_count()) return std::nullopt;
  const int nv = a.graph.vertex_count();

  std::vector<std::vector<std::pair<int, int>>> candidates(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e)
    for (int f = 0; f < m; ++f) {
      if (la && std::abs((*la)[e] - (*lb)[f]) > tol) continue;
      if (b.columns[f] == a.columns[e]) candidates[e].push_back({f, 1});
      if (b.columns[f] == negated(a.columns[e]) && b.columns[f] != a.columns[e]) candidates[e].push_back({f, -1});
    }

  std::vector<int> image(static_cast<std::size_t>(m), -1), vmap(nv, -1), vinv(nv, -1);
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  auto bind = [&](int u, int w, std::vector<int>& undo) {
    if (vmap[u] == w) return true;
    if (vmap[u] >= 0 || vinv[w] >= 0) return false;
    vmap[u] = w;
    vinv[w] = u;
    undo.push_back(u);
    return true;
  };
  auto search = [&](auto&& self, int e) -> bool {
    if (e == m) return true;
    const Edge& ea = a.graph.edge(e);
    for (auto [f, sign] : candidates[e]) {
      if (used[f]) continue;
      const Edge& eb = b.graph.edge(f);
      std::vector<int> undo;
      const int s = sign > 0 ? eb.src : eb.dst;
      const int d = sign > 0 ? eb.dst : eb.src;
      if (bind(ea.src, s, undo) && bind(ea.dst, d, undo)) {
        used[f] = true;
        image[e] = f;
        if (self(self, e + 1)) return true;
        used[f] = false;
        image[e] = -1;
      }
      for (int u : undo) {
        vinv[vmap[u]] = -1;
        vmap[u] = -1;
      }
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return image;
}

std::vector<std::vector<int>> forests_of(const MetricGraph& g) {
  const int m = g.edge_count();
  if (m > 20) throw OuterSpaceError("shared_faces: more than 20 edges");
  std::vector<std::vector<int>> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
    std::vector<int> edges;
    for (int e = 0; e < m; ++e)
      if (mask >> e & 1) edges.push_back(e);
    if (is_forest(g, edges)) out.push_back(std::move(edges));
  }
  return out;
}

std::pair<int, std::vector<Column>> face_key(const MarkedFace& f) {
  std::vector<Column> cols;
  for (const auto& c : f.columns) cols.push_back(canonical(c));
  std::sort(cols.begin(), cols.end());
  return {f.graph.vertex_count(), std::move(cols)};
}

Vector embed(const FaceMatch& m, const Vector& z, bool first) {
  const auto& map = first ? m.face_edge_first : m.face_edge_second;
  Vector x = Vector::Zero(static_cast<Eigen::Index>(map.size()));
  for (std::size_t e = 0; e < map.size(); ++e)
    if (map[e] >= 0) x(static_cast<Eigen::Index>(e)) = z(map[e]);
  return x;
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())); }

void check_sum(const Vector& x, const char* what) {
  if (std::abs(x.sum() - 1) > kSumTol)
    throw OuterSpaceError(std::string(what) + ": coordinates must sum to 1");
  if ((x.array() < 0).any()) throw OuterSpaceError(std::string(what) + ": negative coordinate");
}

// Minimizes a convex function over {z >= 0, sum z = const} by pairwise
// exchanges with golden-section line search, staying where ok(z) holds.
template <class F, class Ok>
Vector pairwise_descent(const F& f, const Ok& ok, Vector z, int sweeps = 200) {
  const Eigen::Index k = z.size();
  double best = f(z);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const double start = best;
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = i + 1; j < k; ++j) {
        auto at = [&](double t) {
          Vector w = z;
          w(i) += t;
          w(j) -= t;
          return w;
        };
        double lo = -z(i), hi = z(j);
        if (hi - lo <= 0) continue;
        const double phi = 0.5 * (std::sqrt(5.0) - 1);
        double a = lo, b = hi;
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = f(at(c)), fd = f(at(d));
        for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
          if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(at(c));
          } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(at(d));
          }
        }
        double t = 0.5 * (a + b);
        // Back off toward the current point if the optimum is not allowed.
        for (int it = 0; it < 60 && !ok(at(t)); ++it) t *= 0.5;
        Vector w = at(t);
        w = w.cwiseMax(0.0);
        if (!ok(w)) continue;
        const double fw = f(w);
        if (fw < best) {
          best = fw;
          z = w;
        }
      }
    if (start - best <= 1e-15 * std::max(1.0, best)) break;
  }
  return z;
}

double segment_length(const SimplexModel& model, const Vector& a, const Vector& b, const TensorSpec& spec,
                      double rel_tol, bool* converged = nullptr) {
  const Vector v = b - a;
  if (v.norm() == 0) return 0;
  auto f = [&](double t) { return std::sqrt(std::max(0.0, model.quadratic(a + t * v, v, spec))); };
  auto r = quad::integrate_segment(f, 0, 1, rel_tol, 40);
  if (converged && !r.converged) *converged = false;
  return r.value;
}

}  // namespace

std::string to_string(TensorKind k) {
  switch (k) {
    case TensorKind::ds0: return "ds0";
    case TensorKind::ds2: return "ds2";
    case TensorKind::ds2_eps: return "ds2eps";
  }
  return "?";
}

TensorKind parse_tensor_kind(const std::string& s) {
  if (s == "ds0") return TensorKind::ds0;
  if (s == "ds2") return TensorKind::ds2;
  if (s == "ds2eps" || s == "ds2_eps") return TensorKind::ds2_eps;
  throw OuterSpaceError("unknown tensor kind '" + s + "'");
}

void check_spec(const TensorSpec& spec, int genus) {
  if (spec.kind != TensorKind::ds2_eps) return;
  if (!(spec.eps > 0) || !(spec.eps < 1.0 / (6.0 * genus)))
    throw OuterSpaceError("eps must lie in (0, 1/(6n)) = (0, " + std::to_string(1.0 / (6.0 * genus)) + ")");
}

double cutoff_length(double l, double eps) {
  if (l <= eps) return l;
  if (l >= 2 * eps) return eps;
  const double s = (l - eps) / eps;
  return eps * (1 + s * (1 - s) * (1 - s));
}

double cutoff_derivative(double l, double eps) {
  if (l <= eps) return 1;
  if (l >= 2 * eps) return 0;
  const double s = (l - eps) / eps;
  return (1 - s) * (1 - 3 * s);
}

SimplexModel::SimplexModel(const MetricGraph& type, const Marking& marking) : type_(type), marking_(marking) {
  if (!validate_outer(type).is_outer_space_point)
    throw OuterSpaceError("simplex type is not a connected bridgeless graph with valences >= 3");
  validate_marking(type, marking);
  columns_.resize(marking.rank(), type.edge_count());
  for (int i = 0; i < marking.rank(); ++i)
    for (int e = 0; e < type.edge_count(); ++e) columns_(i, e) = marking.basis[i][static_cast<std::size_t>(e)];
  for (auto& c : enumerate_cycles(type)) cycles_.push_back(std::move(c.edges));
}

Matrix SimplexModel::period(const Vector& x) const {
  const Matrix c = columns_.cast<double>();
  return c * x.asDiagonal() * c.transpose();
}

double SimplexModel::cycle_length(std::size_t c, const Vector& x) const {
  double s = 0;
  for (int e : cycles_.at(c)) s += x(e);
  return s;
}

double SimplexModel::min_cycle_length(const Vector& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cycles_.size(); ++c) best = std::min(best, cycle_length(c, x));
  return best;
}

bool SimplexModel::admissible(const Vector& x) const {
  if (x.size() != edge_count() || (x.array() < 0).any()) return false;
  return min_cycle_length(x) > 0;
}

Matrix SimplexModel::ambient_gram(const Vector& x, const TensorSpec& spec) const {
  const int m = edge_count();
  if (x.size() != m) throw OuterSpaceError("tensor: coordinate count does not match the edge count");
  Matrix a = Matrix::Identity(m, m);
  switch (spec.kind) {
    case TensorKind::ds0: break;
    case TensorKind::ds2: {
      Eigen::LLT<Matrix> llt(period(x));
      if (llt.info() != Eigen::Success) throw OuterSpaceError("tensor: period matrix degenerates (missing face)");
      const Matrix c = columns_.cast<double>();
      const Matrix k = c.transpose() * llt.solve(c);
      a += k.cwiseProduct(k);
      break;
    }
    case TensorKind::ds2_eps: {
      check_spec(spec, genus());
      for (std::size_t c = 0; c < cycles_.size(); ++c) {
        const double l = cycle_length(c, x);
        if (l <= 0) throw OuterSpaceError("tensor: a cycle has zero length (missing face)");
        const double r = cutoff_derivative(l, spec.eps) / cutoff_length(l, spec.eps);
        if (r == 0) continue;
        for (int e : cycles_[c])
          for (int f : cycles_[c]) a(e, f) += r * r;
      }
      break;
    }
  }
  return a;
}

Matrix SimplexModel::intrinsic_gram(const Vector& x, const TensorSpec& spec) const {
  const int m = edge_count();
  Matrix b = Matrix::Zero(m, m - 1);
  b.topRows(m - 1).setIdentity();
  b.row(m - 1).setConstant(-1);
  return b.transpose() * ambient_gram(x, spec) * b;
}

double SimplexModel::quadratic(const Vector& x, const Vector& v, const TensorSpec& spec) const {
  if (spec.kind == TensorKind::ds0) return v.squaredNorm();
  return v.dot(ambient_gram(x, spec) * v);
}

Vector SimplexModel::from_intrinsic(const Vector& y) const {
  Vector x(edge_count());
  x.head(edge_count() - 1) = y;
  x(edge_count() - 1) = 1 - y.sum();
  return x;
}

Vector SimplexModel::to_intrinsic(const Vector& x) const { return x.head(edge_count() - 1); }

void validate_point(const SimplexPoint& p, bool allow_faces) {
  SimplexModel model(p.graph, p.marking);
  const Vector x = coordinates(p);
  check_sum(x, "point");
  if (allow_faces) {
    if (!model.admissible(x)) throw OuterSpaceError("point: a cycle has zero length (missing face)");
  } else if ((x.array() <= 0).any()) {
    throw OuterSpaceError("point: coordinates must be positive");
  }
}

SimplexPoint make_point(const SimplexModel& model, const Vector& x) {
  if (x.size() != model.edge_count()) throw OuterSpaceError("make_point: coordinate count mismatch");
  std::vector<double> l(x.data(), x.data() + x.size());
  return {model.type().with_lengths(l), model.marking()};
}

Vector coordinates(const SimplexPoint& p) { return to_vector(p.graph.lengths()); }

bool same_simplex(const SimplexPoint& p, const SimplexPoint& q) {
  if (p.graph.vertex_count() != q.graph.vertex_count() || p.graph.edge_count() != q.graph.edge_count()) return false;
  for (int e = 0; e < p.graph.edge_count(); ++e)
    if (p.graph.edge(e).src != q.graph.edge(e).src || p.graph.edge(e).dst != q.graph.edge(e).dst) return false;
  return p.marking.basis == q.marking.basis;
}

Matrix period_map(const SimplexPoint& p) {
  validate_point(p, true);
  return SimplexModel(p.graph, p.marking).period(coordinates(p));
}

Matrix tensor(const SimplexPoint& p, const TensorSpec& spec) {
  validate_point(p);
  SimplexModel model(p.graph, p.marking);
  check_spec(spec, model.genus());
  return model.intrinsic_gram(coordinates(p), spec);
}

Matrix tensor_ds0(const SimplexPoint& p) { return tensor(p, {TensorKind::ds0, 0}); }
Matrix tensor_ds2(const SimplexPoint& p) { return tensor(p, {TensorKind::ds2, 0}); }
Matrix tensor_ds2_eps(const SimplexPoint& p, double eps) { return tensor(p, {TensorKind::ds2_eps, eps}); }

double d0_simplex(const SimplexPoint& p, const SimplexPoint& q) {
  if (!same_simplex(p, q)) throw OuterSpaceError("d0_simplex: points lie in different marked simplices");
  validate_point(p, true);
  validate_point(q, true);
  return (coordinates(p) - coordinates(q)).norm();
}

std::vector<FaceMatch> shared_faces(const SimplexModel& a, const SimplexModel& b) {
  if (a.genus() != b.genus()) return {};
  std::vector<std::vector<int>> forests_b = forests_of(b.type());
  std::map<std::pair<int, std::vector<Column>>, std::vector<std::size_t>> index_b;
  std::vector<MarkedFace> faces_b;
  std::vector<std::vector<int>> forest_of_b;
  for (auto& f : forests_b) {
    faces_b.push_back(contract_forest(b.type(), b.marking(), f));
    forest_of_b.push_back(f);
    index_b[face_key(faces_b.back())].push_back(faces_b.size() - 1);
  }

  std::vector<FaceMatch> out;
  for (const auto& fa : forests_of(a.type())) {
    MarkedFace face_a = contract_forest(a.type(), a.marking(), fa);
    auto it = index_b.find(face_key(face_a));
    if (it == index_b.end()) continue;
    for (std::size_t ib : it->second) {
      auto image = match_marked(face_a, faces_b[ib]);
      if (!image) continue;
      FaceMatch m;
      m.forest_first = fa;
      m.forest_second = forest_of_b[ib];
      m.face_edge_first = face_a.face_edge;
      m.face_edges = face_a.graph.edge_count();
      std::vector<int> inverse(static_cast<std::size_t>(m.face_edges));
      for (int i = 0; i < m.face_edges; ++i) inverse[(*image)[i]] = i;
      m.face_edge_second.assign(static_cast<std::size_t>(b.edge_count()), -1);
      for (int e = 0; e < b.edge_count(); ++e)
        if (faces_b[ib].face_edge[e] >= 0) m.face_edge_second[e] = inverse[faces_b[ib].face_edge[e]];
      out.push_back(std::move(m));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FaceMatch& x, const FaceMatch& y) { return x.face_edges > y.face_edges; });
  return out;
}

bool same_point(const SimplexModel& a, const Vector& xa, const SimplexModel& b, const Vector& xb, double tol) {
  if (!a.admissible(xa) || !b.admissible(xb)) return false;
  std::vector<int> za, zb;
  for (int e = 0; e < a.edge_count(); ++e)
    if (xa(e) <= tol) za.push_back(e);
  for (int e = 0; e < b.edge_count(); ++e)
    if (xb(e) <= tol) zb.push_back(e);
  if (!is_forest(a.type(), za) || !is_forest(b.type(), zb)) return false;
  MarkedFace fa = contract_forest(a.type(), a.marking(), za);
  MarkedFace fb = contract_forest(b.type(), b.marking(), zb);
  std::vector<double> la, lb;
  for (int e : fa.original) la.push_back(xa(e));
  for (int e : fb.original) lb.push_back(xb(e));
  return match_marked(fa, fb, &la, &lb, tol).has_value();
}

D0Bound d0_upper_bound(const SimplexPoint& p, const SimplexPoint& q, int budget) {
  validate_point(p, true);
  validate_point(q, true);
  const Vector xp = coordinates(p), xq = coordinates(q);
  D0Bound out;
  if (same_simplex(p, q)) {
    out.value = (xp - xq).norm();
    out.exact = true;
    return out;
  }
  if (budget < 1) throw NoRouteError("d0: points lie in different simplices and the face budget is 0");
  SimplexModel a(p.graph, p.marking), b(q.graph, q.marking);
  auto faces = shared_faces(a, b);
  if (faces.empty()) throw NoRouteError("d0: the two simplices share no face");

  bool found = false;
  for (const auto& face : faces) {
    const Eigen::Index k = face.face_edges;
    double alpha = 0, beta = 0;
    Vector u = Vector::Zero(k), w = Vector::Zero(k);
    for (int e = 0; e < a.edge_count(); ++e) {
      if (face.face_edge_first[e] < 0)
        alpha += xp(e) * xp(e);
      else
        u(face.face_edge_first[e]) = xp(e);
    }
    for (int e = 0; e < b.edge_count(); ++e) {
      if (face.face_edge_second[e] < 0)
        beta += xq(e) * xq(e);
      else
        w(face.face_edge_second[e]) = xq(e);
    }
    auto f = [&](const Vector& z) { return std::sqrt(alpha + (z - u).squaredNorm()) + std::sqrt(beta + (z - w).squaredNorm()); };
    auto ok = [&](const Vector& z) { return a.admissible(embed(face, z, true)); };
    auto lift = [&](const Vector& v) { return Vector((v.array() + (1 - v.sum()) / static_cast<double>(k)).matrix()); };
    Vector z0 = lift(u), z1 = lift(w);
    Vector start = (ok(z0) && (!ok(z1) || f(z0) <= f(z1))) ? z0 : z1;
    if (!ok(start)) {
      start = Vector::Constant(k, 1.0 / static_cast<double>(k));
      if (!ok(start)) continue;
    }
    Vector z = pairwise_descent(f, ok, start);
    const double value = f(z);
    if (!found || value < out.value) {
      found = true;
      out.value = value;
      out.face = face;
      out.junction_first = embed(face, z, true);
      out.junction_second = embed(face, z, false);
      out.exact = face.forest_first.empty() && face.forest_second.empty();
    }
    if (out.exact) break;
  }
  if (!found) throw NoRouteError("d0: no admissible junction on any shared face");
  return out;
}

DistanceInterval combined_distance(const SimplexPoint& p, const SimplexPoint& q, Combination how, int budget) {
  const Matrix pp = period_map(p), pq = period_map(q);
  DistanceInterval r;
  r.lower = d_inv(pp, pq);
  const double d0 = d0_upper_bound(p, q, budget).value;
  switch (how) {
    case Combination::sum: r.upper = d0 + r.lower; break;
    case Combination::root_sum_square: r.upper = std::hypot(d0, r.lower); break;
    case Combination::max: r.upper = std::max(d0, r.lower); break;
  }
  return r;
}

DistanceInterval d1(const SimplexPoint& p, const SimplexPoint& q, int budget) {
  return combined_distance(p, q, Combination::sum, budget);
}
DistanceInterval d2(const SimplexPoint& p, const SimplexPoint& q, int budget) {
  return combined_distance(p, q, Combination::root_sum_square, budget);
}
DistanceInterval dinf(const SimplexPoint& p, const SimplexPoint& q, int budget) {
  return combined_distance(p, q, Combination::max, budget);
}

PLPath straight_path(const SimplexPoint& p, const SimplexPoint& q, int segments) {
  if (segments < 1) throw OuterSpaceError("straight_path: need at least one segment");
  const Vector xp = coordinates(p), xq = coordinates(q);
  auto polyline = [&](const Vector& a, const Vector& b) {
    std::vector<Vector> nodes;
    for (int i = 0; i <= segments; ++i) nodes.push_back(a + (b - a) * (static_cast<double>(i) / segments));
    return nodes;
  };
  PLPath path;
  if (same_simplex(p, q)) {
    path.legs.push_back({p.graph, p.marking, polyline(xp, xq)});
    return path;
  }
  auto route = d0_upper_bound(p, q, 1);
  path.legs.push_back({p.graph, p.marking, polyline(xp, route.junction_first)});
  path.legs.push_back({q.graph, q.marking, polyline(route.junction_second, xq)});
  return path;
}


namespace {

std::vector<SimplexModel> leg_models(const PLPath& path) {
  std::vector<SimplexModel> models;
  for (const auto& leg : path.legs) models.emplace_back(leg.type, leg.marking);
  return models;
}

struct Piece {
  const SimplexModel* model;
  Vector from;
  Vector to;
  bool singular_start = false;  // `from` lies on a missing face
};

}  // namespace

void validate_path(const PLPath& path) {
  if (path.legs.empty()) throw OuterSpaceError("path: no legs");
  auto models = leg_models(path);
  const std::size_t legs = path.legs.size();
  for (std::size_t li = 0; li < legs; ++li) {
    const auto& nodes = path.legs[li].nodes;
    if (nodes.empty()) throw OuterSpaceError("path: leg " + std::to_string(li) + " has no nodes");
    for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
      const Vector& x = nodes[ni];
      if (x.size() != models[li].edge_count()) throw OuterSpaceError("path: node size does not match its simplex");
      check_sum(x, "path node");
      const bool end = (li == 0 && ni == 0) || (li + 1 == legs && ni + 1 == nodes.size());
      if (!end && !models[li].admissible(x))
        throw OuterSpaceError("path: node " + std::to_string(ni) + " of leg " + std::to_string(li) +
                              " lies on a missing face");
    }
    if (li > 0 && !same_point(models[li - 1], path.legs[li - 1].nodes.back(), models[li], nodes.front()))
      throw OuterSpaceError("path: legs " + std::to_string(li - 1) + " and " + std::to_string(li) +
                            " do not meet at the same point");
  }
}

PathLength path_length(const PLPath& path, const TensorSpec& spec, double rel_tol) {
  validate_path(path);
  auto models = leg_models(path);
  check_spec(spec, models.front().genus());

  std::vector<Piece> regular, singular;
  for (std::size_t li = 0; li < path.legs.size(); ++li) {
    const auto& nodes = path.legs[li].nodes;
    for (std::size_t ni = 0; ni + 1 < nodes.size(); ++ni) {
      const Vector& a = nodes[ni];
      const Vector& b = nodes[ni + 1];
      const bool bad_a = !models[li].admissible(a), bad_b = !models[li].admissible(b);
      if (bad_a && bad_b) {
        const Vector mid = 0.5 * (a + b);
        if (!models[li].admissible(mid)) throw OuterSpaceError("path: segment runs along a missing face");
        singular.push_back({&models[li], a, mid, true});
        singular.push_back({&models[li], b, mid, true});
      } else if (bad_a) {
        singular.push_back({&models[li], a, b, true});
      } else if (bad_b) {
        singular.push_back({&models[li], b, a, true});
      } else {
        regular.push_back({&models[li], a, b, false});
      }
    }
  }

  PathLength out;
  bool ok = true;
  const double levels[] = {rel_tol * 100, rel_tol, rel_tol * 1e-2};
  double regular_value = 0, previous = 0;
  for (double tol : levels) {
    previous = regular_value;
    regular_value = 0;
    ok = true;
    for (const auto& p : regular) regular_value += segment_length(*p.model, p.from, p.to, spec, tol, &ok);
    out.trace.push_back(regular_value);
  }
  out.error = std::abs(regular_value - previous);
  out.converged = ok && out.error <= rel_tol * std::max(std::abs(regular_value), 1e-300);
  if (regular.empty()) out.converged = true;

  // Dyadic pieces [2^-k, 2^-(k-1)] of each segment measured from its
  // singular end: a finite length shows up as geometrically decaying pieces.
  double singular_value = 0;
  std::vector<std::vector<double>> partials;
  for (const auto& p : singular) {
    const Vector v = p.to - p.from;
    auto f = [&](double t) { return std::sqrt(std::max(0.0, p.model->quadratic(p.from + t * v, v, spec))); };
    std::vector<double> cumulative;
    double sum = 0, last = 0, tail = 0;
    bool finite = false;
    for (int k = 1; k <= 48 && !finite; ++k) {
      const double lo = std::ldexp(1.0, -k);
      const double piece = quad::integrate_segment(f, lo, 2 * lo, rel_tol * 1e-2, 40).value;
      sum += piece;
      cumulative.push_back(sum);
      if (k >= 4 && piece == 0 && last == 0) finite = true;
      if (k >= 4 && last > 0 && piece < 0.9 * last) {
        const double ratio = piece / last;
        tail = piece * ratio / (1 - ratio);
        finite = tail <= rel_tol * sum;
      }
      last = piece;
    }
    singular_value += sum + (finite ? tail : 0);
    if (!finite) out.diverging = true;
    out.error += finite ? tail : last;
    partials.push_back(std::move(cumulative));
  }
  std::size_t depth = 0;
  for (const auto& c : partials) depth = std::max(depth, c.size());
  for (std::size_t k = 0; k < depth; ++k) {
    double t = regular_value;
    for (const auto& c : partials) t += c[std::min(k, c.size() - 1)];
    out.trace.push_back(t);
  }
  out.value = regular_value + singular_value;
  if (out.diverging) out.converged = false;
  return out;
}

UpperBound distance_upper_bound(const SimplexPoint& p, const SimplexPoint& q, const TensorSpec& spec,
                                OptimizerBudget budget, int face_budget) {
  validate_point(p, true);
  validate_point(q, true);
  SimplexModel first(p.graph, p.marking);
  check_spec(spec, first.genus());

  PLPath path;
  std::optional<FaceMatch> face;
  if (same_simplex(p, q)) {
    path.legs.push_back({p.graph, p.marking, {coordinates(p), coordinates(q)}});
  } else {
    if (face_budget < 1) throw NoRouteError("upper bound: different simplices and the face budget is 0");
    auto route = d0_upper_bound(p, q, face_budget);
    face = route.face;
    path.legs.push_back({p.graph, p.marking, {coordinates(p), route.junction_first}});
    path.legs.push_back({q.graph, q.marking, {route.junction_second, coordinates(q)}});
  }
  auto models = leg_models(path);
  auto seg = [&](std::size_t li, const Vector& a, const Vector& b) {
    return segment_length(models[li], a, b, spec, 1e-9);
  };
  auto total = [&](const PLPath& pl) {
    double s = 0;
    for (std::size_t li = 0; li < pl.legs.size(); ++li)
      for (std::size_t ni = 0; ni + 1 < pl.legs[li].nodes.size(); ++ni)
        s += seg(li, pl.legs[li].nodes[ni], pl.legs[li].nodes[ni + 1]);
    return s;
  };
  auto allowed = [&](std::size_t li, const Vector& x) { return (x.array() >= 0).all() && models[li].admissible(x); };

  UpperBound out;
  out.value = total(path);
  out.path = path;
  out.trace.push_back(out.value);

  for (int stage = 1; stage <= budget.refinements; ++stage) {
    for (auto& leg : path.legs) {
      std::vector<Vector> finer;
      for (std::size_t ni = 0; ni + 1 < leg.nodes.size(); ++ni) {
        finer.push_back(leg.nodes[ni]);
        finer.push_back(0.5 * (leg.nodes[ni] + leg.nodes[ni + 1]));
      }
      finer.push_back(leg.nodes.back());
      leg.nodes = std::move(finer);
    }
    double step = 0;
    int segments = 0;
    for (const auto& leg : path.legs)
      for (std::size_t ni = 0; ni + 1 < leg.nodes.size(); ++ni, ++segments)
        step += (leg.nodes[ni + 1] - leg.nodes[ni]).norm();
    step = 0.5 * step / std::max(segments, 1) + 1e-6;

    for (int sweep = 0; sweep < budget.sweeps && step > 1e-10; ++sweep) {
      bool improved = false;
      for (std::size_t li = 0; li < path.legs.size(); ++li) {
        auto& nodes = path.legs[li].nodes;
        const int m = models[li].edge_count();
        for (std::size_t ni = 1; ni + 1 < nodes.size(); ++ni) {
          double here = seg(li, nodes[ni - 1], nodes[ni]) + seg(li, nodes[ni], nodes[ni + 1]);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
              if (i == j) continue;
              Vector trial = nodes[ni];
              trial(i) += step;
              trial(j) -= step;
              if (!allowed(li, trial)) continue;
              const double there = seg(li, nodes[ni - 1], trial) + seg(li, trial, nodes[ni + 1]);
              if (there < here) {
                nodes[ni] = trial;
                here = there;
                improved = true;
              }
            }
        }
        if (li + 1 < path.legs.size() && face) {
          auto& next = path.legs[li + 1].nodes;
          Vector& j1 = nodes.back();
          Vector& j2 = next.front();
          double here = seg(li, nodes[nodes.size() - 2], j1) + seg(li + 1, j2, next[1]);
          for (int i = 0; i < face->face_edges; ++i)
            for (int j = 0; j < face->face_edges; ++j) {
              if (i == j) continue;
              Vector dz = Vector::Zero(face->face_edges);
              dz(i) = step;
              dz(j) = -step;
              const Vector t1 = j1 + embed(*face, dz, true), t2 = j2 + embed(*face, dz, false);
              if (!allowed(li, t1) || !allowed(li + 1, t2)) continue;
              const double there = seg(li, nodes[nodes.size() - 2], t1) + seg(li + 1, t2, next[1]);
              if (there < here) {
                j1 = t1;
                j2 = t2;
                here = there;
                improved = true;
              }
            }
        }
      }
      if (!improved) step *= 0.5;
    }
    const double value = total(path);
    if (value < out.value) {
      out.value = value;
      out.path = path;
    }
    out.trace.push_back(out.value);
  }
  return out;
}

double area_element(const SimplexModel& model, const Vector& x, const TensorSpec& spec) {
  return std::sqrt(std::max(0.0, model.intrinsic_gram(x, spec).determinant()));
}

namespace {

Vector vertex_of(int m, int apex) {
  Vector x = Vector::Zero(m);
  x(apex) = 1;
  return x;
}

quad::Point intrinsic_point(const SimplexModel& model, const Vector& x) {
  Vector y = model.to_intrinsic(x);
  return {y(0), y(1)};
}

void require_two_simplex(const SimplexModel& model, const TensorSpec& spec) {
  if (model.edge_count() != 3) throw OuterSpaceError("area: only 2-simplices (three edges) are supported");
  check_spec(spec, model.genus());
  for (int e = 0; e < 3; ++e) {
    Vector mid = Vector::Constant(3, 0.5);
    mid(e) = 0;
    if (!model.admissible(mid)) throw OuterSpaceError("area: the simplex has a missing edge face");
  }
}

// Integrates over the regular part plus corner cells whose vertex 0 is the
// singular point, halving the corner cells once per depth.
VolumeResult refine_corners(const std::function<double(const quad::Point&)>& f, std::vector<quad::Triangle> corners,
                            double regular, bool regular_ok, double tol, int max_depth) {
  VolumeResult out;
  auto corner_sum = [&] {
    double s = 0;
    for (const auto& c : corners) s += quad::triangle_rule(f, c);
    return s;
  };
  out.trace.push_back(regular + corner_sum());
  for (int depth = 1; depth <= max_depth; ++depth) {
    for (auto& c : corners) {
      auto kids = quad::split(c);
      for (int i = 1; i < 4; ++i) {
        auto r = quad::integrate_regular(f, kids[i], tol * 1e-2, 12);
        regular += r.value;
        regular_ok = regular_ok && r.converged;
      }
      c = kids[0];
    }
    out.trace.push_back(regular + corner_sum());
    const double now = out.trace.back();
    out.error = std::abs(now - out.trace[out.trace.size() - 2]);
    if (depth >= 2 && out.error <= tol * std::abs(now)) {
      out.converged = regular_ok;
      break;
    }
  }
  out.value = out.trace.back();
  return out;
}

}  // namespace

VolumeResult simplex_area(const SimplexModel& model, const TensorSpec& spec, double tol, int max_depth) {
  require_two_simplex(model, spec);
  auto f = [&](const quad::Point& y) { return area_element(model, model.from_intrinsic(Vector{{y[0], y[1]}}), spec); };
  quad::Triangle top{intrinsic_point(model, vertex_of(3, 0)), intrinsic_point(model, vertex_of(3, 1)),
                     intrinsic_point(model, vertex_of(3, 2))};
  auto kids = quad::split(top);
  std::vector<quad::Triangle> corners;
  double regular = 0;
  bool ok = true;
  for (int i = 0; i < 4; ++i) {
    if (i < 3 && !model.admissible(vertex_of(3, i))) {
      corners.push_back(kids[i]);
      continue;
    }
    auto r = quad::integrate_regular(f, kids[i], tol * 1e-2, 12);
    regular += r.value;
    ok = ok && r.converged;
  }
  return refine_corners(f, corners, regular, ok, tol, max_depth);
}

VolumeResult corner_area(const SimplexModel& model, int apex, double region, const TensorSpec& spec, double tol,
                         int max_depth) {
  require_two_simplex(model, spec);
  if (apex < 0 || apex > 2) throw OuterSpaceError("corner_area: apex must be 0, 1 or 2");
  if (!(region > 0 && region <= 1)) throw OuterSpaceError("corner_area: region must lie in (0, 1]");
  auto f = [&](const quad::Point& y) { return area_element(model, model.from_intrinsic(Vector{{y[0], y[1]}}), spec); };
  const int j = (apex + 1) % 3, k = (apex + 2) % 3;
  const Vector v = vertex_of(3, apex);
  quad::Triangle cell{intrinsic_point(model, v), intrinsic_point(model, v + region * (vertex_of(3, j) - v)),
                      intrinsic_point(model, v + region * (vertex_of(3, k) - v))};
  return refine_corners(f, {cell}, 0, true, tol, max_depth);
}

double corner_slope(const SimplexModel& model, int apex, const TensorSpec& spec, const std::vector<double>& s_values) {
  if (model.edge_count() != 3) throw OuterSpaceError("corner_slope: only 2-simplices are supported");
  if (s_values.size() < 2) throw OuterSpaceError("corner_slope: need at least two samples");
  const int j = (apex + 1) % 3, k = (apex + 2) % 3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double s : s_values) {
    Vector x = Vector::Zero(3);
    x(apex) = 1 - s;
    x(j) = x(k) = 0.5 * s;
    const double lx = std::log(s), ly = std::log(area_element(model, x, spec));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(s_values.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MetricGraph theta_type() {
  const Rational third(1, 3);
  return MetricGraph(2, {{0, 1, third}, {0, 1, third}, {0, 1, third}});
}

Marking theta_marking() { return Marking{{{1, -1, 0}, {0, -1, 1}}}; }

}  // namespace tropjac
