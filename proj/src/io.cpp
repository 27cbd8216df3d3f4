#include "tropjac/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tropjac {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

long long integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<long long>();
}

// Terminating decimal expansion with at most 15 significant digits.
std::optional<std::string> short_decimal(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  int scale = 0;
  while (den % 10 == 0) {
    den /= 10;
    ++scale;
  }
  while (den != 1) {
    if (den % 2 == 0) {
      den /= 2;
      num *= 5;
    } else if (den % 5 == 0) {
      den /= 5;
      num *= 2;
    } else {
      return std::nullopt;
    }
    ++scale;
    if (scale > 40) return std::nullopt;
  }
  const bool negative = num < 0;
  std::string digits = (negative ? BigInt(-num) : num).str();
  std::string trimmed = digits;
  trimmed.erase(0, std::min(trimmed.find_first_not_of('0'), trimmed.size()));
  while (!trimmed.empty() && trimmed.back() == '0') trimmed.pop_back();
  if (trimmed.size() > 15) return std::nullopt;
  if (scale > 0) {
    if (static_cast<int>(digits.size()) <= scale) digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1, '0');
    digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
  }
  return (negative ? "-" : "") + digits;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

Json decimal(double x) { return format_decimal(x); }

Json exact(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) return rational_from_double(j.get<double>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(what + ": " + e.what());
  }
  throw InputError(what + ": expected a number or numeric string");
}

Json graph_to_json(const MetricGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    auto d = short_decimal(e.exact);
    edges.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}, {"length", d ? *d : to_string(e.exact)}});
  }
  return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

MetricGraph graph_from_json(const Json& j) {
  const long long n = integer(field(j, "vertices", "graph"), "graph.vertices");
  if (n < 1) throw InputError("graph.vertices: must be positive");
  const Json& edges = field(j, "edges", "graph");
  if (!edges.is_array()) throw InputError("graph.edges: expected an array");
  std::vector<std::pair<long long, MetricGraph::EdgeSpec>> items;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "graph.edges[" + std::to_string(i) + "]";
    const Json& e = edges[i];
    const long long id = e.is_object() && e.contains("id") ? integer(e["id"], where + ".id") : static_cast<long long>(i);
    MetricGraph::EdgeSpec spec{static_cast<int>(integer(field(e, "src", where), where + ".src")),
                               static_cast<int>(integer(field(e, "dst", where), where + ".dst")),
                               rational_from_json(field(e, "length", where), where + ".length")};
    items.emplace_back(id, std::move(spec));
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MetricGraph::EdgeSpec> specs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].first != static_cast<long long>(i))
      throw InputError("graph.edges: ids must be 0.." + std::to_string(items.size() - 1) + " without gaps");
    specs.push_back(std::move(items[i].second));
  }
  return MetricGraph(static_cast<int>(n), std::move(specs));
}

Json marking_to_json(const Marking& m) { return {{"basis", m.basis}}; }

Marking marking_from_json(const Json& j) {
  const Json& basis = field(j, "basis", "marking");
  if (!basis.is_array()) throw InputError("marking.basis: expected an array of integer rows");
  Marking m;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string where = "marking.basis[" + std::to_string(i) + "]";
    if (!basis[i].is_array()) throw InputError(where + ": expected an array");
    IntegerChain row;
    for (std::size_t e = 0; e < basis[i].size(); ++e)
      row.push_back(integer(basis[i][e], where + "[" + std::to_string(e) + "]"));
    m.basis.push_back(std::move(row));
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(decimal(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json exact_matrix_to_json(const std::vector<std::vector<Rational>>& m) {
  Json rows = Json::array();
  for (const auto& r : m) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(exact(x));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  const Json& rows = j.is_object() ? field(j, "matrix", "matrix") : j;
  if (!rows.is_array() || rows.empty()) throw InputError("matrix: expected a nonempty array of rows");
  const std::size_t n = rows.size();
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rows[0].is_array() ? rows[0].size() : 0));
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != static_cast<std::size_t>(m.cols()))
      throw InputError("matrix: rows must be arrays of equal length");
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          to_double(rational_from_json(rows[i][k], "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
  }
  return m;
}

Json polynomial_to_json(const TropicalPolynomial2& p) {
  Json ms = Json::array();
  for (const auto& m : p.monomials) ms.push_back({{"j", m.j}, {"k", m.k}, {"a", to_string(m.a)}});
  return {{"monomials", ms}};
}

TropicalPolynomial2 polynomial_from_json(const Json& j) {
  const Json& ms = field(j, "monomials", "polynomial");
  if (!ms.is_array()) throw InputError("polynomial.monomials: expected an array");
  TropicalPolynomial2 p;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::string where = "polynomial.monomials[" + std::to_string(i) + "]";
    p.monomials.push_back({static_cast<int>(integer(field(ms[i], "j", where), where + ".j")),
                           static_cast<int>(integer(field(ms[i], "k", where), where + ".k")),
                           rational_from_json(field(ms[i], "a", where), where + ".a")});
  }
  return p;
}

SimplexPoint point_from_json(const Json& j) {
  SimplexPoint p;
  p.graph = graph_from_json(field(j, "graph", "point"));
  p.marking = j.contains("marking") ? marking_from_json(j["marking"]) : cycle_basis(p.graph);
  return p;
}

Json point_to_json(const SimplexPoint& p) {
  return {{"graph", graph_to_json(p.graph)}, {"marking", marking_to_json(p.marking)}};
}

PLPath path_from_json(const Json& j) {
  const Json& legs = field(j, "legs", "path");
  if (!legs.is_array()) throw InputError("path.legs: expected an array");
  PLPath path;
  for (std::size_t li = 0; li < legs.size(); ++li) {
    const std::string where = "path.legs[" + std::to_string(li) + "]";
    PathLeg leg;
    leg.type = graph_from_json(field(legs[li], "graph", where));
    leg.marking = legs[li].contains("marking") ? marking_from_json(legs[li]["marking"]) : cycle_basis(leg.type);
    const Json& nodes = field(legs[li], "nodes", where);
    if (!nodes.is_array()) throw InputError(where + ".nodes: expected an array");
    for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
      const std::string at = where + ".nodes[" + std::to_string(ni) + "]";
      if (!nodes[ni].is_array()) throw InputError(at + ": expected an array of coordinates");
      Vector x(static_cast<Eigen::Index>(nodes[ni].size()));
      for (std::size_t e = 0; e < nodes[ni].size(); ++e)
        x(static_cast<Eigen::Index>(e)) = to_double(rational_from_json(nodes[ni][e], at));
      leg.nodes.push_back(std::move(x));
    }
    path.legs.push_back(std::move(leg));
  }
  return path;
}

Json path_to_json(const PLPath& p) {
  Json legs = Json::array();
  for (const auto& leg : p.legs) {
    Json nodes = Json::array();
    for (const auto& x : leg.nodes) {
      Json row = Json::array();
      for (Eigen::Index e = 0; e < x.size(); ++e) row.push_back(decimal(x(e)));
      nodes.push_back(std::move(row));
    }
    legs.push_back({{"graph", graph_to_json(leg.type)}, {"marking", marking_to_json(leg.marking)}, {"nodes", nodes}});
  }
  return {{"legs", legs}};
}

}  // namespace tropjac
