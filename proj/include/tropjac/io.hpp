#pragma once

#include "tropjac/homology.hpp"
#include "tropjac/outer_metrics.hpp"
#include "tropjac/tropical_plane.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace tropjac {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input document; the message carries the source and,
/// for syntax errors, the 1-based byte position.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::string& path);

/// 15 significant digits, as a string.
Json decimal(double x);
/// "p/q", or "p" for integers.
Json exact(const Rational& r);
/// A JSON number or numeric string ("0.25", "1/3", "2e-3").
Rational rational_from_json(const Json& j, const std::string& what);

/// Lengths are emitted as exact decimal strings when the rational has a
/// terminating expansion of at most 15 significant digits, else as "p/q",
/// so the document re-parses to an equal graph.
Json graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const Json& j);

Json marking_to_json(const Marking& m);
Marking marking_from_json(const Json& j);

Json matrix_to_json(const Matrix& m);
Json exact_matrix_to_json(const std::vector<std::vector<Rational>>& m);
Matrix matrix_from_json(const Json& j);

Json polynomial_to_json(const TropicalPolynomial2& p);
TropicalPolynomial2 polynomial_from_json(const Json& j);

/// {"graph": ..., "marking": ...}; the marking defaults to the fundamental
/// cycle basis.
SimplexPoint point_from_json(const Json& j);
Json point_to_json(const SimplexPoint& p);

/// {"legs": [{"graph": <type>, "marking": ..., "nodes": [[x_e...], ...]}]}
PLPath path_from_json(const Json& j);
Json path_to_json(const PLPath& p);

}  // namespace tropjac
