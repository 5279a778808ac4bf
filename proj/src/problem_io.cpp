#include "qvp/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace qvp {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& message) { throw Error(ErrorCode::kParse, message); }

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) parse_fail(fmt::format("{}: missing field '{}'", where, key));
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where + ": expected a number");
  return v.get<double>();
}

double bound_entry(const json& v, double infinite, const std::string& where) {
  if (v.is_null()) return infinite;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
    parse_fail(where + ": unrecognized bound '" + s + "'");
  }
  return number(v, where);
}

Eigen::VectorXd vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + ": expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = number(v[i], where);
  return out;
}

Eigen::VectorXd bounds_of(const json& v, double infinite, const std::string& where) {
  if (!v.is_array()) parse_fail(where + ": expected an array");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = bound_entry(v[i], infinite, where);
  return out;
}

Eigen::MatrixXd matrix_of(const json& v, const std::string& where) {
  if (!v.is_array()) parse_fail(where + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(v[0].is_array() ? v[0].size() : 0);
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) parse_fail(where + ": ragged matrix");
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = number(row[static_cast<std::size_t>(j)], where);
  }
  return out;
}

// Accepts {"Q","c","d"} as well as the affine spellings {"a","a0"} / {"b","b0"}.
QuadraticForm form_of(const json& obj, int n, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + ": expected an object");
  QuadraticForm q;
  if (obj.contains("Q")) q.Q = matrix_of(obj.at("Q"), where + ".Q");
  bool has_linear = false;
  for (const char* key : {"c", "a", "b"}) {
    if (obj.contains(key)) {
      if (has_linear) parse_fail(where + ": more than one linear term given");
      q.c = vector_of(obj.at(key), fmt::format("{}.{}", where, key));
      has_linear = true;
    }
  }
  if (!has_linear) q.c = Eigen::VectorXd::Zero(n);
  bool has_constant = false;
  for (const char* key : {"d", "a0", "b0"}) {
    if (obj.contains(key)) {
      if (has_constant) parse_fail(where + ": more than one constant term given");
      q.d = number(obj.at(key), fmt::format("{}.{}", where, key));
      has_constant = true;
    }
  }
  return q;
}

ObjectiveFunction objective_of(const json& obj, int n, const std::string& where) {
  const auto type = field(obj, "type", where);
  if (!type.is_string()) parse_fail(where + ": 'type' must be a string");
  const auto name = type.get<std::string>();
  if (name == "linear_fractional") {
    return LinearFractional{form_of(field(obj, "num", where), n, where + ".num"),
                            form_of(field(obj, "den", where), n, where + ".den")};
  }
  if (name == "convex_over_concave") {
    return ConvexOverConcave{form_of(field(obj, "num", where), n, where + ".num"),
                             form_of(field(obj, "den", where), n, where + ".den")};
  }
  if (name == "quadratic") return ConvexQuadratic{form_of(obj, n, where)};
  parse_fail(where + ": unknown objective type '" + name + "'");
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v(i))) {
      out.push_back(v(i));
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_json(m.row(i).transpose()));
  return out;
}

json form_json(const QuadraticForm& q) {
  json out;
  if (!q.is_affine()) out["Q"] = matrix_json(q.Q);
  out["c"] = vector_json(q.c);
  out["d"] = q.d;
  return out;
}

}  // namespace

QvpProblem parse_problem(const json& doc) {
  if (!doc.is_object()) parse_fail("problem document must be a JSON object");
  QvpProblem problem;
  const auto& n_field = field(doc, "n", "problem");
  if (!n_field.is_number_integer()) parse_fail("problem: 'n' must be an integer");
  problem.n = n_field.get<int>();
  if (problem.n < 1) parse_fail("problem: 'n' must be positive");
  const int n = problem.n;

  const auto& objectives = field(doc, "objectives", "problem");
  if (!objectives.is_array()) parse_fail("problem: 'objectives' must be an array");
  for (std::size_t j = 0; j < objectives.size(); ++j) {
    problem.objectives.push_back(objective_of(objectives[j], n, fmt::format("objectives[{}]", j)));
  }

  FeasibleSet& S = problem.feasible_set;
  S.A.resize(0, n);
  S.r.resize(0);
  if (doc.contains("constraints")) {
    const auto& cons = doc.at("constraints");
    if (!cons.is_object()) parse_fail("constraints: expected an object");
    if (cons.contains("linear")) {
      const auto& lin = cons.at("linear");
      S.A = matrix_of(field(lin, "A", "constraints.linear"), "constraints.linear.A");
      S.r = vector_of(field(lin, "r", "constraints.linear"), "constraints.linear.r");
      if (S.A.rows() == 0) S.A.resize(0, n);
    }
    if (cons.contains("quadratic")) {
      const auto& quad = cons.at("quadratic");
      if (!quad.is_array()) parse_fail("constraints.quadratic: expected an array");
      for (std::size_t i = 0; i < quad.size(); ++i) {
        ConvexConstraint con;
        con.g = form_of(quad[i], n, fmt::format("constraints.quadratic[{}]", i));
        S.quadratic.push_back(std::move(con));
      }
    }
    if (cons.contains("bounds")) {
      const auto& b = cons.at("bounds");
      if (b.contains("lo")) S.lo = bounds_of(b.at("lo"), -std::numeric_limits<double>::infinity(), "bounds.lo");
      if (b.contains("hi")) S.hi = bounds_of(b.at("hi"), std::numeric_limits<double>::infinity(), "bounds.hi");
    }
  }

  if (doc.contains("box")) {
    const auto& box = doc.at("box");
    if (!box.is_object()) parse_fail("box: expected an object");
    if (box.contains("m")) problem.box_m = vector_of(box.at("m"), "box.m");
    if (box.contains("M")) problem.box_M = vector_of(box.at("M"), "box.M");
  }
  if (doc.contains("direction")) problem.direction = vector_of(doc.at("direction"), "direction");

  finalize_problem(problem);
  return problem;
}

QvpProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open problem file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(fmt::format("{}: {}", path, e.what()));
  }
  return parse_problem(doc);
}

json problem_to_json(const QvpProblem& problem) {
  json doc;
  doc["n"] = problem.n;
  json objectives = json::array();
  for (const auto& f : problem.objectives) {
    std::visit(
        [&](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          json o;
          if constexpr (std::is_same_v<T, LinearFractional>) {
            o["type"] = "linear_fractional";
            o["num"] = {{"a", vector_json(g.num.c)}, {"a0", g.num.d}};
            o["den"] = {{"b", vector_json(g.den.c)}, {"b0", g.den.d}};
          } else if constexpr (std::is_same_v<T, ConvexOverConcave>) {
            o["type"] = "convex_over_concave";
            o["num"] = form_json(g.num);
            o["den"] = form_json(g.den);
          } else {
            o = form_json(g.form);
            o["type"] = "quadratic";
          }
          objectives.push_back(std::move(o));
        },
        f);
  }
  doc["objectives"] = std::move(objectives);
  const FeasibleSet& S = problem.feasible_set;
  json cons;
  if (S.A.rows() > 0) cons["linear"] = {{"A", matrix_json(S.A)}, {"r", vector_json(S.r)}};
  if (!S.quadratic.empty()) {
    json quad = json::array();
    for (const auto& q : S.quadratic) quad.push_back(form_json(q.g));
    cons["quadratic"] = std::move(quad);
  }
  cons["bounds"] = {{"lo", vector_json(S.lo)}, {"hi", vector_json(S.hi)}};
  doc["constraints"] = std::move(cons);
  if (problem.box_m || problem.box_M) {
    json box;
    if (problem.box_m) box["m"] = vector_json(*problem.box_m);
    if (problem.box_M) box["M"] = vector_json(*problem.box_M);
    doc["box"] = std::move(box);
  }
  if (problem.direction) doc["direction"] = vector_json(*problem.direction);
  return doc;
}

}  // namespace qvp
