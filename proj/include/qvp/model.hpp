/**
 * @file model.hpp
 * @brief Problem data model: objective classes, convex constraints and the
 *        conversion of quasiconvex objectives into convex sublevel constraints.
 *
 * A problem minimizes p objectives f_1..f_p over a compact convex set S in
 * R^n. Every supported objective has convex sublevel sets that can be written
 * in closed form as a linear or convex quadratic inequality, which is what
 * lets a plain convex feasibility oracle drive the whole solver.
 */
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qvp/error.hpp"

namespace qvp {

using DecisionPoint = Eigen::VectorXd;
using OutcomePoint = Eigen::VectorXd;

/// Denominators at or below this value are treated as non-positive.
inline constexpr double kDenominatorTol = 1e-8;
/// Eigenvalue slack for the PSD / NSD checks done at load time.
inline constexpr double kCurvatureTol = 1e-8;

/// x^T Q x + c^T x + d. An empty Q means the form is affine.
struct QuadraticForm {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
  double d = 0.0;

  bool is_affine() const { return Q.size() == 0; }
  Eigen::Index dimension() const { return c.size(); }
  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;

  static QuadraticForm affine(Eigen::VectorXd c, double d);
};

/// (a^T x + a0) / (b^T x + b0).
struct LinearFractional {
  QuadraticForm num;  // affine
  QuadraticForm den;  // affine
};

/// Non-negative convex quadratic over a positive concave quadratic (or affine).
struct ConvexOverConcave {
  QuadraticForm num;
  QuadraticForm den;
};

/// x^T Q x + c^T x + d with Q positive semidefinite.
struct ConvexQuadratic {
  QuadraticForm form;
};

using ObjectiveFunction = std::variant<LinearFractional, ConvexOverConcave, ConvexQuadratic>;

/// A convex inequality g(x) <= 0, linear when g is affine.
struct ConvexConstraint {
  QuadraticForm g;
  /// Set for the canonical empty constraint (0 <= -1) produced by sublevels
  /// that cannot be attained.
  bool canonical_infeasible = false;

  double value(const Eigen::VectorXd& x) const { return g.value(x); }
  bool is_linear() const { return g.is_affine(); }

  static ConvexConstraint infeasible(Eigen::Index n);
};

/// S = {x : A x <= r, quadratic_i(x) <= 0, lo <= x <= hi}.
struct FeasibleSet {
  Eigen::MatrixXd A;
  Eigen::VectorXd r;
  std::vector<ConvexConstraint> quadratic;
  Eigen::VectorXd lo;  // may hold -inf
  Eigen::VectorXd hi;  // may hold +inf

  Eigen::Index dimension() const { return lo.size(); }

  /// Linear rows and quadratic inequalities as one list (bounds excluded).
  std::vector<ConvexConstraint> constraints() const;

  bool has_finite_box() const;
};

struct QvpProblem {
  int n = 0;
  std::vector<ObjectiveFunction> objectives;
  FeasibleSet feasible_set;
  std::optional<OutcomePoint> box_m;
  std::optional<OutcomePoint> box_M;
  std::optional<Eigen::VectorXd> direction;
  /// A point of S found by the load-time nonemptiness check.
  DecisionPoint feasible_point;

  int p() const { return static_cast<int>(objectives.size()); }
};

/// f(x). Throws kDenominatorNonPositive / kNonnegativityViolated.
double evaluate(const ObjectiveFunction& f, const DecisionPoint& x);

/// (f_1(x), ..., f_p(x)).
OutcomePoint evaluate_all(const QvpProblem& problem, const DecisionPoint& x);

/// Convex constraint whose solution set (inside S) is {x : f(x) <= level}.
ConvexConstraint sublevel(const ObjectiveFunction& f, double level);

/// max(0, max_i g_i(x)) over linear rows, quadratic inequalities and bounds.
double evaluate_constraints(const FeasibleSet& S, const DecisionPoint& x);

/// Denominator of a fractional objective, or nullopt for quadratics.
std::optional<QuadraticForm> denominator(const ObjectiveFunction& f);

std::string_view kind_name(const ObjectiveFunction& f);

/// Symmetrizes matrices and checks dimensions, curvature and boundedness.
/// Does not touch feasibility; see finalize_problem.
void validate_structure(QvpProblem& problem);

/// validate_structure plus the nonemptiness check, which stores a feasible
/// point in problem.feasible_point. Throws kInfeasibleSet when S is empty.
void finalize_problem(QvpProblem& problem);

}  // namespace qvp
