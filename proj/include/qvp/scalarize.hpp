/**
 * @file scalarize.hpp
 * @brief Weighted Chebyshev scalarization along a positive direction.
 *
 * For a reference point v and direction d > 0 the scalarization
 *
 *     t_v = min_{x in S} max_j (f_j(x) - v_j) / d_j
 *
 * locates w_v = v + t_v d, the point where the line through v meets the
 * boundary of f(S) + R^p_+. Each f_j is quasiconvex, so for a fixed t the
 * system {f_j(x) <= v_j + t d_j, x in S} is a convex feasibility problem and
 * t_v is found by bisection on t.
 */
#pragma once

#include <optional>
#include <utility>

#include "qvp/convex_oracle.hpp"
#include "qvp/model.hpp"

namespace qvp {

/// Strictly positive direction in outcome space.
class Direction {
 public:
  explicit Direction(Eigen::VectorXd d);

  /// All-ones direction in R^p.
  static Direction ones(int p);

  const Eigen::VectorXd& vector() const { return d_; }
  double operator()(Eigen::Index j) const { return d_(j); }
  Eigen::Index size() const { return d_.size(); }

 private:
  Eigen::VectorXd d_;
};

struct ScalarizeOptions {
  double tol_scalar = 1e-6;
  OracleOptions oracle;
};

struct ScalarizationResult {
  DecisionPoint x;     ///< witness x_v
  double t = 0.0;      ///< optimal value t_v, lower end of the final bracket
  OutcomePoint w;      ///< v + t d; f(x) <= w + bracket_width d
  double bracket_width = 0.0;
  int trials = 0;      ///< feasibility calls spent on bisection
};

/// Feasibility system {f_j(x) <= v_j + t d_j} as convex constraints.
std::vector<ConvexConstraint> chebyshev_level_constraints(const QvpProblem& problem, const OutcomePoint& v,
                                                          const Direction& d, double t);

/// Solves the scalarization at v. `ideal` gives the lower end of the bracket
/// via t >= max_j (m_j - v_j) / d_j; without it the bracket is grown downward
/// from the stored feasible point.
/// Throws kInfeasibleSet, kBracketInversion, kDimensionMismatch.
ScalarizationResult solve_chebyshev(const QvpProblem& problem, const OutcomePoint& v, const Direction& d,
                                    const std::optional<OutcomePoint>& ideal, const ScalarizeOptions& options = {});

/// Witness pair (x_v, w_v).
std::pair<DecisionPoint, OutcomePoint> generate_wes(const QvpProblem& problem, const OutcomePoint& v,
                                                    const Direction& d,
                                                    const std::optional<OutcomePoint>& ideal = std::nullopt,
                                                    const ScalarizeOptions& options = {});

struct VerifyResult {
  bool weakly_efficient = false;
  double t = 0.0;
};

/// Scalarizes at v = f(x*) and reports whether t is zero within tol_scalar.
/// Throws kInfeasiblePoint if x* violates S by more than tol_feas.
VerifyResult verify_wes(const QvpProblem& problem, const DecisionPoint& x_star, const Direction& d,
                        const ScalarizeOptions& options = {});

}  // namespace qvp
