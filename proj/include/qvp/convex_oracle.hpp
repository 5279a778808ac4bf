/**
 * @file convex_oracle.hpp
 * @brief Feasibility and linear minimization over systems of convex
 *        (linear / convex quadratic) inequalities.
 *
 * check_feasible minimizes the max-violation function
 *
 *     Phi(x) = max_i g_i(x)    subject to lo <= x <= hi
 *
 * through its epigraph form (min s s.t. g_i(x) <= s) with a log-barrier
 * Newton method. It stops at the first iterate with Phi <= tol_feas
 * (Feasible) or as soon as the barrier duality bound proves
 * min Phi > tol_feas (Infeasible). When the Newton budget runs out first the
 * verdict is decided on the best Phi seen, so in that case infeasibility is
 * budgeted rather than certified.
 */
#pragma once

#include <span>
#include <vector>

#include "qvp/model.hpp"

namespace qvp {

struct OracleOptions {
  double tol_feas = 1e-7;
  /// Maximum number of Newton steps per feasibility call.
  int budget = 400;
};

struct FeasibilityOutcome {
  enum class Status { kFeasible, kInfeasible };

  Status status = Status::kInfeasible;
  /// Feasible: the witness. Infeasible: the best point seen.
  DecisionPoint x;
  /// Phi(x) clipped at zero for Feasible; best Phi for Infeasible.
  double violation = 0.0;
  /// Certified by the duality bound (always true for Feasible).
  bool certified = false;
  int newton_steps = 0;

  bool feasible() const { return status == Status::kFeasible; }
};

/// Decides whether S together with the extra constraints has a point with
/// max violation <= tol_feas. Throws kDimensionMismatch, kUnbounded.
FeasibilityOutcome check_feasible(std::span<const ConvexConstraint> extra, const FeasibleSet& S,
                                  const OracleOptions& options = {});

struct LinearMinimum {
  DecisionPoint x;
  double value = 0.0;
};

/// min c^T x over S to within tol * (1 + |value|). Throws kInfeasibleSet.
LinearMinimum minimize_linear(const Eigen::VectorXd& c, const FeasibleSet& S, double tol = 1e-9,
                              const OracleOptions& options = {});

}  // namespace qvp
