/**
 * @file bounds.hpp
 * @brief Enclosing box [m, M] of the outcome set.
 *
 * m is the ideal point: each f_i is minimized over S by bisection on the
 * level of its (convex) sublevel set. M is bounded from above without solving
 * the nonconvex maximization: S sits inside the simplex with vertices
 * alpha^0 (coordinate-wise minima) and alpha^j = alpha^0 raised in coordinate
 * j until sum(x) = max_{S} sum(x), and a quasiconvex function attains its
 * maximum over a simplex at a vertex.
 */
#pragma once

#include <optional>
#include <vector>

#include "qvp/scalarize.hpp"

namespace qvp {

struct BoundsOptions {
  /// Absolute tolerance on each ideal-point component.
  double tol_ideal = 1e-6;
  ScalarizeOptions scalarize;
};

struct Simplex {
  std::vector<DecisionPoint> vertices;  ///< alpha^0, alpha^1, ..., alpha^n
  double cap = 0.0;                     ///< max of sum(x) over S
};

enum class UpperSource { kSimplex, kUser };

struct OutcomeBox {
  OutcomePoint m;
  OutcomePoint M;
  UpperSource upper_source = UpperSource::kSimplex;
  bool lower_from_user = false;
  /// Ideal point as computed (differs from m when the file overrides it).
  std::optional<OutcomePoint> computed_ideal;
  std::optional<Simplex> simplex;
};

struct IdealPoint {
  OutcomePoint m;
  std::vector<DecisionPoint> witnesses;
};

IdealPoint ideal_point(const QvpProblem& problem, const BoundsOptions& options = {});

struct SimplexBound {
  Simplex simplex;
  OutcomePoint M;
};

/// Throws kDenominatorNonPositiveOnSimplex when a fractional objective's
/// denominator is not positive at some simplex vertex.
SimplexBound simplex_bound(const QvpProblem& problem, const BoundsOptions& options = {});

/// Raised by make_box when the ideal point is itself attained; in that case
/// the nondominated set is the single point m.
class DegenerateIdealAttained : public Error {
 public:
  DegenerateIdealAttained(OutcomeBox box, DecisionPoint witness);

  const OutcomeBox& box() const { return box_; }
  const DecisionPoint& witness() const { return witness_; }

 private:
  OutcomeBox box_;
  DecisionPoint witness_;
};

/// Assembles [m, M]: file values take precedence, otherwise m comes from
/// ideal_point and M from simplex_bound. Throws kInvalidBox unless m < M,
/// and DegenerateIdealAttained when m is an outcome.
OutcomeBox make_box(const QvpProblem& problem, const Direction& d, const BoundsOptions& options = {});

}  // namespace qvp
