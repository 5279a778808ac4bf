#include "qvp/scalarize.hpp"

#include <cmath>

#include <fmt/format.h>

namespace qvp {

Direction::Direction(Eigen::VectorXd d) : d_(std::move(d)) {
  if (d_.size() == 0 || !d_.allFinite() || !(d_.array() > 0.0).all()) {
    throw Error(ErrorCode::kValidation, "direction must be non-empty, finite and strictly positive");
  }
}

Direction Direction::ones(int p) { return Direction(Eigen::VectorXd::Ones(p)); }

std::vector<ConvexConstraint> chebyshev_level_constraints(const QvpProblem& problem, const OutcomePoint& v,
                                                          const Direction& d, double t) {
  std::vector<ConvexConstraint> cons;
  cons.reserve(problem.objectives.size());
  for (int j = 0; j < problem.p(); ++j) {
    cons.push_back(sublevel(problem.objectives[static_cast<std::size_t>(j)], v(j) + t * d(j)));
  }
  return cons;
}

namespace {

double chebyshev_value(const OutcomePoint& y, const OutcomePoint& v, const Direction& d) {
  return ((y - v).array() / d.vector().array()).maxCoeff();
}

class Bisection {
 public:
  Bisection(const QvpProblem& problem, const OutcomePoint& v, const Direction& d, const ScalarizeOptions& options)
      : problem_(problem), v_(v), d_(d), options_(options) {}

  FeasibilityOutcome probe(double t) {
    ++trials_;
    const auto cons = chebyshev_level_constraints(problem_, v_, d_, t);
    auto out = check_feasible(cons, problem_.feasible_set, options_.oracle);
    if (!out.feasible() && !out.certified) {
      // Budget ran out without a certificate: one retry with a larger budget.
      OracleOptions retry = options_.oracle;
      retry.budget *= 4;
      out = check_feasible(cons, problem_.feasible_set, retry);
    }
    return out;
  }

  bool confirms(const DecisionPoint& x, double t) const {
    const auto cons = chebyshev_level_constraints(problem_, v_, d_, t);
    double worst = evaluate_constraints(problem_.feasible_set, x);
    for (const auto& con : cons) worst = std::max(worst, con.value(x));
    return worst <= options_.oracle.tol_feas;
  }

  int trials() const { return trials_; }

 private:
  const QvpProblem& problem_;
  const OutcomePoint& v_;
  const Direction& d_;
  const ScalarizeOptions& options_;
  int trials_ = 0;
};

ScalarizationResult solve_from(const QvpProblem& problem, const OutcomePoint& v, const Direction& d,
                               const std::optional<OutcomePoint>& ideal, const DecisionPoint& x0,
                               const ScalarizeOptions& options) {
  const int p = problem.p();
  if (v.size() != p || d.size() != p) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("reference point has {} entries and direction {}, expected {}", v.size(), d.size(), p));
  }
  if (ideal && ideal->size() != p) throw Error(ErrorCode::kDimensionMismatch, "ideal point has wrong size");
  const double tol = options.tol_scalar;

  Bisection bisect(problem, v, d, options);
  DecisionPoint best = x0;
  double hi = chebyshev_value(evaluate_all(problem, x0), v, d);
  double lo = 0.0;

  if (ideal) {
    lo = chebyshev_value(*ideal, v, d);
    if (hi < lo - tol) {
      throw Error(ErrorCode::kBracketInversion,
                  fmt::format("upper end {:.9g} lies below lower end {:.9g}; the box is inconsistent", hi, lo));
    }
    if (hi <= lo) return {best, hi, v + hi * d.vector(), 0.0, 0};
    const auto at_lo = bisect.probe(lo);
    if (at_lo.feasible()) return {at_lo.x, lo, v + lo * d.vector(), 0.0, bisect.trials()};
  } else {
    double step = std::max(tol, 1e-3 * std::max(1.0, std::abs(hi)));
    for (int k = 0;; ++k) {
      if (k > 200) throw Error(ErrorCode::kUnbounded, "scalarization is unbounded below");
      lo = hi - step;
      const auto res = bisect.probe(lo);
      if (!res.feasible()) break;
      best = res.x;
      hi = lo;
      step *= 2.0;
    }
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto res = bisect.probe(mid);
    if (res.feasible()) {
      best = res.x;
      hi = mid;
    } else {
      lo = mid;
    }
  }

  if (!bisect.confirms(best, hi)) {
    OracleOptions strict = options.oracle;
    strict.budget *= 4;
    const auto res = check_feasible(chebyshev_level_constraints(problem, v, d, hi), problem.feasible_set, strict);
    if (res.feasible()) best = res.x;
  }
  // Report the infeasible end: no outcome lies strictly below v + lo d, so a
  // cut at w never removes part of the outcome set. x still attains hi.
  return {best, lo, v + lo * d.vector(), hi - lo, bisect.trials()};
}

DecisionPoint starting_point(const QvpProblem& problem, const ScalarizeOptions& options) {
  if (problem.feasible_point.size() == problem.n) return problem.feasible_point;
  const auto res = check_feasible({}, problem.feasible_set, options.oracle);
  if (!res.feasible()) throw Error(ErrorCode::kInfeasibleSet, "feasible set is empty");
  return res.x;
}

}  // namespace

ScalarizationResult solve_chebyshev(const QvpProblem& problem, const OutcomePoint& v, const Direction& d,
                                    const std::optional<OutcomePoint>& ideal, const ScalarizeOptions& options) {
  return solve_from(problem, v, d, ideal, starting_point(problem, options), options);
}

std::pair<DecisionPoint, OutcomePoint> generate_wes(const QvpProblem& problem, const OutcomePoint& v,
                                                    const Direction& d, const std::optional<OutcomePoint>& ideal,
                                                    const ScalarizeOptions& options) {
  auto res = solve_chebyshev(problem, v, d, ideal, options);
  return {std::move(res.x), std::move(res.w)};
}

VerifyResult verify_wes(const QvpProblem& problem, const DecisionPoint& x_star, const Direction& d,
                        const ScalarizeOptions& options) {
  if (x_star.size() != problem.n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("point has {} entries, problem has n = {}", x_star.size(), problem.n));
  }
  const double violation = evaluate_constraints(problem.feasible_set, x_star);
  if (violation > options.oracle.tol_feas) {
    throw Error(ErrorCode::kInfeasiblePoint, fmt::format("point violates the constraints by {:.3g}", violation));
  }
  const OutcomePoint v = evaluate_all(problem, x_star);
  const auto res = solve_from(problem, v, d, std::nullopt, x_star, options);
  return {std::abs(res.t) <= options.tol_scalar, res.t};
}

}  // namespace qvp
