#include "qvp/bounds.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace qvp {

namespace {

struct Minimum {
  double value;
  DecisionPoint witness;
};

// Quasiconvex minimization as bisection over convex sublevel feasibility.
Minimum minimize_objective(const QvpProblem& problem, const ObjectiveFunction& f, const BoundsOptions& options) {
  const auto& oracle = options.scalarize.oracle;
  DecisionPoint best = problem.feasible_point;
  if (best.size() != problem.n) {
    const auto res = check_feasible({}, problem.feasible_set, oracle);
    if (!res.feasible()) throw Error(ErrorCode::kInfeasibleSet, "feasible set is empty");
    best = res.x;
  }
  double hi = evaluate(f, best);
  std::vector<ConvexConstraint> level(1);
  auto probe = [&](double L) {
    level[0] = sublevel(f, L);
    return check_feasible(level, problem.feasible_set, oracle);
  };

  double lo = 0.0;
  if (std::holds_alternative<ConvexOverConcave>(f) && hi >= 0.0) {
    lo = 0.0;
  } else {
    double step = std::max(1.0, std::abs(hi));
    for (int k = 0;; ++k) {
      if (k > 200) throw Error(ErrorCode::kUnbounded, "objective appears unbounded below on S");
      lo = hi - step;
      const auto res = probe(lo);
      if (!res.feasible()) break;
      best = res.x;
      hi = std::min(lo, evaluate(f, best));
      step *= 2.0;
    }
  }

  while (hi - lo > options.tol_ideal) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto res = probe(mid);
    if (res.feasible()) {
      best = res.x;
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // The lower end keeps [m, M] around the whole outcome set; best attains hi.
  return {lo, best};
}

}  // namespace

IdealPoint ideal_point(const QvpProblem& problem, const BoundsOptions& options) {
  IdealPoint out;
  out.m.resize(problem.p());
  for (int i = 0; i < problem.p(); ++i) {
    auto res = minimize_objective(problem, problem.objectives[static_cast<std::size_t>(i)], options);
    out.m(i) = res.value;
    out.witnesses.push_back(std::move(res.witness));
  }
  return out;
}

SimplexBound simplex_bound(const QvpProblem& problem, const BoundsOptions& options) {
  const int n = problem.n;
  const auto& S = problem.feasible_set;
  const auto& oracle = options.scalarize.oracle;

  DecisionPoint alpha0(n);
  for (int j = 0; j < n; ++j) {
    alpha0(j) = minimize_linear(Eigen::VectorXd::Unit(n, j), S, 1e-10, oracle).value;
  }
  const double cap = -minimize_linear(-Eigen::VectorXd::Ones(n), S, 1e-10, oracle).value;

  SimplexBound out;
  out.simplex.cap = cap;
  out.simplex.vertices.push_back(alpha0);
  for (int j = 0; j < n; ++j) {
    DecisionPoint a = alpha0;
    a(j) = cap - (alpha0.sum() - alpha0(j));
    out.simplex.vertices.push_back(std::move(a));
  }

  out.M.resize(problem.p());
  for (int i = 0; i < problem.p(); ++i) {
    const auto& f = problem.objectives[static_cast<std::size_t>(i)];
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.simplex.vertices.size(); ++k) {
      const auto& vertex = out.simplex.vertices[k];
      if (const auto den = denominator(f); den && !(den->value(vertex) > kDenominatorTol)) {
        throw Error(ErrorCode::kDenominatorNonPositiveOnSimplex,
                    fmt::format("objective {} has denominator {:.6g} at simplex vertex {}; supply box.M in the "
                                "problem file",
                                i + 1, den->value(vertex), k));
      }
      try {
        worst = std::max(worst, evaluate(f, vertex));
      } catch (const Error& e) {
        throw Error(ErrorCode::kDenominatorNonPositiveOnSimplex,
                    fmt::format("objective {} cannot be bounded on the simplex ({}); supply box.M in the problem file",
                                i + 1, e.what()));
      }
    }
    out.M(i) = worst;
  }
  return out;
}

DegenerateIdealAttained::DegenerateIdealAttained(OutcomeBox box, DecisionPoint witness)
    : Error(ErrorCode::kDegenerateIdealAttained, "the ideal point is attained; the front is the single point m"),
      box_(std::move(box)),
      witness_(std::move(witness)) {}

OutcomeBox make_box(const QvpProblem& problem, const Direction& d, const BoundsOptions& options) {
  OutcomeBox box;
  const auto ideal = ideal_point(problem, options);
  box.computed_ideal = ideal.m;
  if (problem.box_m) {
    box.m = *problem.box_m;
    box.lower_from_user = true;
  } else {
    box.m = ideal.m;
  }
  if (problem.box_M) {
    box.M = *problem.box_M;
    box.upper_source = UpperSource::kUser;
  } else {
    auto sb = simplex_bound(problem, options);
    box.M = std::move(sb.M);
    box.simplex = std::move(sb.simplex);
    box.upper_source = UpperSource::kSimplex;
  }
  if (!(box.m.array() < box.M.array()).all()) {
    throw Error(ErrorCode::kInvalidBox, "box lower corner m must lie strictly below upper corner M");
  }

  const auto at_m = solve_chebyshev(problem, box.m, d, box.m, options.scalarize);
  // m sits up to tol_ideal below the attained minima
  const double slack = options.scalarize.tol_scalar + options.tol_ideal / d.vector().minCoeff();
  if (at_m.t <= slack) throw DegenerateIdealAttained(box, at_m.x);
  return box;
}

}  // namespace qvp
