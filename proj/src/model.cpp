#include "qvp/model.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qvp/convex_oracle.hpp"

namespace qvp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDenominatorNonPositive: return "DenominatorNonPositive";
    case ErrorCode::kNonnegativityViolated: return "NonnegativityViolated";
    case ErrorCode::kDenominatorNonPositiveOnSimplex: return "DenominatorNonPositiveOnSimplex";
    case ErrorCode::kInfeasibleSet: return "InfeasibleSet";
    case ErrorCode::kInfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kInvalidBox: return "InvalidBox";
    case ErrorCode::kDegenerateIdealAttained: return "DegenerateIdealAttained";
    case ErrorCode::kVertexNotInSet: return "VertexNotInSet";
    case ErrorCode::kWNotAbove: return "WNotAbove";
    case ErrorCode::kBracketInversion: return "BracketInversion";
    case ErrorCode::kIterationCapExceeded: return "IterationCapExceeded";
  }
  return "UnknownError";
}

double QuadraticForm::value(const Eigen::VectorXd& x) const {
  double v = c.dot(x) + d;
  if (!is_affine()) v += x.dot(Q * x);
  return v;
}

Eigen::VectorXd QuadraticForm::gradient(const Eigen::VectorXd& x) const {
  if (is_affine()) return c;
  return 2.0 * (Q * x) + c;
}

QuadraticForm QuadraticForm::affine(Eigen::VectorXd c, double d) {
  QuadraticForm q;
  q.c = std::move(c);
  q.d = d;
  return q;
}

ConvexConstraint ConvexConstraint::infeasible(Eigen::Index n) {
  ConvexConstraint con;
  con.g = QuadraticForm::affine(Eigen::VectorXd::Zero(n), 1.0);
  con.canonical_infeasible = true;
  return con;
}

std::vector<ConvexConstraint> FeasibleSet::constraints() const {
  std::vector<ConvexConstraint> out;
  out.reserve(static_cast<std::size_t>(A.rows()) + quadratic.size());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    ConvexConstraint con;
    con.g = QuadraticForm::affine(A.row(i).transpose(), -r(i));
    out.push_back(std::move(con));
  }
  out.insert(out.end(), quadratic.begin(), quadratic.end());
  return out;
}

bool FeasibleSet::has_finite_box() const {
  return lo.allFinite() && hi.allFinite();
}

namespace {

void check_dimension(const ObjectiveFunction& f, const DecisionPoint& x) {
  const Eigen::Index n = std::visit(
      [](const auto& g) -> Eigen::Index {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ConvexQuadratic>) {
          return g.form.dimension();
        } else {
          return g.num.dimension();
        }
      },
      f);
  if (n != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("objective expects dimension {}, got {}", n, x.size()));
  }
}

double checked_denominator(const QuadraticForm& den, const DecisionPoint& x) {
  const double value = den.value(x);
  if (!(value > kDenominatorTol)) {
    throw Error(ErrorCode::kDenominatorNonPositive,
                fmt::format("denominator {:.6g} is not above {:g}", value, kDenominatorTol));
  }
  return value;
}

}  // namespace

double evaluate(const ObjectiveFunction& f, const DecisionPoint& x) {
  check_dimension(f, x);
  return std::visit(
      [&x](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearFractional>) {
          const double den = checked_denominator(g.den, x);
          return g.num.value(x) / den;
        } else if constexpr (std::is_same_v<T, ConvexOverConcave>) {
          const double den = checked_denominator(g.den, x);
          const double num = g.num.value(x);
          if (num < -kDenominatorTol) {
            throw Error(ErrorCode::kNonnegativityViolated,
                        fmt::format("numerator {:.6g} is negative", num));
          }
          return num / den;
        } else {
          return g.form.value(x);
        }
      },
      f);
}

OutcomePoint evaluate_all(const QvpProblem& problem, const DecisionPoint& x) {
  OutcomePoint y(problem.p());
  for (int j = 0; j < problem.p(); ++j) y(j) = evaluate(problem.objectives[j], x);
  return y;
}

namespace {

// num - level * den, with den's matrix possibly empty.
QuadraticForm shifted_ratio(const QuadraticForm& num, const QuadraticForm& den, double level) {
  QuadraticForm g;
  g.c = num.c - level * den.c;
  g.d = num.d - level * den.d;
  if (!num.is_affine() || !den.is_affine()) {
    const Eigen::Index n = num.dimension();
    g.Q = Eigen::MatrixXd::Zero(n, n);
    if (!num.is_affine()) g.Q += num.Q;
    if (!den.is_affine()) g.Q -= level * den.Q;
  }
  return g;
}

}  // namespace

ConvexConstraint sublevel(const ObjectiveFunction& f, double level) {
  return std::visit(
      [level](const auto& g) -> ConvexConstraint {
        using T = std::decay_t<decltype(g)>;
        ConvexConstraint con;
        if constexpr (std::is_same_v<T, LinearFractional>) {
          con.g = shifted_ratio(g.num, g.den, level);
        } else if constexpr (std::is_same_v<T, ConvexOverConcave>) {
          // A non-negative numerator over a positive denominator never drops below zero.
          if (level < 0.0) return ConvexConstraint::infeasible(g.num.dimension());
          con.g = shifted_ratio(g.num, g.den, level);
        } else {
          con.g = g.form;
          con.g.d -= level;
        }
        return con;
      },
      f);
}

double evaluate_constraints(const FeasibleSet& S, const DecisionPoint& x) {
  if (x.size() != S.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("feasible set has dimension {}, got {}", S.dimension(), x.size()));
  }
  double worst = 0.0;
  if (S.A.rows() > 0) worst = std::max(worst, (S.A * x - S.r).maxCoeff());
  for (const auto& con : S.quadratic) worst = std::max(worst, con.value(x));
  worst = std::max(worst, (S.lo - x).maxCoeff());
  worst = std::max(worst, (x - S.hi).maxCoeff());
  return worst;
}

std::optional<QuadraticForm> denominator(const ObjectiveFunction& f) {
  if (const auto* lf = std::get_if<LinearFractional>(&f)) return lf->den;
  if (const auto* cc = std::get_if<ConvexOverConcave>(&f)) return cc->den;
  return std::nullopt;
}

std::string_view kind_name(const ObjectiveFunction& f) {
  if (std::holds_alternative<LinearFractional>(f)) return "linear_fractional";
  if (std::holds_alternative<ConvexOverConcave>(f)) return "convex_over_concave";
  return "quadratic";
}

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kValidation, message);
}

void symmetrize(QuadraticForm& q) {
  if (!q.is_affine()) q.Q = 0.5 * (q.Q + q.Q.transpose()).eval();
}

double extreme_eigenvalue(const Eigen::MatrixXd& Q, bool smallest) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q, Eigen::EigenvaluesOnly);
  return smallest ? eig.eigenvalues().minCoeff() : eig.eigenvalues().maxCoeff();
}

double curvature_slack(const Eigen::MatrixXd& Q) {
  return kCurvatureTol * std::max(1.0, Q.cwiseAbs().maxCoeff());
}

void check_form(QuadraticForm& q, int n, const std::string& what) {
  require(q.c.size() == n, fmt::format("{}: linear term has size {}, expected {}", what, q.c.size(), n));
  require(std::isfinite(q.d) && q.c.allFinite(), what + ": non-finite coefficient");
  if (!q.is_affine()) {
    require(q.Q.rows() == n && q.Q.cols() == n,
            fmt::format("{}: matrix is {}x{}, expected {}x{}", what, q.Q.rows(), q.Q.cols(), n, n));
    require(q.Q.allFinite(), what + ": non-finite matrix entry");
    symmetrize(q);
  }
}

void require_psd(const QuadraticForm& q, const std::string& what) {
  if (q.is_affine()) return;
  require(extreme_eigenvalue(q.Q, true) >= -curvature_slack(q.Q), what + ": matrix is not positive semidefinite");
}

void require_nsd(const QuadraticForm& q, const std::string& what) {
  if (q.is_affine()) return;
  require(extreme_eigenvalue(q.Q, false) <= curvature_slack(q.Q), what + ": matrix is not negative semidefinite");
}

}  // namespace

void validate_structure(QvpProblem& problem) {
  const int n = problem.n;
  require(n >= 1, "n must be positive");
  require(problem.p() >= 2, "at least two objectives are required");

  for (int j = 0; j < problem.p(); ++j) {
    const std::string tag = fmt::format("objective {}", j + 1);
    std::visit(
        [&](auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, LinearFractional>) {
            check_form(g.num, n, tag + " numerator");
            check_form(g.den, n, tag + " denominator");
            require(g.num.is_affine() && g.den.is_affine(), tag + ": linear fractional terms must be affine");
          } else if constexpr (std::is_same_v<T, ConvexOverConcave>) {
            check_form(g.num, n, tag + " numerator");
            check_form(g.den, n, tag + " denominator");
            require_psd(g.num, tag + " numerator");
            require_nsd(g.den, tag + " denominator");
          } else {
            check_form(g.form, n, tag);
            require_psd(g.form, tag);
          }
        },
        problem.objectives[static_cast<std::size_t>(j)]);
  }

  FeasibleSet& S = problem.feasible_set;
  if (S.A.size() == 0) {
    S.A.resize(0, n);
    S.r.resize(0);
  }
  require(S.A.cols() == n && S.A.rows() == S.r.size(), "linear constraints: A and r disagree in shape");
  require(S.A.allFinite() && S.r.allFinite(), "linear constraints: non-finite entry");
  bool enclosed = false;
  for (std::size_t i = 0; i < S.quadratic.size(); ++i) {
    const std::string tag = fmt::format("quadratic constraint {}", i + 1);
    check_form(S.quadratic[i].g, n, tag);
    require_psd(S.quadratic[i].g, tag);
    if (!S.quadratic[i].g.is_affine() &&
        extreme_eigenvalue(S.quadratic[i].g.Q, true) > curvature_slack(S.quadratic[i].g.Q)) {
      enclosed = true;
    }
  }
  if (S.lo.size() == 0) S.lo = Eigen::VectorXd::Constant(n, -std::numeric_limits<double>::infinity());
  if (S.hi.size() == 0) S.hi = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  require(S.lo.size() == n && S.hi.size() == n, "bounds must have n entries");
  for (int j = 0; j < n; ++j) {
    require(!std::isnan(S.lo(j)) && !std::isnan(S.hi(j)), "bounds: NaN entry");
    require(S.lo(j) <= S.hi(j), fmt::format("bounds: lo[{}] > hi[{}]", j, j));
  }
  require(S.has_finite_box() || enclosed,
          "feasible set must be bounded: give finite bounds or a positive definite quadratic constraint");

  const int p = problem.p();
  if (problem.box_m) {
    require(problem.box_m->size() == p && problem.box_m->allFinite(), "box.m must have p finite entries");
  }
  if (problem.box_M) {
    require(problem.box_M->size() == p && problem.box_M->allFinite(), "box.M must have p finite entries");
  }
  if (problem.direction) {
    require(problem.direction->size() == p, "direction must have p entries");
    require((problem.direction->array() > 0.0).all() && problem.direction->allFinite(),
            "direction must be strictly positive");
  }
}

void finalize_problem(QvpProblem& problem) {
  validate_structure(problem);
  const auto outcome = check_feasible({}, problem.feasible_set);
  if (!outcome.feasible()) {
    throw Error(ErrorCode::kInfeasibleSet,
                fmt::format("feasible set is empty (best violation {:.3g})", outcome.violation));
  }
  problem.feasible_point = outcome.x;
}

}  // namespace qvp
