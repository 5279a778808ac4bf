#include "qvp/convex_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace qvp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceNorm = 1e12;
constexpr double kBarrierGrowth = 20.0;
constexpr double kArmijo = 0.25;
constexpr double kCenteredDecrement = 1e-10;

struct BoundTerm {
  Eigen::Index index;
  double value;
  bool lower;
};

void check_constraint_dimension(const ConvexConstraint& con, Eigen::Index n) {
  const auto& g = con.g;
  if (g.c.size() != n || (!g.is_affine() && (g.Q.rows() != n || g.Q.cols() != n))) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("constraint dimension {} does not match feasible set dimension {}", g.c.size(), n));
  }
}

/// Epigraph barrier for  min s  s.t.  g_i(x) <= s,  lo <= x <= hi.
class PhaseOne {
 public:
  PhaseOne(std::vector<ConvexConstraint> cons, std::vector<BoundTerm> bounds, Eigen::Index n)
      : cons_(std::move(cons)), bounds_(std::move(bounds)), n_(n) {}

  double max_violation(const Eigen::VectorXd& x) const {
    double phi = -kInf;
    for (const auto& con : cons_) phi = std::max(phi, con.value(x));
    return phi;
  }

  int barrier_terms() const { return static_cast<int>(cons_.size() + bounds_.size()); }

  bool strictly_inside(const Eigen::VectorXd& z) const {
    const auto x = z.head(n_);
    const double s = z(n_);
    for (const auto& con : cons_) {
      if (!(s - con.value(x) > 0.0)) return false;
    }
    for (const auto& b : bounds_) {
      const double gap = b.lower ? x(b.index) - b.value : b.value - x(b.index);
      if (!(gap > 0.0)) return false;
    }
    return true;
  }

  double barrier(const Eigen::VectorXd& z, double tau) const {
    const auto x = z.head(n_);
    const double s = z(n_);
    double psi = tau * s;
    for (const auto& con : cons_) psi -= std::log(s - con.value(x));
    for (const auto& b : bounds_) psi -= std::log(b.lower ? x(b.index) - b.value : b.value - x(b.index));
    return psi;
  }

  void derivatives(const Eigen::VectorXd& z, double tau, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::Index dim = n_ + 1;
    grad.setZero(dim);
    hess.setZero(dim, dim);
    const Eigen::VectorXd x = z.head(n_);
    const double s = z(n_);
    grad(n_) = tau;
    for (const auto& con : cons_) {
      const double u = s - con.value(x);
      const Eigen::VectorXd dg = con.g.gradient(x);
      const double inv = 1.0 / u;
      const double inv2 = inv * inv;
      grad.head(n_) += dg * inv;
      grad(n_) -= inv;
      hess.topLeftCorner(n_, n_).noalias() += inv2 * dg * dg.transpose();
      if (!con.g.is_affine()) hess.topLeftCorner(n_, n_) += (2.0 * inv) * con.g.Q;
      hess.col(n_).head(n_) -= inv2 * dg;
      hess(n_, n_) += inv2;
    }
    hess.row(n_).head(n_) = hess.col(n_).head(n_).transpose();
    for (const auto& b : bounds_) {
      const double gap = b.lower ? x(b.index) - b.value : b.value - x(b.index);
      const double inv = 1.0 / gap;
      grad(b.index) += b.lower ? -inv : inv;
      hess(b.index, b.index) += inv * inv;
    }
  }

 private:
  std::vector<ConvexConstraint> cons_;
  std::vector<BoundTerm> bounds_;
  Eigen::Index n_;
};

double start_coordinate(double lo, double hi) {
  const bool lo_finite = std::isfinite(lo);
  const bool hi_finite = std::isfinite(hi);
  if (lo_finite && hi_finite) return 0.5 * (lo + hi);
  if (lo_finite) return lo + 1.0;
  if (hi_finite) return hi - 1.0;
  return 0.0;
}

}  // namespace

FeasibilityOutcome check_feasible(std::span<const ConvexConstraint> extra, const FeasibleSet& S,
                                  const OracleOptions& options) {
  if (options.budget < 1) throw Error(ErrorCode::kValidation, "oracle budget must be at least 1");
  const Eigen::Index n = S.dimension();

  std::vector<ConvexConstraint> cons = S.constraints();
  for (const auto& con : cons) check_constraint_dimension(con, n);
  for (const auto& con : extra) {
    check_constraint_dimension(con, n);
    cons.push_back(con);
  }

  std::vector<BoundTerm> bounds;
  Eigen::VectorXd x0(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = S.lo(j);
    const double hi = S.hi(j);
    x0(j) = start_coordinate(lo, hi);
    if (std::isfinite(lo) && std::isfinite(hi) && !(hi > lo)) {
      // A fixed coordinate has no interior; fold it into Phi instead.
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, j);
      cons.push_back({QuadraticForm::affine(e, -hi)});
      cons.push_back({QuadraticForm::affine(-e, lo)});
      continue;
    }
    if (std::isfinite(lo)) bounds.push_back({j, lo, true});
    if (std::isfinite(hi)) bounds.push_back({j, hi, false});
  }

  FeasibilityOutcome out;
  out.x = x0;
  for (const auto& con : cons) {
    if (con.canonical_infeasible) {
      out.status = FeasibilityOutcome::Status::kInfeasible;
      out.violation = con.value(x0);
      out.certified = true;
      return out;
    }
  }

  PhaseOne phase(std::move(cons), std::move(bounds), n);
  const double phi0 = phase.max_violation(x0);
  if (phi0 <= options.tol_feas) {
    out.status = FeasibilityOutcome::Status::kFeasible;
    out.violation = std::max(0.0, phi0);
    out.certified = true;
    return out;
  }

  Eigen::VectorXd z(n + 1);
  z.head(n) = x0;
  z(n) = phi0 + std::max(1.0, 0.1 * std::abs(phi0));

  const double m_total = phase.barrier_terms();
  double tau = m_total / std::max(1.0, std::abs(phi0));
  double best_phi = phi0;
  Eigen::VectorXd best_x = x0;

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  int steps = 0;
  auto finish_feasible = [&](const Eigen::VectorXd& x, double phi) {
    out.status = FeasibilityOutcome::Status::kFeasible;
    out.x = x;
    out.violation = std::max(0.0, phi);
    out.certified = true;
    out.newton_steps = steps;
    return out;
  };

  while (steps < options.budget) {
    // Centering.
    bool centered = false;
    while (steps < options.budget) {
      phase.derivatives(z, tau, grad, hess);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd dz = ldlt.solve(-grad);
      if (ldlt.info() != Eigen::Success || !dz.allFinite()) {
        hess.diagonal().array() += 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
        dz = hess.ldlt().solve(-grad);
        if (!dz.allFinite()) break;
      }
      const double decrement = -grad.dot(dz);
      if (decrement * 0.5 <= kCenteredDecrement) {
        centered = true;
        break;
      }
      ++steps;
      double alpha = 1.0;
      for (int k = 0; k < 80 && !phase.strictly_inside(z + alpha * dz); ++k) alpha *= 0.5;
      const double psi = phase.barrier(z, tau);
      for (int k = 0; k < 80; ++k) {
        const Eigen::VectorXd trial = z + alpha * dz;
        if (phase.strictly_inside(trial) && phase.barrier(trial, tau) <= psi + kArmijo * alpha * grad.dot(dz)) break;
        alpha *= 0.5;
      }
      const Eigen::VectorXd next = z + alpha * dz;
      if (!phase.strictly_inside(next)) break;
      z = next;
      if (z.head(n).norm() > kDivergenceNorm) {
        throw Error(ErrorCode::kUnbounded, "phase-one iterates diverged; is the feasible set bounded?");
      }
      const double phi = phase.max_violation(z.head(n));
      if (phi < best_phi) {
        best_phi = phi;
        best_x = z.head(n);
      }
      if (phi <= options.tol_feas) return finish_feasible(z.head(n), phi);
      if (alpha * dz.norm() <= 1e-15 * std::max(1.0, z.norm())) {
        centered = true;
        break;
      }
    }
    const double gap = m_total / tau;
    if (centered && z(n) - gap > options.tol_feas) {
      out.status = FeasibilityOutcome::Status::kInfeasible;
      out.x = best_x;
      out.violation = best_phi;
      out.certified = true;
      out.newton_steps = steps;
      return out;
    }
    if (gap <= 1e-14 * std::max(1.0, std::abs(z(n)))) break;
    tau *= kBarrierGrowth;
  }

  out.x = best_x;
  out.violation = std::max(0.0, best_phi);
  out.newton_steps = steps;
  out.certified = false;
  out.status = best_phi <= options.tol_feas ? FeasibilityOutcome::Status::kFeasible
                                            : FeasibilityOutcome::Status::kInfeasible;
  if (!out.feasible()) out.violation = best_phi;
  return out;
}

LinearMinimum minimize_linear(const Eigen::VectorXd& c, const FeasibleSet& S, double tol,
                              const OracleOptions& options) {
  if (c.size() != S.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("cost vector has size {}, feasible set dimension {}", c.size(), S.dimension()));
  }
  const auto start = check_feasible({}, S, options);
  if (!start.feasible()) throw Error(ErrorCode::kInfeasibleSet, "cannot minimize over an empty feasible set");

  DecisionPoint best = start.x;
  double hi = c.dot(best);
  std::vector<ConvexConstraint> level(1);
  auto probe = [&](double L) {
    level[0].g = QuadraticForm::affine(c, -L);
    return check_feasible(level, S, options);
  };

  double lo = -kInf;
  if (S.has_finite_box()) {
    lo = 0.0;
    for (Eigen::Index j = 0; j < c.size(); ++j) lo += std::min(c(j) * S.lo(j), c(j) * S.hi(j));
  } else {
    double step = std::max(1.0, std::abs(hi));
    for (int k = 0; k < 200 && !std::isfinite(lo); ++k) {
      const double L = hi - step;
      const auto res = probe(L);
      if (res.feasible()) {
        best = res.x;
        hi = std::min(L, c.dot(best));
      } else {
        lo = L;
      }
      step *= 2.0;
    }
    if (!std::isfinite(lo)) throw Error(ErrorCode::kUnbounded, "linear objective appears unbounded below");
  }

  while (hi - lo > tol * (1.0 + std::abs(hi))) {
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
  return {best, c.dot(best)};
}

}  // namespace qvp
