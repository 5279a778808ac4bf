#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qvp/driver.hpp"
#include "qvp/problem_io.hpp"
#include "qvp/sampling.hpp"

namespace qvp::test {

inline std::string problem_path(const std::string& name) { return std::string(QVP_PROBLEM_DIR) + "/" + name; }

inline QvpProblem load(const std::string& name) { return load_problem(problem_path(name)); }

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const double x : values) v(i++) = x;
  return v;
}

inline FeasibleSet box_set(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  FeasibleSet S;
  S.A.resize(0, lo.size());
  S.r.resize(0);
  S.lo = lo;
  S.hi = hi;
  return S;
}

/// f(x) = x over [0,1]^2.
inline QvpProblem identity_square() {
  QvpProblem problem;
  problem.n = 2;
  problem.objectives.push_back(ConvexQuadratic{QuadraticForm::affine(vec({1, 0}), 0.0)});
  problem.objectives.push_back(ConvexQuadratic{QuadraticForm::affine(vec({0, 1}), 0.0)});
  problem.feasible_set = box_set(vec({0, 0}), vec({1, 1}));
  finalize_problem(problem);
  return problem;
}

/// Vertices of a 2-D polytope {A x <= r} by intersecting constraint pairs.
inline std::vector<Eigen::Vector2d> polygon_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& r) {
  std::vector<Eigen::Vector2d> out;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.rows(); ++j) {
      Eigen::Matrix2d B;
      B << A.row(i), A.row(j);
      if (std::abs(B.determinant()) < 1e-12) continue;
      const Eigen::Vector2d x = B.inverse() * (Eigen::Vector2d(r(i), r(j)));
      if (((A * x - r).array() <= 1e-9).all()) out.push_back(x);
    }
  }
  return out;
}

/// Points of the problem's box grid (per_axis points per coordinate) lying in S.
inline std::vector<DecisionPoint> feasible_grid(const QvpProblem& problem, int per_axis) {
  const auto& S = problem.feasible_set;
  const auto n = S.lo.size();
  std::vector<DecisionPoint> out;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  DecisionPoint x(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) {
      x(i) = S.lo(i) + (S.hi(i) - S.lo(i)) * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
    }
    if (evaluate_constraints(S, x) <= 1e-12) out.push_back(x);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

/// Points not strictly dominated in every coordinate by another point
/// (the weakly nondominated subset). O(N log N) for p = 2, quadratic otherwise.
inline std::vector<OutcomePoint> weakly_nondominated(std::vector<OutcomePoint> ys) {
  std::vector<OutcomePoint> out;
  if (ys.empty()) return out;
  if (ys.front().size() == 2) {
    std::sort(ys.begin(), ys.end(), [](const auto& a, const auto& b) { return a(0) < b(0); });
    // y is strictly dominated iff some point with smaller y_0 has smaller y_1.
    double best = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < ys.size()) {
      std::size_t j = i;
      double group_min = std::numeric_limits<double>::infinity();
      while (j < ys.size() && ys[j](0) == ys[i](0)) group_min = std::min(group_min, ys[j++](1));
      for (std::size_t k = i; k < j; ++k) {
        if (!(best < ys[k](1))) out.push_back(ys[k]);
      }
      best = std::min(best, group_min);
      i = j;
    }
    return out;
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < ys.size() && !dominated; ++j) {
      dominated = j != i && (ys[j].array() < ys[i].array()).all();
    }
    if (!dominated) out.push_back(ys[i]);
  }
  return out;
}

/// Smallest s with y + s d in the conormal hull of points (s may be negative).
inline double distance_along(const OutcomePoint& y, const std::vector<OutcomePoint>& points, const Eigen::VectorXd& d) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : points) best = std::min(best, ((q - y).array() / d.array()).maxCoeff());
  return best;
}

/// Full O(N^2) minimality filter: keeps points not weakly above another one;
/// among equal points the later survives.
inline std::vector<OutcomePoint> minimal_points(const std::vector<OutcomePoint>& pts, double tol) {
  std::vector<OutcomePoint> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool improper = false;
    for (std::size_t j = 0; j < pts.size() && !improper; ++j) {
      if (i == j || !weakly_below(pts[j], pts[i], tol)) continue;
      const bool equal = weakly_below(pts[i], pts[j], tol);
      improper = !equal || j > i;
    }
    if (!improper) out.push_back(pts[i]);
  }
  return out;
}

inline bool same_sets(std::vector<OutcomePoint> a, std::vector<OutcomePoint> b) {
  auto less = [](const OutcomePoint& x, const OutcomePoint& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  return a == b;
}

inline OutcomePoint clip(const OutcomePoint& y, const OutcomePoint& M) { return y.cwiseMin(M); }

/// Random strictly quasiconvex instance on [0,1]^n with one random cut
/// through the box; all denominators stay positive on the nonnegative
/// orthant up to sum(x) <= n, so the simplex bound is always available.
inline QvpProblem random_problem(std::mt19937_64& rng, int n, int p) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto rvec = [&](double lo, double hi) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = lo + (hi - lo) * unit(rng);
    return v;
  };
  auto psd = [&](double scale) {
    Eigen::MatrixXd B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B(i, j) = normal(rng);
    return Eigen::MatrixXd(scale * B.transpose() * B / n);
  };

  QvpProblem problem;
  problem.n = n;
  for (int j = 0; j < p; ++j) {
    switch (j % 3) {
      case 0: {
        QuadraticForm form{psd(1.0), rvec(-2.0, 2.0), 0.0};
        problem.objectives.push_back(ConvexQuadratic{form});
        break;
      }
      case 1: {
        auto num = QuadraticForm::affine(rvec(-1.0, 1.0), unit(rng));
        auto den = QuadraticForm::affine(rvec(0.0, 1.0), 0.5 + unit(rng));
        problem.objectives.push_back(LinearFractional{num, den});
        break;
      }
      default: {
        QuadraticForm num{psd(1.0), rvec(0.0, 1.0), 0.1 + unit(rng)};
        const Eigen::MatrixXd P = psd(0.5);
        const Eigen::VectorXd c = rvec(-1.0, 1.0);
        const double bound = P.eigenvalues().real().maxCoeff() * n * n + c.cwiseAbs().sum() * n;
        QuadraticForm den{Eigen::MatrixXd(-P), c, bound + 0.5 + unit(rng)};
        problem.objectives.push_back(ConvexOverConcave{num, den});
        break;
      }
    }
  }
  FeasibleSet S = box_set(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
  const Eigen::VectorXd a = rvec(-1.0, 1.0);
  const Eigen::VectorXd x0 = rvec(0.0, 1.0);
  S.A = a.transpose();
  S.r = Eigen::VectorXd::Constant(1, a.dot(x0) + 0.2);
  problem.feasible_set = S;
  finalize_problem(problem);
  return problem;
}

}  // namespace qvp::test
