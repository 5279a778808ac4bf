#include "qvp/sampling.hpp"

#include <random>

namespace qvp {

std::vector<DecisionPoint> sample_feasible(const FeasibleSet& S, std::size_t count, std::uint64_t seed,
                                           std::size_t max_draws, double tol_feas) {
  std::vector<DecisionPoint> out;
  if (!S.has_finite_box()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DecisionPoint x(S.lo.size());
  for (std::size_t draw = 0; draw < max_draws && out.size() < count; ++draw) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = S.lo(i) + unit(rng) * (S.hi(i) - S.lo(i));
    if (evaluate_constraints(S, x) <= tol_feas) out.push_back(x);
  }
  return out;
}

}  // namespace qvp
