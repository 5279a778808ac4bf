#pragma once

#include <cstdint>
#include <vector>

#include "qvp/model.hpp"

namespace qvp {

/// Uniform rejection sampling of S inside its finite bounds. Returns at most
/// `count` points after at most `max_draws` draws; empty when S has no
/// finite box.
std::vector<DecisionPoint> sample_feasible(const FeasibleSet& S, std::size_t count, std::uint64_t seed,
                                           std::size_t max_draws, double tol_feas = 1e-9);

}  // namespace qvp
