#include "qvp/driver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

namespace qvp {

VertexSet SolveResult::outer() const { return VertexSet::from_points(box.m, box.M, V_eps); }

std::string_view to_string(EsMembership membership) {
  switch (membership) {
    case EsMembership::kInES: return "in";
    case EsMembership::kNotInES: return "not-in";
    case EsMembership::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Action action) { return action == Action::kAccepted ? "accepted" : "cut"; }

OuterApproximation::OuterApproximation(const QvpProblem& problem, OutcomeBox box, Direction d, SolveOptions options)
    : problem_(problem),
      box_(std::move(box)),
      d_(std::move(d)),
      options_(std::move(options)),
      V_(box_.m, box_.M) {
  if (!(options_.epsilon > 0.0)) throw Error(ErrorCode::kValidation, "epsilon must be positive");
  if (options_.workers < 1) throw Error(ErrorCode::kValidation, "workers must be at least 1");
  if (d_.size() != problem_.p()) throw Error(ErrorCode::kDimensionMismatch, "direction has wrong dimension");
  for (const auto& [id, v] : V_.vertices()) pending_.insert(id);
  round_end_ = V_.next_id();
}

ScalarizationResult OuterApproximation::scalarize(VertexId id) const {
  return solve_chebyshev(problem_, V_.at(id), d_, box_.m, options_.bounds.scalarize);
}

void OuterApproximation::ensure_scalarized(const std::vector<VertexId>& ids) {
  std::vector<VertexId> missing;
  for (const VertexId id : ids) {
    if (!cache_.contains(id)) missing.push_back(id);
  }
  if (missing.empty()) return;
  if (scalarizations_ + missing.size() > options_.max_scalarizations) {
    throw Error(ErrorCode::kIterationCapExceeded,
                fmt::format("more than {} scalarizations required", options_.max_scalarizations));
  }

  std::vector<std::optional<ScalarizationResult>> results(missing.size());
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options_.workers), missing.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < missing.size(); ++i) results[i] = scalarize(missing[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < missing.size(); i = next++) results[i] = scalarize(missing[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  scalarizations_ += missing.size();
  for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], std::move(*results[i]));
}

std::vector<VertexId> OuterApproximation::selection_order() {
  std::vector<VertexId> order(pending_.begin(), pending_.end());
  if (options_.selection == Selection::kMaxGap) {
    ensure_scalarized(order);
    std::stable_sort(order.begin(), order.end(), [this](VertexId a, VertexId b) {
      return (cache_.at(a).w - V_.at(a)).norm() > (cache_.at(b).w - V_.at(b)).norm();
    });
  }
  return order;
}

void OuterApproximation::begin_round() {
  round_end_ = V_.next_id();
  round_gap_ = 0.0;
}

void OuterApproximation::step() {
  if (done()) return;
  VertexId id = *pending_.begin();
  if (options_.selection == Selection::kMaxGap) {
    id = selection_order().front();
  } else {
    ensure_scalarized({id});
  }
  if (id >= round_end_) begin_round();
  const ScalarizationResult res = cache_.at(id);
  apply(id, res);
}

void OuterApproximation::round() {
  if (done()) return;
  begin_round();
  const auto order = selection_order();
  ensure_scalarized(order);
  for (const VertexId id : order) {
    if (!V_.has(id) || !pending_.contains(id)) continue;  // cut away earlier in this round
    const ScalarizationResult res = cache_.at(id);
    apply(id, res);
  }
}

void OuterApproximation::run() {
  while (!done()) {
    if (options_.workers > 1) {
      round();
    } else {
      step();
    }
  }
}

void OuterApproximation::apply(VertexId id, const ScalarizationResult& res) {
  const OutcomePoint v = V_.at(id);
  const double gap_v = (res.w - v).norm();
  cache_.erase(id);

  IterationRecord rec{iterations_++, v, res.t, res.w, Action::kAccepted};
  const OutcomePoint fx = evaluate_all(problem_, res.x);
  const double tol = V_.tolerance();
  const bool duplicate = std::any_of(front_.begin(), front_.end(), [&](const FrontPoint& q) {
    return ((q.f - fx).cwiseAbs().array() <= tol).all();
  });
  if (!duplicate) front_.push_back({res.w, fx, res.x});
  round_gap_ = std::max(round_gap_, gap_v);

  pending_.erase(id);
  if (gap_v <= options_.epsilon) {
    classified_.insert(id);
    w_of_[id] = res.w;
  } else {
    rec.action = Action::kCut;
    const auto kept = V_.cut(id, res.w);
    if (V_.has(id)) throw Error(ErrorCode::kValidation, "cut made no progress at a vertex above tolerance");
    pending_.insert(kept.begin(), kept.end());
  }
  spdlog::debug("k={} v=[{}] t={:.6f} gap={:.6f} {} |V|={} |V_eps|={}", rec.k,
                fmt::join(v.data(), v.data() + v.size(), ", "), res.t, gap_v, to_string(rec.action), V_.size(),
                classified_.size());
  log_.push_back(std::move(rec));
}

GapReport OuterApproximation::gap_report() const {
  return {round_gap_, scalarizations_, V_.size(), classified_.size()};
}

SolveResult OuterApproximation::result() const {
  SolveResult out;
  for (const VertexId id : classified_) out.V_eps.push_back(V_.at(id));
  out.Y_WN = front_;
  out.final_gap = 0.0;
  for (const VertexId id : classified_) out.final_gap = std::max(out.final_gap, (w_of_.at(id) - V_.at(id)).norm());
  out.iterations = iterations_;
  out.scalarizations = scalarizations_;
  out.box = box_;
  out.direction = d_.vector();
  out.epsilon = options_.epsilon;
  out.log = log_;
  return out;
}

Direction resolve_direction(const QvpProblem& problem, const SolveOptions& options) {
  if (options.direction) {
    if (options.direction->size() != problem.p()) {
      throw Error(ErrorCode::kDimensionMismatch, "direction must have one entry per objective");
    }
    return Direction(*options.direction);
  }
  if (problem.direction) return Direction(*problem.direction);
  return Direction::ones(problem.p());
}

SolveResult solve(const QvpProblem& problem, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Direction d = resolve_direction(problem, options);
  SolveResult out;
  try {
    const OutcomeBox box = make_box(problem, d, options.bounds);
    spdlog::info("box m=[{}] M=[{}]", fmt::join(box.m.data(), box.m.data() + box.m.size(), ", "),
                 fmt::join(box.M.data(), box.M.data() + box.M.size(), ", "));
    OuterApproximation solver(problem, box, d, options);
    solver.run();
    out = solver.result();
  } catch (const DegenerateIdealAttained& degenerate) {
    out.box = degenerate.box();
    out.direction = d.vector();
    out.epsilon = options.epsilon;
    out.V_eps = {out.box.m};
    out.Y_WN = {{out.box.m, evaluate_all(problem, degenerate.witness()), degenerate.witness()}};
    out.iterations = 1;
    out.scalarizations = 1;
    out.ideal_attained = true;
  }
  out.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

EsMembership es_membership(const SolveResult& result, const QvpProblem& problem, const DecisionPoint& x,
                           double tol_feas) {
  if (x.size() != problem.n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("point has {} entries, problem has n = {}", x.size(), problem.n));
  }
  if (evaluate_constraints(problem.feasible_set, x) > tol_feas) return EsMembership::kNotInES;
  const OutcomePoint fx = evaluate_all(problem, x);
  const VertexSet outer = result.outer();
  const double tol = outer.tolerance();
  const OutcomePoint& M = result.box.M;

  auto qualifies = [&](const OutcomePoint& y) {
    if (!weakly_below(fx, y, tol) || !weakly_below(y, M, tol)) return false;
    if (!outer.contains(y)) return false;
    const Eigen::ArrayXd shifted = y.array() - result.epsilon - tol;
    return std::none_of(result.V_eps.begin(), result.V_eps.end(),
                        [&](const OutcomePoint& u) { return (u.array() < shifted).all(); });
  };

  if (qualifies(fx)) return EsMembership::kInES;
  for (const auto& q : result.Y_WN) {
    if (qualifies(q.f) || qualifies(q.w)) return EsMembership::kInES;
  }
  return EsMembership::kUnknown;
}

}  // namespace qvp
