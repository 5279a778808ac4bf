/**
 * @file driver.hpp
 * @brief Outer approximation loop: select a vertex, scalarize, then either
 *        accept it as epsilon-close to the front or cut it away.
 *
 * On termination every vertex of the copolyblock is within epsilon of its
 * boundary point, so the copolyblock U = N(V_eps) encloses the truncated
 * outcome set with Hausdorff gap at most epsilon, while the conormal hull
 * L = N(Y_WN) of the computed weakly nondominated outcomes lies inside it.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "qvp/bounds.hpp"
#include "qvp/copolyblock.hpp"
#include "qvp/scalarize.hpp"

namespace qvp {

enum class Selection { kFifo, kMaxGap };

struct SolveOptions {
  double epsilon = 0.1;
  Selection selection = Selection::kFifo;
  int workers = 1;
  std::uint64_t max_scalarizations = 10'000'000;
  /// Overrides the problem file's direction; all-ones when neither is given.
  std::optional<Eigen::VectorXd> direction;
  BoundsOptions bounds;
};

/// A computed weakly nondominated outcome with its decision-space witness.
struct FrontPoint {
  OutcomePoint w;  ///< boundary point v + t d
  OutcomePoint f;  ///< f(x), with f(x) <= w
  DecisionPoint x;
};

enum class Action { kAccepted, kCut };

struct IterationRecord {
  std::uint64_t k = 0;
  OutcomePoint v;
  double t = 0.0;
  OutcomePoint w;
  Action action = Action::kAccepted;
};

struct SolveResult {
  std::vector<OutcomePoint> V_eps;
  std::vector<FrontPoint> Y_WN;
  double final_gap = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t scalarizations = 0;
  double wall_time_s = 0.0;
  OutcomeBox box;
  Eigen::VectorXd direction;
  double epsilon = 0.0;
  std::vector<IterationRecord> log;
  /// Set when the ideal point is an outcome and the front is {m}.
  bool ideal_attained = false;

  /// The outer copolyblock U = N(V_eps).
  VertexSet outer() const;
};

struct GapReport {
  double current_gap = 0.0;
  std::uint64_t scalarizations = 0;
  std::size_t vertices = 0;
  std::size_t classified = 0;
};

/// Stepwise form of the solver, exposing the intermediate copolyblocks.
class OuterApproximation {
 public:
  OuterApproximation(const QvpProblem& problem, OutcomeBox box, Direction d, SolveOptions options);

  bool done() const { return pending_.empty(); }

  /// One iteration: picks a vertex per the selection rule and processes it.
  void step();

  /// Scalarizes every unclassified vertex (concurrently when workers > 1)
  /// and applies the results in selection order.
  void round();

  /// Runs to termination using rounds when workers > 1, steps otherwise.
  void run();

  GapReport gap_report() const;

  const VertexSet& vertices() const { return V_; }
  const std::set<VertexId>& classified() const { return classified_; }
  const std::vector<FrontPoint>& front() const { return front_; }
  const std::vector<IterationRecord>& log() const { return log_; }
  const OutcomeBox& box() const { return box_; }
  const Direction& direction() const { return d_; }

  /// Snapshot of the current state; final once done().
  SolveResult result() const;

 private:
  ScalarizationResult scalarize(VertexId id) const;
  void ensure_scalarized(const std::vector<VertexId>& ids);
  std::vector<VertexId> selection_order();
  void apply(VertexId id, const ScalarizationResult& res);
  void begin_round();

  const QvpProblem& problem_;
  OutcomeBox box_;
  Direction d_;
  SolveOptions options_;
  VertexSet V_;
  std::set<VertexId> pending_;
  std::set<VertexId> classified_;
  std::map<VertexId, ScalarizationResult> cache_;
  std::map<VertexId, OutcomePoint> w_of_;
  std::vector<FrontPoint> front_;
  std::vector<IterationRecord> log_;
  std::uint64_t iterations_ = 0;
  std::uint64_t scalarizations_ = 0;
  VertexId round_end_ = 0;
  double round_gap_ = 0.0;
};

/// Direction used for a solve: options, then the problem file, then ones.
Direction resolve_direction(const QvpProblem& problem, const SolveOptions& options);

/// Box construction plus the full loop. A degenerate ideal point yields a
/// result with V_eps = Y_WN = {m} and ideal_attained set.
SolveResult solve(const QvpProblem& problem, const SolveOptions& options);

enum class EsMembership { kInES, kNotInES, kUnknown };

/// Sufficient test for membership of x in the approximate weakly efficient
/// solution set ES = union over y in U_eps with y in f(S)+R^p_+ (y <= M) of
/// {x in S : f(x) <= y}. Candidates y are f(x) itself and the stored front
/// points lying above f(x).
EsMembership es_membership(const SolveResult& result, const QvpProblem& problem, const DecisionPoint& x,
                           double tol_feas = 1e-7);

std::string_view to_string(EsMembership membership);
std::string_view to_string(Action action);

}  // namespace qvp
