/**
 * @file copolyblock.hpp
 * @brief Outer approximation of f(S) + R^p_+ (truncated to the box) as a
 *        copolyblock, stored by its proper vertices.
 *
 * The copolyblock with vertex set V is P = union_{v in V} [v, M]. A cut at
 * vertex v with boundary point w > v removes the open cone w - int R^p_+
 * from P. The cone contains v, so v is replaced by the p points
 *
 *     z^i = v + (min(w_i, M_i) - v_i) e^i,
 *
 * and any z^i that is dominated by another vertex is dropped. Vertices that
 * were proper before the cut stay proper: if z^i <= u for an old vertex u,
 * then v <= z^i <= u, contradicting the properness of u. So only the new
 * candidates need checking.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qvp/model.hpp"

namespace qvp {

using VertexId = std::uint64_t;

/// Scale-aware comparison tolerance for a box: 1e-9 * max(1, |M - m|_inf).
double geometric_tolerance(const OutcomePoint& m, const OutcomePoint& M);

/// a <= b componentwise within tol.
bool weakly_below(const OutcomePoint& a, const OutcomePoint& b, double tol);

class VertexSet {
 public:
  /// The initial copolyblock [m, M], i.e. V = {m}.
  VertexSet(OutcomePoint m, OutcomePoint M);

  /// Vertex set from explicit points in [m, M]; points are inserted in order
  /// and not filtered.
  static VertexSet from_points(OutcomePoint m, OutcomePoint M, std::span<const OutcomePoint> points);

  /// True iff some vertex v satisfies v <= y <= M (within tolerance).
  bool contains(const OutcomePoint& y) const;

  /// Replaces vertex `id` using the boundary point w and drops improper new
  /// vertices. Returns the ids of the vertices that survived insertion, in
  /// insertion order. Throws kVertexNotInSet, kWNotAbove.
  std::vector<VertexId> cut(VertexId id, const OutcomePoint& w);

  /// Removes every candidate dominated (<=) by another vertex. Candidates are
  /// examined in order, so of two equal candidates the later one survives.
  /// Returns the surviving candidates.
  std::vector<VertexId> remove_improper(std::span<const VertexId> candidates);

  /// Inserts a point without any filtering and returns its id.
  VertexId insert(const OutcomePoint& z);

  bool has(VertexId id) const { return vertices_.contains(id); }
  const OutcomePoint& at(VertexId id) const;
  std::optional<VertexId> find(const OutcomePoint& y) const;

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  /// Vertices keyed by insertion sequence number.
  const std::map<VertexId, OutcomePoint>& vertices() const { return vertices_; }
  std::vector<OutcomePoint> points() const;

  const OutcomePoint& lower() const { return m_; }
  const OutcomePoint& upper() const { return M_; }
  double tolerance() const { return tol_; }
  VertexId next_id() const { return next_id_; }

 private:
  VertexSet(OutcomePoint m, OutcomePoint M, bool seed_with_lower);

  OutcomePoint m_;
  OutcomePoint M_;
  double tol_;
  std::map<VertexId, OutcomePoint> vertices_;
  VertexId next_id_ = 0;
};

/// max over ids present in both V and w_of of |w - v|_2; 0 if none.
double gap(const VertexSet& V, const std::map<VertexId, OutcomePoint>& w_of);

}  // namespace qvp
