#include "qvp/copolyblock.hpp"

#include <fmt/format.h>

namespace qvp {

double geometric_tolerance(const OutcomePoint& m, const OutcomePoint& M) {
  return 1e-9 * std::max(1.0, (M - m).cwiseAbs().maxCoeff());
}

bool weakly_below(const OutcomePoint& a, const OutcomePoint& b, double tol) {
  return ((a - b).array() <= tol).all();
}

VertexSet::VertexSet(OutcomePoint m, OutcomePoint M) : VertexSet(std::move(m), std::move(M), true) {}

VertexSet::VertexSet(OutcomePoint m, OutcomePoint M, bool seed_with_lower)
    : m_(std::move(m)), M_(std::move(M)), tol_(geometric_tolerance(m_, M_)) {
  if (m_.size() != M_.size()) throw Error(ErrorCode::kDimensionMismatch, "box corners differ in dimension");
  if (!weakly_below(m_, M_, 0.0)) throw Error(ErrorCode::kInvalidBox, "box lower corner exceeds upper corner");
  if (seed_with_lower) insert(m_);
}

VertexSet VertexSet::from_points(OutcomePoint m, OutcomePoint M, std::span<const OutcomePoint> points) {
  VertexSet set(std::move(m), std::move(M), false);
  for (const auto& z : points) set.insert(z);
  return set;
}

VertexId VertexSet::insert(const OutcomePoint& z) {
  if (z.size() != m_.size()) throw Error(ErrorCode::kDimensionMismatch, "vertex has wrong dimension");
  const VertexId id = next_id_++;
  vertices_.emplace(id, z);
  return id;
}

const OutcomePoint& VertexSet::at(VertexId id) const {
  const auto it = vertices_.find(id);
  if (it == vertices_.end()) throw Error(ErrorCode::kVertexNotInSet, fmt::format("no vertex with id {}", id));
  return it->second;
}

std::optional<VertexId> VertexSet::find(const OutcomePoint& y) const {
  for (const auto& [id, v] : vertices_) {
    if (v.size() == y.size() && ((v - y).cwiseAbs().array() <= tol_).all()) return id;
  }
  return std::nullopt;
}

std::vector<OutcomePoint> VertexSet::points() const {
  std::vector<OutcomePoint> out;
  out.reserve(vertices_.size());
  for (const auto& [id, v] : vertices_) out.push_back(v);
  return out;
}

bool VertexSet::contains(const OutcomePoint& y) const {
  if (y.size() != M_.size()) throw Error(ErrorCode::kDimensionMismatch, "point has wrong dimension");
  if (!weakly_below(y, M_, tol_)) return false;
  for (const auto& [id, v] : vertices_) {
    if (weakly_below(v, y, tol_)) return true;
  }
  return false;
}

std::vector<VertexId> VertexSet::cut(VertexId id, const OutcomePoint& w) {
  const OutcomePoint v = at(id);
  if (w.size() != v.size()) throw Error(ErrorCode::kDimensionMismatch, "cut point has wrong dimension");
  if (!weakly_below(v, w, tol_)) {
    throw Error(ErrorCode::kWNotAbove, "cut point must lie componentwise above the vertex");
  }
  const OutcomePoint clamped = w.cwiseMin(M_);
  if (((clamped - v).array() <= tol_).all()) return {};  // zero displacement: nothing to cut

  vertices_.erase(id);
  std::vector<VertexId> inserted;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    OutcomePoint z = v;
    z(i) = clamped(i);
    if (z(i) >= M_(i) - tol_) continue;  // [z, M] would be flat
    inserted.push_back(insert(z));
  }
  return remove_improper(inserted);
}

std::vector<VertexId> VertexSet::remove_improper(std::span<const VertexId> candidates) {
  std::vector<VertexId> kept;
  for (const VertexId cid : candidates) {
    const auto it = vertices_.find(cid);
    if (it == vertices_.end()) continue;
    const OutcomePoint& z = it->second;
    bool dominated = false;
    for (const auto& [uid, u] : vertices_) {
      if (uid != cid && weakly_below(u, z, tol_)) {
        dominated = true;
        break;
      }
    }
    if (dominated) {
      vertices_.erase(it);
    } else {
      kept.push_back(cid);
    }
  }
  return kept;
}

double gap(const VertexSet& V, const std::map<VertexId, OutcomePoint>& w_of) {
  double worst = 0.0;
  for (const auto& [id, v] : V.vertices()) {
    const auto it = w_of.find(id);
    if (it != w_of.end()) worst = std::max(worst, (it->second - v).norm());
  }
  return worst;
}

}  // namespace qvp
