#pragma once

#include <span>
#include <vector>

#include "latnav/geometry.hpp"

namespace latnav {

/// {p : normal . p <= offset}
struct HalfPlane {
  Vec2 normal;  // unit, points from the owner towards the neighbour
  double offset = 0.0;

  bool contains(Vec2 p, double tol = 0.0) const { return dot(normal, p) <= offset + tol; }
};

/// Buffered Voronoi cell: the owner's Voronoi region pulled back from every
/// bisector by the owner's radius.
struct BufferedVoronoiCell {
  Vec2 owner;
  double radius = 0.0;
  std::vector<HalfPlane> constraints;  // one per neighbour, in input order
};

/// Cell of an agent at `owner` with buffer `radius`. Each constraint is
///   (p - (p_i + p_j)/2) . (p_j - p_i) + R ||p_j - p_i|| <= 0
/// which is equivalent to ||p - p_j||^2 - ||p - p_i||^2 >= 2 R ||p_i - p_j||.
/// A neighbour sitting exactly on the owner yields a vacuous constraint.
inline BufferedVoronoiCell computeBvc(Vec2 owner, double radius, std::span<const Vec2> neighbors) {
  BufferedVoronoiCell cell;
  cell.owner = owner;
  cell.radius = radius;
  cell.constraints.reserve(neighbors.size());
  for (const Vec2& pj : neighbors) {
    const Vec2 d = pj - owner;
    const double len = d.norm();
    if (len == 0.0) {
      cell.constraints.push_back({Vec2{0.0, 0.0}, 0.0});
      continue;
    }
    const Vec2 n = d / len;
    const Vec2 mid = (owner + pj) * 0.5;
    cell.constraints.push_back({n, dot(n, mid) - radius});
  }
  return cell;
}

/// Boundary-inclusive membership.
inline bool contains(const BufferedVoronoiCell& cell, Vec2 p) {
  for (const auto& h : cell.constraints)
    if (!h.contains(p)) return false;
  return true;
}

/// Straight segment a->b lies in the cell; endpoints suffice by convexity.
inline bool segmentInside(const BufferedVoronoiCell& cell, Vec2 a, Vec2 b) {
  return contains(cell, a) && contains(cell, b);
}

/// Cell clipped to an axis-aligned box, as a counter-clockwise polygon
/// (empty if the cell misses the box).
inline std::vector<Vec2> cellPolygon(const BufferedVoronoiCell& cell, Vec2 lo, Vec2 hi) {
  std::vector<Vec2> poly{{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
  for (const auto& h : cell.constraints) {
    if (h.normal == Vec2{0.0, 0.0}) continue;
    std::vector<Vec2> next;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      const Vec2 a = poly[i], b = poly[(i + 1) % n];
      const double da = dot(h.normal, a) - h.offset;
      const double db = dot(h.normal, b) - h.offset;
      if (da <= 0.0) next.push_back(a);
      if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
        const double t = da / (da - db);
        next.push_back(a + (b - a) * t);
      }
    }
    poly = std::move(next);
    if (poly.empty()) break;
  }
  return poly;
}

}  // namespace latnav
