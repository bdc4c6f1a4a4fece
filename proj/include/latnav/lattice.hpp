#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "latnav/error.hpp"
#include "latnav/geometry.hpp"
#include "latnav/grid_map.hpp"

namespace latnav {

enum class PrimitiveKind { Forward, ArcLeft, ArcRight, RotateLeft, RotateRight };

inline const char* toString(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::Forward: return "forward";
    case PrimitiveKind::ArcLeft: return "arc_left";
    case PrimitiveKind::ArcRight: return "arc_right";
    case PrimitiveKind::RotateLeft: return "rotate_left";
    case PrimitiveKind::RotateRight: return "rotate_right";
  }
  return "?";
}

/// Constant-curvature piece of a unicycle trajectory. In-place rotations use
/// length 0 and a nonzero `turn`.
struct CurveSegment {
  double length = 0.0;     // meters
  double curvature = 0.0;  // 1/m, positive turns left
  double turn = 0.0;       // radians, used only when length == 0
};

/// Evaluates a segment chain from `start` at arc length s (or at rotation
/// fraction for pure turns).
inline Pose advance(Pose p, const CurveSegment& seg, double fraction) {
  if (seg.length == 0.0) {
    p.theta += seg.turn * fraction;
    return p;
  }
  const double s = seg.length * fraction;
  if (std::abs(seg.curvature) < 1e-12) {
    p.x += s * std::cos(p.theta);
    p.y += s * std::sin(p.theta);
  } else {
    const double k = seg.curvature;
    const double th1 = p.theta + k * s;
    p.x += (std::sin(th1) - std::sin(p.theta)) / k;
    p.y += (std::cos(p.theta) - std::cos(th1)) / k;
    p.theta = th1;
  }
  return p;
}

struct MotionPrimitive {
  int start_heading = 0;
  int dx = 0;  // end offset, cells
  int dy = 0;
  int end_heading = 0;
  PrimitiveKind kind = PrimitiveKind::Forward;
  double cost = 0.0;                  // meters-equivalent
  std::vector<CurveSegment> curve;    // analytic definition
  std::vector<Pose> sweep;            // relative to the start cell centre; theta unwrapped
  std::vector<Cell> swept_cells;      // distinct cell offsets touched by the sweep

  bool operator==(const MotionPrimitive& o) const {
    return start_heading == o.start_heading && dx == o.dx && dy == o.dy &&
           end_heading == o.end_heading && kind == o.kind && cost == o.cost && sweep == o.sweep;
  }
};

/// Samples a curve at (at most) the given arc-length spacing. Pure rotations
/// get `rotation_samples` intervals.
inline std::vector<Pose> sampleCurve(const std::vector<CurveSegment>& curve, double start_theta,
                                     double spacing, int rotation_samples = 4) {
  std::vector<Pose> out;
  Pose p{0.0, 0.0, start_theta};
  out.push_back(p);
  for (const auto& seg : curve) {
    const int n = seg.length == 0.0
                      ? rotation_samples
                      : std::max(1, static_cast<int>(std::ceil(seg.length / spacing - 1e-9)));
    for (int i = 1; i <= n; ++i) out.push_back(advance(p, seg, static_cast<double>(i) / n));
    p = advance(p, seg, 1.0);
  }
  return out;
}

struct PrimitiveSet {
  int heading_count = 8;
  double turn_radius = 1.0;
  double resolution = 1.0;
  std::vector<MotionPrimitive> primitives;
  std::vector<std::vector<int>> by_heading;  // primitive indices per start heading

  double headingAngle(int h) const { return kTwoPi * h / heading_count; }
  const std::vector<int>& forHeading(int h) const { return by_heading.at(h); }
  size_t maxPerHeading() const {
    size_t m = 0;
    for (const auto& v : by_heading) m = std::max(m, v.size());
    return m;
  }
  /// Longest straight-line hop between consecutive lattice nodes.
  double maxChord() const {
    double m = 0.0;
    for (const auto& p : primitives) m = std::max(m, std::hypot(p.dx, p.dy) * resolution);
    return m;
  }
};

namespace detail {

// Best two-arc left turn by `delta` reaching local (X, Y). Returns the
// max-min radius and fills the segments; radius <= 0 if infeasible.
inline double bestTwoArcTurn(double X, double Y, double delta, std::vector<CurveSegment>& segs) {
  double best = -1.0;
  constexpr int kSplits = 64;
  for (int k = 1; k < kSplits; ++k) {
    const double d1 = delta * k / kSplits;
    const double a11 = std::sin(d1), a12 = std::sin(delta) - std::sin(d1);
    const double a21 = 1.0 - std::cos(d1), a22 = std::cos(d1) - std::cos(delta);
    const double det = a11 * a22 - a12 * a21;
    if (std::abs(det) < 1e-14) continue;
    const double r1 = (X * a22 - a12 * Y) / det;
    const double r2 = (a11 * Y - a21 * X) / det;
    if (r1 <= 0.0 || r2 <= 0.0) continue;
    const double score = std::min(r1, r2);
    if (score > best + 1e-12) {
      best = score;
      segs = {CurveSegment{r1 * d1, 1.0 / r1, 0.0},
              CurveSegment{r2 * (delta - d1), 1.0 / r2, 0.0}};
    }
  }
  return best;
}

inline double curveLength(const std::vector<CurveSegment>& c) {
  double l = 0.0;
  for (const auto& s : c) l += s.length;
  return l;
}

inline std::vector<std::array<int, 2>> candidateOffsets() {
  std::vector<std::array<int, 2>> out;
  for (int dy = -3; dy <= 3; ++dy)
    for (int dx = -3; dx <= 3; ++dx)
      if (dx != 0 || dy != 0) out.push_back({dx, dy});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a[0] * a[0] + a[1] * a[1] < b[0] * b[0] + b[1] * b[1];
  });
  return out;
}

inline void finalizePrimitive(MotionPrimitive& p, double start_theta, double res) {
  p.sweep = sampleCurve(p.curve, start_theta, res / 10.0);
  // Snap the last sample to the exact lattice pose.
  p.sweep.back().x = p.dx * res;
  p.sweep.back().y = p.dy * res;
  for (const auto& s : p.sweep) {
    const Cell c{static_cast<int>(std::floor(0.5 + s.x / res)),
                 static_cast<int>(std::floor(0.5 + s.y / res))};
    if (std::find(p.swept_cells.begin(), p.swept_cells.end(), c) == p.swept_cells.end())
      p.swept_cells.push_back(c);
  }
}

}  // namespace detail

/// Builds the unicycle primitive set: per heading one forward move, arcs to
/// the two adjacent headings, and in-place rotations by one heading step.
inline PrimitiveSet buildPrimitives(int heading_count, double turn_radius, double resolution) {
  if (heading_count != 8 && heading_count != 16)
    throw Error(ErrorKind::InvalidParameter, "heading count must be 8 or 16");
  if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidParameter, "resolution must be positive");
  if (!(turn_radius >= resolution))
    throw Error(ErrorKind::InvalidParameter, "turn radius must be at least one cell");

  PrimitiveSet set;
  set.heading_count = heading_count;
  set.turn_radius = turn_radius;
  set.resolution = resolution;
  set.by_heading.resize(heading_count);
  const double step = kTwoPi / heading_count;
  const auto offsets = detail::candidateOffsets();

  for (int h = 0; h < heading_count; ++h) {
    const double alpha = step * h;

    // Forward: nearest lattice direction; S-curve when not exactly aligned.
    {
      bool found = false;
      std::vector<std::array<int, 2>> fwd(offsets);
      std::stable_sort(fwd.begin(), fwd.end(), [&](const auto& a, const auto& b) {
        const double da = std::round(1e9 * std::abs(angleDiff(alpha, std::atan2(a[1], a[0]))));
        const double db = std::round(1e9 * std::abs(angleDiff(alpha, std::atan2(b[1], b[0]))));
        return da < db;
      });
      for (const auto& off : fwd) {
        const double beta = std::atan2(off[1], off[0]);
        const double dev = angleDiff(alpha, beta);
        if (std::abs(dev) >= step / 2.0) break;
        const double chord = std::hypot(off[0], off[1]) * resolution;
        MotionPrimitive p;
        p.start_heading = h;
        p.end_heading = h;
        p.dx = off[0];
        p.dy = off[1];
        p.kind = PrimitiveKind::Forward;
        if (std::abs(dev) < 1e-9) {
          p.curve = {CurveSegment{chord, 0.0, 0.0}};
        } else {
          const double rho = chord / (4.0 * std::sin(std::abs(dev)));
          if (rho < turn_radius) continue;
          const double sgn = dev > 0 ? 1.0 : -1.0;
          const double arc = rho * 2.0 * std::abs(dev);
          p.curve = {CurveSegment{arc, sgn / rho, 0.0}, CurveSegment{arc, -sgn / rho, 0.0}};
        }
        p.cost = detail::curveLength(p.curve);
        detail::finalizePrimitive(p, alpha, resolution);
        set.by_heading[h].push_back(static_cast<int>(set.primitives.size()));
        set.primitives.push_back(std::move(p));
        found = true;
        break;
      }
      if (!found)
        throw Error(ErrorKind::InvalidParameter,
                    "turn radius too large for a forward primitive within 3 cells");
    }

    // Arcs to the adjacent headings.
    for (int side : {+1, -1}) {
      const double delta = step;
      MotionPrimitive best;
      double best_cost = std::numeric_limits<double>::infinity();
      for (const auto& off : offsets) {
        const Vec2 local = rotate(Vec2{off[0] * resolution, off[1] * resolution}, -alpha);
        const double X = local.x, Y = side * local.y;
        if (X <= 1e-9 || Y <= 1e-9) continue;
        std::vector<CurveSegment> segs;
        const double radius = detail::bestTwoArcTurn(X, Y, delta, segs);
        if (radius < turn_radius) continue;
        const double cost = detail::curveLength(segs);
        if (cost < best_cost - 1e-12) {
          best_cost = cost;
          best = MotionPrimitive{};
          best.start_heading = h;
          best.end_heading = (h + side + heading_count) % heading_count;
          best.dx = off[0];
          best.dy = off[1];
          best.kind = side > 0 ? PrimitiveKind::ArcLeft : PrimitiveKind::ArcRight;
          for (auto& s : segs) s.curvature *= side;
          best.curve = segs;
          best.cost = cost;
        }
      }
      if (!std::isfinite(best_cost))
        throw Error(ErrorKind::InvalidParameter,
                    "turn radius cannot reach the adjacent heading within 3 cells");
      detail::finalizePrimitive(best, alpha, resolution);
      set.by_heading[h].push_back(static_cast<int>(set.primitives.size()));
      set.primitives.push_back(std::move(best));
    }

    // In-place rotations.
    for (int side : {+1, -1}) {
      MotionPrimitive p;
      p.start_heading = h;
      p.end_heading = (h + side + heading_count) % heading_count;
      p.kind = side > 0 ? PrimitiveKind::RotateLeft : PrimitiveKind::RotateRight;
      p.curve = {CurveSegment{0.0, 0.0, side * step}};
      p.cost = 0.5 * resolution;
      detail::finalizePrimitive(p, alpha, resolution);
      set.by_heading[h].push_back(static_cast<int>(set.primitives.size()));
      set.primitives.push_back(std::move(p));
    }
  }
  return set;
}

/// Text form: a comment header, then one primitive per line:
///   start_heading dx dy end_heading cost kind n  x0 y0 th0 ... x(n-1) y(n-1) th(n-1)
inline std::string serializePrimitives(const PrimitiveSet& set) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "# latnav primitives headings=%d turn_radius=%.6f resolution=%.6f\n",
                set.heading_count, set.turn_radius, set.resolution);
  out += buf;
  for (const auto& p : set.primitives) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d %.9f %s %zu", p.start_heading, p.dx, p.dy,
                  p.end_heading, p.cost, toString(p.kind), p.sweep.size());
    out += buf;
    for (const auto& s : p.sweep) {
      std::snprintf(buf, sizeof buf, " %.6f %.6f %.6f", s.x, s.y, s.theta);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

struct LatticeNode {
  int x = 0;
  int y = 0;
  int heading = 0;

  Cell cell() const { return {x, y}; }
  bool operator==(const LatticeNode&) const = default;
  auto operator<=>(const LatticeNode&) const = default;
};

struct Successor {
  LatticeNode node;
  int primitive = -1;
  double cost = 0.0;
};

/// Exact check: every sweep sample, placed at `node`, keeps a disk of
/// `radius` clear of occupied cells and the map border.
inline bool placedSweepCollisionFree(const MotionPrimitive& prim, const LatticeNode& node,
                                     const GridMap& map, double radius) {
  const Vec2 origin = map.cellCenter(node.cell());
  for (const auto& s : prim.sweep)
    if (!map.diskFree(origin + Vec2{s.x, s.y}, radius)) return false;
  return true;
}

/// Reference successor generation straight from the map (no precomputation).
inline std::vector<Successor> successors(const LatticeNode& node, const GridMap& map,
                                         const PrimitiveSet& prims, double radius) {
  std::vector<Successor> out;
  for (int idx : prims.forHeading(node.heading)) {
    const auto& p = prims.primitives[idx];
    if (!placedSweepCollisionFree(p, node, map, radius)) continue;
    out.push_back({LatticeNode{node.x + p.dx, node.y + p.dy, p.end_heading}, idx, p.cost});
  }
  return out;
}

/// Cell mask used for temporary obstacles layered over the static lattice.
class CellMask {
 public:
  CellMask() = default;
  CellMask(int width, int height) : width_(width), bits_(static_cast<size_t>(width) * height, 0) {}

  bool empty() const { return count_ == 0; }
  bool test(Cell c) const {
    if (bits_.empty() || c.x < 0 || c.y < 0 || c.x >= width_) return false;
    const size_t i = static_cast<size_t>(c.y) * width_ + c.x;
    return i < bits_.size() && bits_[i] != 0;
  }
  void set(Cell c) {
    if (c.x < 0 || c.y < 0 || c.x >= width_) return;
    const size_t i = static_cast<size_t>(c.y) * width_ + c.x;
    if (i >= bits_.size() || bits_[i]) return;
    bits_[i] = 1;
    ++count_;
  }
  void merge(const CellMask& o) {
    for (size_t i = 0; i < o.bits_.size(); ++i)
      if (o.bits_[i]) set({static_cast<int>(i % o.width_), static_cast<int>(i / o.width_)});
  }
  /// Stable content key for caches.
  std::uint64_t key() const {
    std::uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) h = (h ^ i) * 1099511628211ull;
    return h;
  }
  bool operator==(const CellMask&) const = default;

 private:
  int width_ = 0;
  std::vector<std::uint8_t> bits_;
  size_t count_ = 0;
};

/// Precomputed lattice over a static map: node validity and per-node
/// primitive validity (configuration-space map for a disk of `radius`).
/// Immutable after construction.
class LatticeGraph {
 public:
  LatticeGraph(GridMap map, PrimitiveSet prims, double radius)
      : map_(std::move(map)), prims_(std::move(prims)), radius_(radius) {
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "agent radius must be positive");
    if (prims_.resolution != map_.resolution())
      throw Error(ErrorKind::InvalidParameter, "primitive resolution differs from map resolution");
    if (prims_.maxPerHeading() > 8)
      throw Error(ErrorKind::InvalidParameter, "at most 8 primitives per heading supported");
    build();
  }

  const GridMap& map() const { return map_; }
  const PrimitiveSet& primitives() const { return prims_; }
  double radius() const { return radius_; }
  int headingCount() const { return prims_.heading_count; }
  size_t nodeCount() const { return map_.cellCount() * prims_.heading_count; }

  size_t nodeId(const LatticeNode& n) const {
    return map_.index(n.cell()) * prims_.heading_count + n.heading;
  }
  LatticeNode nodeAt(size_t id) const {
    const Cell c = map_.cellAt(id / prims_.heading_count);
    return {c.x, c.y, static_cast<int>(id % prims_.heading_count)};
  }

  bool cellFree(Cell c) const { return map_.inBounds(c) && free_[map_.index(c)] != 0; }
  bool nodeValid(const LatticeNode& n) const {
    return n.heading >= 0 && n.heading < prims_.heading_count && cellFree(n.cell());
  }

  Pose pose(const LatticeNode& n) const {
    const Vec2 c = map_.cellCenter(n.cell());
    return {c.x, c.y, prims_.headingAngle(n.heading)};
  }

  /// Nearest lattice node to a pose (cell containing the point, nearest heading).
  LatticeNode nodeNear(const Pose& p) const {
    const Cell c = map_.cellOf(p.position());
    const int h = static_cast<int>(std::lround(wrapAngle(p.theta) / (kTwoPi / prims_.heading_count))) %
                  prims_.heading_count;
    return {c.x, c.y, h};
  }

  bool edgeValid(const LatticeNode& n, int slot) const {
    return (edges_[nodeId(n)] >> slot) & 1u;
  }

  /// Successors of a valid node, in primitive order, optionally excluding
  /// edges whose sweep touches a blocked cell.
  void successors(const LatticeNode& n, std::vector<Successor>& out,
                  const CellMask* blocked = nullptr) const {
    out.clear();
    if (!nodeValid(n)) return;
    const auto& list = prims_.forHeading(n.heading);
    const std::uint8_t bits = edges_[nodeId(n)];
    for (size_t slot = 0; slot < list.size(); ++slot) {
      if (!((bits >> slot) & 1u)) continue;
      const auto& p = prims_.primitives[list[slot]];
      if (blocked && !blocked->empty()) {
        bool hit = false;
        for (const auto& off : p.swept_cells)
          if (blocked->test({n.x + off.x, n.y + off.y})) {
            hit = true;
            break;
          }
        if (hit) continue;
      }
      out.push_back({LatticeNode{n.x + p.dx, n.y + p.dy, p.end_heading}, list[slot], p.cost});
    }
  }

  std::vector<Successor> successors(const LatticeNode& n, const CellMask* blocked = nullptr) const {
    std::vector<Successor> out;
    successors(n, out, blocked);
    return out;
  }

 private:
  void build() {
    const int W = map_.width(), H = map_.height();
    const double res = map_.resolution();
    free_.assign(map_.cellCount(), 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x)
        free_[map_.index({x, y})] = map_.diskFree(map_.cellCenter({x, y}), radius_) ? 1 : 0;

    // Prefix sums over occupancy (padded by one ring of "outside" cells) so
    // far-from-obstacle cells can skip the exact sweep test.
    const int PW = W + 2, PH = H + 2;
    std::vector<int> pre(static_cast<size_t>(PW + 1) * (PH + 1), 0);
    auto occ = [&](int px, int py) {
      const Cell c{px - 1, py - 1};
      return map_.occupied(c) ? 1 : 0;
    };
    for (int py = 0; py < PH; ++py)
      for (int px = 0; px < PW; ++px)
        pre[(py + 1) * (PW + 1) + px + 1] = occ(px, py) + pre[py * (PW + 1) + px + 1] +
                                            pre[(py + 1) * (PW + 1) + px] - pre[py * (PW + 1) + px];
    auto rectSum = [&](int x0, int y0, int x1, int y1) {  // inclusive, map coords
      x0 = std::max(x0 + 1, 0);
      y0 = std::max(y0 + 1, 0);
      x1 = std::min(x1 + 1, PW - 1);
      y1 = std::min(y1 + 1, PH - 1);
      if (x0 > x1 || y0 > y1) return 0;
      return pre[(y1 + 1) * (PW + 1) + x1 + 1] - pre[y0 * (PW + 1) + x1 + 1] -
             pre[(y1 + 1) * (PW + 1) + x0] + pre[y0 * (PW + 1) + x0];
    };
    double extent = 0.0;
    for (const auto& p : prims_.primitives)
      for (const auto& s : p.sweep) extent = std::max({extent, std::abs(s.x), std::abs(s.y)});
    const int K = static_cast<int>(std::ceil((extent + radius_) / res)) + 1;

    const int HC = prims_.heading_count;
    edges_.assign(nodeCount(), 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        if (!free_[map_.index({x, y})]) continue;
        const bool clear = rectSum(x - K, y - K, x + K, y + K) == 0;
        for (int h = 0; h < HC; ++h) {
          const LatticeNode n{x, y, h};
          const auto& list = prims_.forHeading(h);
          std::uint8_t bits = 0;
          for (size_t slot = 0; slot < list.size(); ++slot) {
            const auto& p = prims_.primitives[list[slot]];
            if (clear || placedSweepCollisionFree(p, n, map_, radius_)) bits |= (1u << slot);
          }
          edges_[nodeId(n)] = bits;
        }
      }
  }

  GridMap map_;
  PrimitiveSet prims_;
  double radius_;
  std::vector<std::uint8_t> free_;
  std::vector<std::uint8_t> edges_;
};

}  // namespace latnav
