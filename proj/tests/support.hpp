#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "latnav/latnav.hpp"

namespace latnav::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random obstacle field: scattered rectangles, border left open.
inline GridMap randomMap(Rng& rng, int w, int h, double res, int blocks) {
  GridMap m(w, h, res);
  for (int b = 0; b < blocks; ++b) {
    const int bw = uniformInt(rng, 1, std::max(1, w / 5));
    const int bh = uniformInt(rng, 1, std::max(1, h / 5));
    const int x0 = uniformInt(rng, 0, w - bw);
    const int y0 = uniformInt(rng, 0, h - bh);
    for (int y = y0; y < y0 + bh; ++y)
      for (int x = x0; x < x0 + bw; ++x) m.setOccupied({x, y}, true);
  }
  return m;
}

/// Distance from p to the nearest occupied cell or the map border, by
/// brute force over every cell.
inline double bruteClearance(const GridMap& m, Vec2 p) {
  const double res = m.resolution();
  double best = std::min({p.x, p.y, m.width() * res - p.x, m.height() * res - p.y});
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      if (!m.occupied({x, y})) continue;
      const double cx = std::clamp(p.x, x * res, (x + 1) * res);
      const double cy = std::clamp(p.y, y * res, (y + 1) * res);
      best = std::min(best, std::hypot(p.x - cx, p.y - cy));
    }
  return best;
}

/// Unicycle integration of a segment chain with RK4, sampled at the same
/// fractions as the library sweep (arc spacing `spacing`, rotations in 4).
inline std::vector<Pose> integrateUnicycle(const std::vector<CurveSegment>& curve, Pose start,
                                           double spacing, int substeps = 200) {
  std::vector<Pose> out{start};
  Pose p = start;
  for (const auto& seg : curve) {
    if (seg.length == 0.0) {
      const Pose base = p;
      for (int i = 1; i <= 4; ++i) {
        Pose q = base;
        q.theta += seg.turn * i / 4.0;
        out.push_back(q);
      }
      p.theta += seg.turn;
      continue;
    }
    const int n = std::max(1, static_cast<int>(std::ceil(seg.length / spacing - 1e-9)));
    const double ds = seg.length / (static_cast<double>(n) * substeps);
    auto f = [&](const Pose& s) {
      return Pose{std::cos(s.theta), std::sin(s.theta), seg.curvature};
    };
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < substeps; ++k) {
        const Pose k1 = f(p);
        const Pose k2 = f({p.x + ds / 2 * k1.x, p.y + ds / 2 * k1.y, p.theta + ds / 2 * k1.theta});
        const Pose k3 = f({p.x + ds / 2 * k2.x, p.y + ds / 2 * k2.y, p.theta + ds / 2 * k2.theta});
        const Pose k4 = f({p.x + ds * k3.x, p.y + ds * k3.y, p.theta + ds * k3.theta});
        p.x += ds / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
        p.y += ds / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
        p.theta += ds / 6 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
      }
      out.push_back(p);
    }
  }
  return out;
}

/// Dijkstra over lattice states using the map-based reference successor
/// function. Returns the cheapest cost to reach any heading in goal_cell.
inline double dijkstraOracle(const GridMap& m, const PrimitiveSet& prims, double radius,
                             LatticeNode start, Cell goal_cell, const CellMask* blocked = nullptr) {
  const int H = prims.heading_count;
  auto id = [&](const LatticeNode& n) {
    return (static_cast<size_t>(n.y) * m.width() + n.x) * H + n.heading;
  };
  auto usable = [&](const LatticeNode& n) {
    return m.inBounds(n.cell()) && m.diskFree(m.cellCenter(n.cell()), radius) &&
           !(blocked && blocked->test(n.cell()));
  };
  const double inf = std::numeric_limits<double>::infinity();
  if (!usable(start)) return inf;
  std::vector<double> dist(m.cellCount() * H, inf);
  using Item = std::pair<double, LatticeNode>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[id(start)] = 0.0;
  open.push({0.0, start});
  while (!open.empty()) {
    const auto [d, n] = open.top();
    open.pop();
    if (d > dist[id(n)]) continue;
    if (n.cell() == goal_cell) return d;
    for (const auto& s : successors(n, m, prims, radius)) {
      if (!usable(s.node)) continue;
      if (blocked) {
        bool hit = false;
        for (const auto& off : prims.primitives[s.primitive].swept_cells)
          hit = hit || blocked->test({n.x + off.x, n.y + off.y});
        if (hit) continue;
      }
      const double nd = d + s.cost;
      if (nd < dist[id(s.node)]) {
        dist[id(s.node)] = nd;
        open.push({nd, s.node});
      }
    }
  }
  return inf;
}

/// Random free lattice node (nullopt after many misses).
inline std::optional<LatticeNode> randomFreeNode(Rng& rng, const LatticeGraph& g) {
  const GridMap& m = g.map();
  for (int tries = 0; tries < 1000; ++tries) {
    const LatticeNode n{uniformInt(rng, 0, m.width() - 1), uniformInt(rng, 0, m.height() - 1),
                        uniformInt(rng, 0, g.headingCount() - 1)};
    if (g.nodeValid(n)) return n;
  }
  return std::nullopt;
}

/// n positions in [0, extent]^2 with pairwise separation strictly above min_sep.
inline std::vector<Vec2> separatedPoints(Rng& rng, int n, double extent, double min_sep) {
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Vec2 p{uniform(rng, 0.0, extent), uniform(rng, 0.0, extent)};
    bool ok = true;
    for (const auto& q : pts) ok = ok && distance(p, q) > min_sep;
    if (ok) pts.push_back(p);
  }
  return pts;
}

/// ||p - p_j||^2 - ||p - p_i||^2 >= 2 R ||p_i - p_j|| for every neighbour.
inline bool bvcOracle(Vec2 owner, double radius, const std::vector<Vec2>& neighbors, Vec2 p) {
  for (const auto& pj : neighbors) {
    const double lhs = (p - pj).squaredNorm() - (p - owner).squaredNorm();
    if (lhs < 2.0 * radius * (owner - pj).norm()) return false;
  }
  return true;
}

/// Scenario from the bundled corpus.
inline Scenario corpus(const std::string& name) {
  return loadScenario(std::string(LATNAV_SCENARIO_DIR) + "/" + name + ".json");
}

}  // namespace latnav::testing
