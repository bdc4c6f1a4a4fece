#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "latnav/error.hpp"
#include "latnav/planner.hpp"

namespace latnav {

struct CongestionWeights {
  double k_c = 10.0;  // predicted collisions
  double k_g = 1.0;   // extra path length
  double k_n = 2.0;   // crowding
  double crowding_factor = 5.0;
  int horizon_steps = 20;
  double collision_penalty = 1.0;

  void validate() const {
    if (k_c < 0 || k_g < 0 || k_n < 0)
      throw Error(ErrorKind::InvalidParameter, "congestion weights must be nonnegative");
    if (!(crowding_factor > 0.0))
      throw Error(ErrorKind::InvalidParameter, "crowding factor must be positive");
    if (horizon_steps <= 0) throw Error(ErrorKind::InvalidParameter, "horizon must be positive");
    if (!(collision_penalty > 0.0))
      throw Error(ErrorKind::InvalidParameter, "collision penalty must be positive");
  }

  CongestionWeights scaled(double lambda) const {
    CongestionWeights w = *this;
    w.k_c *= lambda;
    w.k_g *= lambda;
    w.k_n *= lambda;
    return w;
  }
};

struct NeighborState {
  Vec2 position;
  Vec2 velocity;
  double radius = 0.0;
};

using NeighborSnapshot = std::vector<NeighborState>;

inline size_t horizonEnd(const Path& path, const CongestionWeights& w) {
  return std::min(path.size(), static_cast<size_t>(w.horizon_steps));
}

/// Counts neighbours whose constant-velocity prediction comes within
/// R_i + R_j of the waypoint the agent holds at the same time.
inline double collisionCost(const Path& path, const NeighborSnapshot& neighbors, double own_radius,
                            double nominal_speed, const CongestionWeights& w) {
  if (!(nominal_speed > 0.0)) throw Error(ErrorKind::InvalidParameter, "speed must be positive");
  double cost = 0.0;
  const size_t end = horizonEnd(path, w);
  for (const auto& nb : neighbors) {
    const double reach = own_radius + nb.radius;
    for (size_t k = 0; k < end; ++k) {
      const double t = path.cumulative[k] / nominal_speed;
      const Vec2 predicted = nb.position + nb.velocity * t;
      if (distance(path.poses[k].position(), predicted) <= reach) {
        cost += w.collision_penalty;
        break;
      }
    }
  }
  return cost;
}

/// Extra length over the shortest candidate.
inline double goalCost(const Path& candidate, const std::vector<Path>& candidates) {
  double shortest = candidate.length;
  for (const auto& c : candidates) shortest = std::min(shortest, c.length);
  return candidate.length - shortest;
}

/// Sum over horizon waypoints and neighbours (at current positions) of
/// 1/(t*d) when d <= crowding_factor * R_i; t is clamped below by min_time.
inline double crowdingCost(const Path& path, const NeighborSnapshot& neighbors, double own_radius,
                           double nominal_speed, const CongestionWeights& w,
                           double min_time = 0.1) {
  if (!(nominal_speed > 0.0)) throw Error(ErrorKind::InvalidParameter, "speed must be positive");
  constexpr double kMinDistance = 1e-9;
  const double limit = w.crowding_factor * own_radius;
  double cost = 0.0;
  const size_t end = horizonEnd(path, w);
  for (size_t k = 0; k < end; ++k) {
    const double t = std::max(path.cumulative[k] / nominal_speed, min_time);
    for (const auto& nb : neighbors) {
      const double d = distance(path.poses[k].position(), nb.position);
      if (d <= limit) cost += 1.0 / (t * std::max(d, kMinDistance));
    }
  }
  return cost;
}

struct CongestionBreakdown {
  double collision = 0.0;
  double goal = 0.0;
  double crowding = 0.0;
  double total = 0.0;
};

/// C = k_c * C_collision + k_g * C_goal + k_n * C_neighbor
inline double weightedTotal(const CongestionWeights& w, const CongestionBreakdown& b) {
  return w.k_c * b.collision + w.k_g * b.goal + w.k_n * b.crowding;
}

inline CongestionBreakdown congestionTerms(const Path& path, const std::vector<Path>& candidates,
                                           const NeighborSnapshot& neighbors,
                                           const CongestionWeights& w, double own_radius,
                                           double nominal_speed, double min_time = 0.1) {
  CongestionBreakdown b;
  b.collision = collisionCost(path, neighbors, own_radius, nominal_speed, w);
  b.goal = goalCost(path, candidates);
  b.crowding = crowdingCost(path, neighbors, own_radius, nominal_speed, w, min_time);
  b.total = weightedTotal(w, b);
  return b;
}

inline double congestion(const Path& path, const std::vector<Path>& candidates,
                         const NeighborSnapshot& neighbors, const CongestionWeights& w,
                         double own_radius, double nominal_speed, double min_time = 0.1) {
  return congestionTerms(path, candidates, neighbors, w, own_radius, nominal_speed, min_time).total;
}

/// Candidate set: the current path, then one path per successor x of the
/// agent's node (the primitive to x followed by a plan from x to the goal).
/// Failed plans and duplicate pose sequences are dropped.
inline std::vector<Path> candidatePaths(const Path& current, Planner& planner, const Pose& goal,
                                        double epsilon, const CellMask* blocked = nullptr) {
  if (current.empty()) throw Error(ErrorKind::InvalidParameter, "current path is empty");
  const LatticeGraph& G = planner.graph();
  std::vector<Path> out{current};
  const LatticeNode here = current.front();
  for (const auto& s : G.successors(here, blocked)) {
    PlanQuery q;
    q.start = G.pose(s.node);
    q.goal = goal;
    q.epsilon = epsilon;
    PlanResult r = planner.tryPlan(q, blocked);
    if (r.status != PlanStatus::Ok) continue;
    Path cand = singlePosePath(G, here);
    appendStep(cand, G, s);
    cand = concatenate(G, std::move(cand), r.path);
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Path& p) { return p.samePoses(cand); });
    if (!dup) out.push_back(std::move(cand));
  }
  return out;
}

struct Resolution {
  std::vector<Path> candidates;
  std::vector<CongestionBreakdown> costs;
  size_t chosen = 0;

  const Path& path() const { return candidates.at(chosen); }
};

/// Index of the cheapest candidate; near-equal totals (relative 1e-9) fall
/// back to shorter length, then lower index.
inline size_t argminCongestion(const std::vector<Path>& candidates,
                               const std::vector<CongestionBreakdown>& costs) {
  auto near = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
  };
  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i) {
    const double a = costs[i].total, b = costs[best].total;
    if (!near(a, b)) {
      if (a < b) best = i;
      continue;
    }
    const double la = candidates[i].length, lb = candidates[best].length;
    if (!near(la, lb) && la < lb) best = i;
  }
  return best;
}

/// Ranks a candidate set and picks the argmin.
inline Resolution rankCandidates(std::vector<Path> candidates, const NeighborSnapshot& neighbors,
                                 const CongestionWeights& w, double own_radius,
                                 double nominal_speed, double min_time = 0.1) {
  Resolution r;
  r.candidates = std::move(candidates);
  r.costs.reserve(r.candidates.size());
  for (const auto& c : r.candidates)
    r.costs.push_back(
        congestionTerms(c, r.candidates, neighbors, w, own_radius, nominal_speed, min_time));
  r.chosen = argminCongestion(r.candidates, r.costs);
  return r;
}

/// Candidate generation plus ranking; falls back to the current path when
/// no successor yields a plan.
inline Resolution conflictResolution(const Path& current, Planner& planner, const Pose& goal,
                                     const NeighborSnapshot& neighbors, const CongestionWeights& w,
                                     double own_radius, double nominal_speed, double epsilon,
                                     const CellMask* blocked = nullptr, double min_time = 0.1) {
  return rankCandidates(candidatePaths(current, planner, goal, epsilon, blocked), neighbors, w,
                        own_radius, nominal_speed, min_time);
}

}  // namespace latnav
