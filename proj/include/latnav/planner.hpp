#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <utility>
#include <vector>

#include "latnav/error.hpp"
#include "latnav/lattice.hpp"

namespace latnav {

/// Sequence of lattice poses joined by motion primitives.
struct Path {
  std::vector<LatticeNode> nodes;
  std::vector<Pose> poses;
  std::vector<int> primitives;     // primitives[k] joins nodes[k] -> nodes[k+1]
  std::vector<double> cumulative;  // cost from the first pose, per pose
  double length = 0.0;

  bool empty() const { return nodes.empty(); }
  size_t size() const { return nodes.size(); }
  const LatticeNode& front() const { return nodes.front(); }
  const LatticeNode& back() const { return nodes.back(); }

  /// Same pose sequence (used for de-duplicating candidate sets).
  bool samePoses(const Path& o) const { return nodes == o.nodes; }
};

/// Path holding a single pose.
inline Path singlePosePath(const LatticeGraph& g, const LatticeNode& n) {
  Path p;
  p.nodes = {n};
  p.poses = {g.pose(n)};
  p.cumulative = {0.0};
  return p;
}

/// Appends one primitive step to a path.
inline void appendStep(Path& p, const LatticeGraph& g, const Successor& s) {
  p.nodes.push_back(s.node);
  p.poses.push_back(g.pose(s.node));
  p.primitives.push_back(s.primitive);
  p.length += s.cost;
  p.cumulative.push_back(p.length);
}

/// a followed by b; b must start where a ends.
inline Path concatenate(const LatticeGraph& g, Path a, const Path& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (!(a.back() == b.front()))
    throw Error(ErrorKind::InvalidParameter, "concatenated paths do not meet");
  for (size_t k = 0; k < b.primitives.size(); ++k) {
    const int idx = b.primitives[k];
    appendStep(a, g, {b.nodes[k + 1], idx, g.primitives().primitives[idx].cost});
  }
  return a;
}

/// Sub-path from waypoint k on, with costs rebased to zero.
inline Path suffixAt(const Path& path, size_t k) {
  if (k >= path.size()) throw Error(ErrorKind::NotOnPath, "waypoint index past the end of the path");
  Path out;
  const double base = path.cumulative[k];
  out.nodes.assign(path.nodes.begin() + k, path.nodes.end());
  out.poses.assign(path.poses.begin() + k, path.poses.end());
  out.primitives.assign(path.primitives.begin() + k, path.primitives.end());
  out.cumulative.reserve(out.nodes.size());
  for (size_t j = k; j < path.size(); ++j) out.cumulative.push_back(path.cumulative[j] - base);
  out.length = path.length - base;
  return out;
}

/// Sub-path starting at the pose matching `position` (within resolution/10;
/// an exact heading match is preferred over position-only matches).
inline Path suffixFrom(const Path& path, const Pose& position, double resolution) {
  const double tol = resolution / 10.0;
  size_t found = path.size();
  for (size_t k = 0; k < path.size() && found == path.size(); ++k) {
    const Pose& q = path.poses[k];
    if (distance(q.position(), position.position()) <= tol &&
        std::abs(angleDiff(q.theta, position.theta)) < 1e-6)
      found = k;
  }
  for (size_t k = 0; k < path.size() && found == path.size(); ++k)
    if (distance(path.poses[k].position(), position.position()) <= tol) found = k;
  if (found == path.size()) throw Error(ErrorKind::NotOnPath, "position does not lie on the path");
  return suffixAt(path, found);
}

struct PlanQuery {
  Pose start;
  Pose goal;
  bool goal_heading_free = true;
  double epsilon = 1.0;
  size_t max_expansions = 2'000'000;
};

enum class PlanStatus { Ok, NoPath, InvalidQuery, Timeout };

struct PlanResult {
  PlanStatus status = PlanStatus::NoPath;
  Path path;
  size_t expansions = 0;
};

/// Cost-to-goal on the heading-free relaxation of the lattice: cells are
/// nodes, every primitive offset is a move costing its straight-line length.
/// Admissible and consistent because primitive cost >= offset length.
class HeuristicTable {
 public:
  HeuristicTable(const LatticeGraph& g, Cell goal, const CellMask* blocked) : goal_(goal) {
    const GridMap& m = g.map();
    dist_.assign(m.cellCount(), std::numeric_limits<double>::infinity());
    std::vector<std::pair<Cell, double>> moves;
    for (const auto& p : g.primitives().primitives) {
      if (p.dx == 0 && p.dy == 0) continue;
      const Cell off{p.dx, p.dy};
      bool dup = false;
      for (const auto& mv : moves) dup = dup || mv.first == off;
      if (!dup) moves.push_back({off, std::hypot(p.dx, p.dy) * m.resolution()});
    }
    auto usable = [&](Cell c) { return g.cellFree(c) && !(blocked && blocked->test(c)); };
    if (!usable(goal)) return;
    using Item = std::pair<double, size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist_[m.index(goal)] = 0.0;
    open.push({0.0, m.index(goal)});
    while (!open.empty()) {
      const auto [d, idx] = open.top();
      open.pop();
      if (d > dist_[idx]) continue;
      const Cell u = m.cellAt(idx);
      for (const auto& [off, cost] : moves) {
        const Cell v{u.x - off.x, u.y - off.y};  // v --off--> u
        if (!usable(v)) continue;
        const size_t vi = m.index(v);
        if (d + cost < dist_[vi]) {
          dist_[vi] = d + cost;
          open.push({dist_[vi], vi});
        }
      }
    }
    width_ = m.width();
  }

  double at(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_) return std::numeric_limits<double>::infinity();
    const size_t i = static_cast<size_t>(c.y) * width_ + c.x;
    return i < dist_.size() ? dist_[i] : std::numeric_limits<double>::infinity();
  }
  Cell goal() const { return goal_; }

 private:
  Cell goal_;
  int width_ = 0;
  std::vector<double> dist_;
};

/// Weighted A* over the lattice. Not thread-safe: one instance per agent,
/// all sharing the read-only graph.
class Planner {
 public:
  explicit Planner(std::shared_ptr<const LatticeGraph> graph) : graph_(std::move(graph)) {
    const size_t n = graph_->nodeCount();
    g_.assign(n, 0.0);
    parent_.assign(n, -1);
    parent_prim_.assign(n, -1);
    stamp_.assign(n, 0);
    closed_.assign(n, 0);
  }

  const LatticeGraph& graph() const { return *graph_; }
  std::shared_ptr<const LatticeGraph> graphPtr() const { return graph_; }

  const HeuristicTable& heuristicTable(Cell goal, const CellMask* blocked = nullptr) {
    const std::uint64_t mask_key = blocked ? blocked->key() : 0;
    const auto key = std::make_pair(graph_->map().index(goal), mask_key);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
    if (cache_.size() > 64) cache_.clear();
    auto table = std::make_shared<const HeuristicTable>(*graph_, goal, blocked);
    return *cache_.emplace(key, std::move(table)).first->second;
  }

  /// Heuristic value of a node for a goal position.
  double heuristic(const LatticeNode& n, const Pose& goal, const CellMask* blocked = nullptr) {
    return heuristicTable(graph_->map().cellOf(goal.position()), blocked).at(n.cell());
  }

  PlanResult tryPlan(const PlanQuery& q, const CellMask* blocked = nullptr) {
    if (!(q.epsilon >= 1.0)) throw Error(ErrorKind::InvalidParameter, "epsilon must be >= 1");
    PlanResult res;
    const LatticeGraph& G = *graph_;
    const LatticeNode start = G.nodeNear(q.start);
    const LatticeNode goal = G.nodeNear(q.goal);
    auto usable = [&](const LatticeNode& n) {
      return G.nodeValid(n) && !(blocked && blocked->test(n.cell()));
    };
    if (!usable(start) || !usable(goal)) {
      res.status = PlanStatus::InvalidQuery;
      return res;
    }
    auto isGoal = [&](const LatticeNode& n) {
      return n.cell() == goal.cell() && (q.goal_heading_free || n.heading == goal.heading);
    };
    if (isGoal(start)) {
      res.status = PlanStatus::Ok;
      res.path = singlePosePath(G, start);
      return res;
    }
    const HeuristicTable& H = heuristicTable(goal.cell(), blocked);
    if (!std::isfinite(H.at(start.cell()))) {
      res.status = PlanStatus::NoPath;
      return res;
    }

    if (++search_ == 0) {  // stamp wrap-around
      std::fill(stamp_.begin(), stamp_.end(), 0);
      std::fill(closed_.begin(), closed_.end(), 0);
      search_ = 1;
    }
    struct Entry {
      double f;
      LatticeNode n;
      double g;
      bool operator>(const Entry& o) const {
        if (f != o.f) return f > o.f;
        return n > o.n;
      }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    const size_t sid = G.nodeId(start);
    stamp_[sid] = search_;
    g_[sid] = 0.0;
    parent_[sid] = -1;
    open.push({q.epsilon * H.at(start.cell()), start, 0.0});

    std::vector<Successor> succ;
    while (!open.empty()) {
      const Entry e = open.top();
      open.pop();
      const size_t id = G.nodeId(e.n);
      if (closed_[id] == search_ || e.g > g_[id]) continue;
      closed_[id] = search_;
      if (isGoal(e.n)) {
        res.status = PlanStatus::Ok;
        res.path = reconstruct(id);
        return res;
      }
      if (++res.expansions > q.max_expansions) {
        res.status = PlanStatus::Timeout;
        return res;
      }
      G.successors(e.n, succ, blocked);
      for (const auto& s : succ) {
        const size_t vid = G.nodeId(s.node);
        if (closed_[vid] == search_) continue;
        const double ng = e.g + s.cost;
        if (stamp_[vid] != search_ || ng < g_[vid]) {
          const double h = H.at(s.node.cell());
          if (!std::isfinite(h)) continue;
          stamp_[vid] = search_;
          g_[vid] = ng;
          parent_[vid] = static_cast<std::int64_t>(id);
          parent_prim_[vid] = s.primitive;
          open.push({ng + q.epsilon * h, s.node, ng});
        }
      }
    }
    res.status = PlanStatus::NoPath;
    return res;
  }

  /// Throwing form: invalid-query for unusable start/goal, no-path otherwise.
  Path plan(const PlanQuery& q, const CellMask* blocked = nullptr) {
    PlanResult r = tryPlan(q, blocked);
    switch (r.status) {
      case PlanStatus::Ok: return std::move(r.path);
      case PlanStatus::InvalidQuery:
        throw Error(ErrorKind::InvalidQuery, "start or goal is occupied or outside the map");
      case PlanStatus::Timeout: throw Error(ErrorKind::NoPath, "expansion budget exhausted");
      case PlanStatus::NoPath: break;
    }
    throw Error(ErrorKind::NoPath, "goal unreachable in the lattice");
  }

 private:
  Path reconstruct(size_t goal_id) const {
    std::vector<size_t> ids;
    for (std::int64_t id = static_cast<std::int64_t>(goal_id); id >= 0; id = parent_[id]) {
      ids.push_back(static_cast<size_t>(id));
      if (parent_[id] < 0) break;
    }
    std::reverse(ids.begin(), ids.end());
    const LatticeGraph& G = *graph_;
    Path p = singlePosePath(G, G.nodeAt(ids.front()));
    for (size_t k = 1; k < ids.size(); ++k) {
      const int prim = parent_prim_[ids[k]];
      appendStep(p, G, {G.nodeAt(ids[k]), prim, G.primitives().primitives[prim].cost});
    }
    return p;
  }

  std::shared_ptr<const LatticeGraph> graph_;
  std::vector<double> g_;
  std::vector<std::int64_t> parent_;
  std::vector<int> parent_prim_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> closed_;
  std::uint32_t search_ = 0;
  std::map<std::pair<size_t, std::uint64_t>, std::shared_ptr<const HeuristicTable>> cache_;
};

}  // namespace latnav
