#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latnav/error.hpp"
#include "latnav/planner.hpp"

namespace latnav {

enum class Direction { None, AtoB, BtoA };

inline const char* toString(Direction d) {
  switch (d) {
    case Direction::None: return "none";
    case Direction::AtoB: return "a->b";
    case Direction::BtoA: return "b->a";
  }
  return "?";
}

inline Direction opposite(Direction d) {
  return d == Direction::AtoB ? Direction::BtoA : d == Direction::BtoA ? Direction::AtoB
                                                                        : Direction::None;
}

/// Narrow passage declared in the scenario: an ordered centre line from
/// portal a to portal b.
struct Corridor {
  std::string id;
  Cell portal_a;
  Cell portal_b;
  std::vector<Cell> cells;
  double length = 0.0;  // meters along the centre line

  bool operator==(const Corridor&) const = default;
};

inline double centerlineLength(const std::vector<Cell>& cells, double resolution) {
  double l = 0.0;
  for (size_t k = 1; k < cells.size(); ++k)
    l += std::hypot(cells[k].x - cells[k - 1].x, cells[k].y - cells[k - 1].y) * resolution;
  return l;
}

inline Corridor makeCorridor(std::string id, std::vector<Cell> cells, double resolution) {
  if (cells.empty()) throw Error(ErrorKind::ValidationError, "corridor " + id + " has no cells");
  Corridor c;
  c.id = std::move(id);
  c.portal_a = cells.front();
  c.portal_b = cells.back();
  c.length = centerlineLength(cells, resolution);
  c.cells = std::move(cells);
  return c;
}

/// Free-cell run through c along (dx, dy), counting c itself.
inline int freeRun(const GridMap& m, Cell c, int dx, int dy) {
  int n = 1;
  for (Cell p{c.x + dx, c.y + dy}; !m.occupied(p); p = {p.x + dx, p.y + dy}) ++n;
  for (Cell p{c.x - dx, c.y - dy}; !m.occupied(p); p = {p.x - dx, p.y - dy}) ++n;
  return n;
}

/// Widest free cross-section over the interior centre-line cells.
inline double corridorWidth(const Corridor& c, const GridMap& m) {
  double widest = 0.0;
  const double res = m.resolution();
  for (size_t k = 1; k + 1 < c.cells.size(); ++k) {
    const int ddx = c.cells[k + 1].x - c.cells[k - 1].x;
    const int ddy = c.cells[k + 1].y - c.cells[k - 1].y;
    double w;
    if (ddx == 0) {
      w = freeRun(m, c.cells[k], 1, 0) * res;
    } else if (ddy == 0) {
      w = freeRun(m, c.cells[k], 0, 1) * res;
    } else {
      w = std::min(freeRun(m, c.cells[k], 1, 0), freeRun(m, c.cells[k], 0, 1)) * res;
    }
    widest = std::max(widest, w);
  }
  return widest;
}

/// Checks corridor invariants; returns an empty string when valid.
inline std::string validateCorridor(const Corridor& c, const GridMap& m, double width_threshold) {
  if (c.cells.size() < 2) return "corridor " + c.id + " needs at least two cells";
  for (const auto& cell : c.cells)
    if (!m.inBounds(cell) || m.occupied(cell))
      return "corridor " + c.id + " references an occupied or out-of-map cell";
  if (!(c.portal_a == c.cells.front()) || !(c.portal_b == c.cells.back()))
    return "corridor " + c.id + " portals must be the first and last centre-line cells";
  for (size_t k = 1; k < c.cells.size(); ++k)
    if (std::max(std::abs(c.cells[k].x - c.cells[k - 1].x),
                 std::abs(c.cells[k].y - c.cells[k - 1].y)) != 1)
      return "corridor " + c.id + " cells are not a connected path";
  if (corridorWidth(c, m) > width_threshold + 1e-9)
    return "corridor " + c.id + " is wider than the narrowness threshold";
  return {};
}

/// Derived per-map data: the footprint used to detect traversals and the
/// temporary obstacles placed at both entries on denial.
struct CorridorGeometry {
  Corridor corridor;
  CellMask footprint;
  CellMask entry_block;
  Vec2 portal_a_pos;
  Vec2 portal_b_pos;

  bool inside(Cell c) const { return footprint.test(c); }
};

inline CorridorGeometry corridorGeometry(const Corridor& c, const GridMap& m, double agent_radius) {
  CorridorGeometry g;
  g.corridor = c;
  g.portal_a_pos = m.cellCenter(c.portal_a);
  g.portal_b_pos = m.cellCenter(c.portal_b);
  g.footprint = CellMask(m.width(), m.height());
  g.entry_block = CellMask(m.width(), m.height());
  const double reach = agent_radius + m.resolution();
  const int k = static_cast<int>(std::ceil(reach / m.resolution()));
  auto dilate = [&](Cell center, CellMask& mask) {
    const Vec2 cp = m.cellCenter(center);
    for (int dy = -k; dy <= k; ++dy)
      for (int dx = -k; dx <= k; ++dx) {
        const Cell q{center.x + dx, center.y + dy};
        if (m.inBounds(q) && !m.occupied(q) && distance(m.cellCenter(q), cp) <= reach + 1e-9)
          mask.set(q);
      }
  };
  for (const auto& cell : c.cells) dilate(cell, g.footprint);
  const size_t n = c.cells.size();
  for (size_t i = 0; i < std::min<size_t>(2, n); ++i) {
    dilate(c.cells[i], g.entry_block);
    dilate(c.cells[n - 1 - i], g.entry_block);
  }
  return g;
}

/// One pass of a path through a corridor footprint (waypoint indices).
struct CorridorCrossing {
  size_t corridor = 0;
  Direction direction = Direction::None;
  size_t entry = 0;
  size_t exit = 0;  // last waypoint inside the footprint
};

/// Index of the centre-line cell nearest to p (lowest index on ties).
inline size_t station(const CorridorGeometry& g, const GridMap& m, Vec2 p) {
  size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < g.corridor.cells.size(); ++k) {
    const double d = distance(m.cellCenter(g.corridor.cells[k]), p);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  return best;
}

/// Traversals of `path` from waypoint `from` on, in path order. A run of
/// waypoints inside a footprint counts when its centre-line station moves
/// between entry and exit; its sign gives the direction. Runs that enter and
/// leave by the same portal, or that only touch a mouth, are ignored.
inline std::vector<CorridorCrossing> findCrossings(const Path& path, size_t from,
                                                   const std::vector<CorridorGeometry>& corridors,
                                                   const GridMap& m) {
  std::vector<CorridorCrossing> out;
  for (size_t ci = 0; ci < corridors.size(); ++ci) {
    const auto& g = corridors[ci];
    size_t k = from;
    while (k < path.size()) {
      if (!g.inside(path.nodes[k].cell())) {
        ++k;
        continue;
      }
      const size_t e = k;
      while (k + 1 < path.size() && g.inside(path.nodes[k + 1].cell())) ++k;
      const size_t x = k;
      ++k;
      const size_t se = station(g, m, path.poses[e].position());
      const size_t sx = station(g, m, path.poses[x].position());
      if (se == sx) continue;
      out.push_back({ci, se < sx ? Direction::AtoB : Direction::BtoA, e, x});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CorridorCrossing& a, const CorridorCrossing& b) { return a.entry < b.entry; });
  return out;
}

enum class Status { Free, Reserved };
enum class Decision { GrantedNew, GrantedExtended, Denied };

inline const char* toString(Decision d) {
  switch (d) {
    case Decision::GrantedNew: return "granted_new";
    case Decision::GrantedExtended: return "granted_extended";
    case Decision::Denied: return "denied";
  }
  return "?";
}

struct ReservationRecord {
  Status status = Status::Free;
  Direction direction = Direction::None;
  double start_time = 0.0;
  double end_time = 0.0;

  bool valid() const {
    if (status == Status::Free) return direction == Direction::None;
    return direction != Direction::None && end_time > start_time;
  }
  bool expired(double now) const { return status == Status::Reserved && now > end_time; }
  /// Reserved, unexpired, and running against `d`.
  bool opposes(Direction d, double now) const {
    return status == Status::Reserved && !expired(now) && direction != d;
  }
  bool operator==(const ReservationRecord&) const = default;
};

struct ReservationEvent {
  double time = 0.0;
  int agent = -1;
  std::string corridor;
  Direction direction = Direction::None;
  Decision decision = Decision::Denied;
  double start_time = 0.0;
  double end_time = 0.0;
};

/// Passageway database. Callers go through this interface so a remote
/// store can stand in for the in-process table.
class ReservationService {
 public:
  virtual ~ReservationService() = default;
  virtual Decision request(const std::string& corridor, Direction dir, double eta,
                           double traverse_duration, double now, int agent = -1) = 0;
  virtual ReservationRecord record(const std::string& corridor) const = 0;
};

/// Single-writer in-process table; requests are applied in call order.
class ReservationTable final : public ReservationService {
 public:
  ReservationTable() = default;
  explicit ReservationTable(const std::vector<Corridor>& corridors) {
    for (const auto& c : corridors) records_[c.id] = {};
  }

  void addCorridor(const std::string& id) { records_[id] = {}; }

  Decision request(const std::string& corridor, Direction dir, double eta,
                   double traverse_duration, double now, int agent = -1) override {
    auto it = records_.find(corridor);
    if (it == records_.end()) throw Error(ErrorKind::UnknownCorridor, corridor);
    if (dir == Direction::None) throw Error(ErrorKind::InvalidParameter, "direction required");
    if (!(eta >= now)) throw Error(ErrorKind::InvalidParameter, "eta precedes now");
    if (!(traverse_duration > 0.0))
      throw Error(ErrorKind::InvalidParameter, "traverse duration must be positive");

    ReservationRecord& r = it->second;
    Decision d;
    if (r.status == Status::Free || r.expired(now)) {
      r = {Status::Reserved, dir, eta, eta + traverse_duration};
      d = Decision::GrantedNew;
    } else if (r.direction == dir) {
      r.end_time = std::max(r.end_time, eta + traverse_duration);
      d = Decision::GrantedExtended;
    } else {
      d = Decision::Denied;
    }
    log_.push_back({now, agent, corridor, dir, d, r.start_time, r.end_time});
    return d;
  }

  ReservationRecord record(const std::string& corridor) const override {
    auto it = records_.find(corridor);
    if (it == records_.end()) throw Error(ErrorKind::UnknownCorridor, corridor);
    return it->second;
  }

  const std::vector<ReservationEvent>& log() const { return log_; }

 private:
  std::map<std::string, ReservationRecord> records_;
  std::vector<ReservationEvent> log_;
};

struct CorridorRequest {
  size_t corridor = 0;
  Direction direction = Direction::None;
  double eta = 0.0;
  double duration = 0.0;
  double distance_to_entry = 0.0;
};

/// First upcoming traversal whose along-path distance to the entry is
/// below the trigger radius, skipping corridors in `held`.
inline std::optional<CorridorRequest> triggerCheck(const Path& path, size_t from,
                                                   const std::vector<CorridorCrossing>& crossings,
                                                   const std::vector<CorridorGeometry>& corridors,
                                                   double trigger_radius, double nominal_speed,
                                                   double now,
                                                   const std::vector<size_t>& held = {}) {
  for (const auto& cr : crossings) {
    if (cr.entry < from) continue;
    if (std::find(held.begin(), held.end(), cr.corridor) != held.end()) continue;
    const double dist = path.cumulative[cr.entry] - path.cumulative[from];
    if (dist >= trigger_radius) return std::nullopt;
    CorridorRequest r;
    r.corridor = cr.corridor;
    r.direction = cr.direction;
    r.distance_to_entry = dist;
    r.eta = now + dist / nominal_speed;
    r.duration = corridors[cr.corridor].corridor.length / nominal_speed;
    return r;
  }
  return std::nullopt;
}

/// Replan on the static lattice with the denied corridor's entries blocked.
inline std::optional<Path> replanAround(Planner& planner, const Pose& from, const Pose& goal,
                                        const CellMask& blocked, double epsilon) {
  PlanQuery q;
  q.start = from;
  q.goal = goal;
  q.epsilon = epsilon;
  PlanResult r = planner.tryPlan(q, &blocked);
  if (r.status != PlanStatus::Ok) return std::nullopt;
  return std::move(r.path);
}

/// Axis-aligned narrow-passage detection: free cells whose span across one
/// axis is at most `width_threshold` and shorter than the span along the
/// other axis, grouped into straight corridors.
inline std::vector<Corridor> detectCorridors(const GridMap& m, double width_threshold) {
  const int W = m.width(), H = m.height();
  const int limit = static_cast<int>(std::floor(width_threshold / m.resolution() + 1e-9));
  std::vector<Corridor> out;
  for (int axis = 0; axis < 2; ++axis) {  // 0: vertical passages, 1: horizontal
    std::vector<std::uint8_t> narrow(m.cellCount(), 0), seen(m.cellCount(), 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        if (m.occupied({x, y})) continue;
        const int across = axis == 0 ? freeRun(m, {x, y}, 1, 0) : freeRun(m, {x, y}, 0, 1);
        const int along = axis == 0 ? freeRun(m, {x, y}, 0, 1) : freeRun(m, {x, y}, 1, 0);
        if (across <= limit && along > across) narrow[m.index({x, y})] = 1;
      }
    for (size_t s = 0; s < narrow.size(); ++s) {
      if (!narrow[s] || seen[s]) continue;
      std::vector<Cell> comp, stack{m.cellAt(s)};
      seen[s] = 1;
      while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        comp.push_back(c);
        for (const Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
          const Cell q{c.x + d.x, c.y + d.y};
          if (!m.inBounds(q)) continue;
          const size_t qi = m.index(q);
          if (narrow[qi] && !seen[qi]) {
            seen[qi] = 1;
            stack.push_back(q);
          }
        }
      }
      int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
      double sum = 0.0;
      for (const auto& c : comp) {
        const int along = axis == 0 ? c.y : c.x;
        lo = std::min(lo, along);
        hi = std::max(hi, along);
        sum += axis == 0 ? c.x : c.y;
      }
      if (hi - lo < 1) continue;
      const int mid = static_cast<int>(std::floor(sum / comp.size()));
      std::vector<Cell> cells;
      for (int t = lo; t <= hi; ++t) cells.push_back(axis == 0 ? Cell{mid, t} : Cell{t, mid});
      if (std::any_of(cells.begin(), cells.end(), [&](Cell c) { return m.occupied(c); })) continue;
      out.push_back(makeCorridor("auto" + std::to_string(out.size()), std::move(cells),
                                 m.resolution()));
    }
  }
  return out;
}

}  // namespace latnav
