#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "latnav/bvc.hpp"
#include "latnav/congestion.hpp"
#include "latnav/corridor.hpp"
#include "latnav/error.hpp"
#include "latnav/lattice.hpp"
#include "latnav/planner.hpp"
#include "latnav/scenario.hpp"

namespace latnav {

enum class AgentStatus { Active, Reached, Collided, Deadlocked };

inline const char* toString(AgentStatus s) {
  switch (s) {
    case AgentStatus::Active: return "active";
    case AgentStatus::Reached: return "reached";
    case AgentStatus::Collided: return "collided";
    case AgentStatus::Deadlocked: return "deadlocked";
  }
  return "?";
}

inline AgentStatus parseAgentStatus(const std::string& s) {
  if (s == "active") return AgentStatus::Active;
  if (s == "reached") return AgentStatus::Reached;
  if (s == "collided") return AgentStatus::Collided;
  if (s == "deadlocked") return AgentStatus::Deadlocked;
  throw Error(ErrorKind::ParseError, "unknown agent status '" + s + "'");
}

struct AgentState {
  int id = 0;
  double radius = 0.0;
  Pose pose;
  LatticeNode node;
  Vec2 velocity;
  Pose goal;
  Path path;
  AgentStatus status = AgentStatus::Active;
  double traveled = 0.0;
  double initial_length = 0.0;  // epsilon = 1 plan from the start
  int finish_step = -1;

  // corridor bookkeeping
  std::vector<size_t> grants;
  std::vector<std::pair<size_t, Direction>> blocks;
  std::optional<std::pair<size_t, Direction>> waiting;
  CellMask mask;

  std::deque<Vec2> history;  // position after each step, newest last
  size_t last_choice = 0;
  int stalled = 0;           // consecutive steps without a position change
  int yield_until = -1;      // step index ending the current yield, -1 if none

  bool active() const { return status == AgentStatus::Active; }
};

/// All unordered pairs with ||p_i - p_j|| <= R_i + R_j.
inline std::vector<std::pair<size_t, size_t>> detectCollisions(const std::vector<Vec2>& positions,
                                                               const std::vector<double>& radii) {
  std::vector<std::pair<size_t, size_t>> out;
  for (size_t i = 0; i < positions.size(); ++i)
    for (size_t j = i + 1; j < positions.size(); ++j)
      if (distance(positions[i], positions[j]) <= radii[i] + radii[j]) out.push_back({i, j});
  return out;
}

/// Net displacement over the last `window` steps below `delta`, away from goal.
inline bool detectDeadlock(const std::deque<Vec2>& history, int window, double delta,
                           bool at_goal) {
  if (at_goal || window <= 0 || history.size() <= static_cast<size_t>(window)) return false;
  return distance(history.back(), history[history.size() - 1 - window]) < delta;
}

inline bool detectDeadlock(const AgentState& a, int window, double delta) {
  const bool at_goal = a.status == AgentStatus::Reached;
  return a.active() && detectDeadlock(a.history, window, delta, at_goal);
}

struct AgentMetrics {
  int id = 0;
  AgentStatus status = AgentStatus::Active;
  double traveled = 0.0;
  double initial_length = 0.0;
  int finish_step = -1;
};

struct Metrics {
  int agents = 0;
  int reached = 0;
  int collided = 0;
  int deadlocked = 0;
  double sr = 0.0;
  double df = 0.0;
  double cf = 0.0;
  double avg_path_length = 0.0;     // over reached agents
  double avg_initial_length = 0.0;  // over reached agents
  int steps = 0;
  int collision_events = 0;
  int exclusion_violations = 0;
  std::vector<AgentMetrics> per_agent;
};

/// CF counts collided agents (including any that were also stuck); DF counts
/// the remaining deadlocked agents; SR = 1 - DF - CF.
inline Metrics computeMetrics(const std::vector<AgentState>& agents, int steps) {
  Metrics m;
  m.agents = static_cast<int>(agents.size());
  m.steps = steps;
  double len = 0.0, init = 0.0;
  for (const auto& a : agents) {
    m.per_agent.push_back({a.id, a.status, a.traveled, a.initial_length, a.finish_step});
    switch (a.status) {
      case AgentStatus::Reached:
        ++m.reached;
        len += a.traveled;
        init += a.initial_length;
        break;
      case AgentStatus::Collided: ++m.collided; break;
      case AgentStatus::Deadlocked: ++m.deadlocked; break;
      case AgentStatus::Active: break;
    }
  }
  if (m.agents > 0) {
    m.cf = static_cast<double>(m.collided) / m.agents;
    m.df = static_cast<double>(m.deadlocked) / m.agents;
  }
  m.sr = 1.0 - m.df - m.cf;
  if (m.reached > 0) {
    m.avg_path_length = len / m.reached;
    m.avg_initial_length = init / m.reached;
  }
  return m;
}

struct TrajectoryRecord {
  int step = 0;
  int agent = 0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  AgentStatus status = AgentStatus::Active;
};

struct EpisodeResult {
  std::vector<TrajectoryRecord> trajectory;
  Metrics metrics;
  std::vector<ReservationEvent> reservations;
};

/// Lockstep execution of the navigation loop over one scenario.
class Simulation {
 public:
  explicit Simulation(Scenario scenario) : sc_(std::move(scenario)) {
    resolveTasks(sc_);
    validateScenario(sc_);
    const GridMap& m = sc_.map;
    const double R = sc_.agentRadius();
    PrimitiveSet prims = buildPrimitives(sc_.params.heading_count, sc_.turnRadius(), m.resolution());
    if (prims.maxChord() > R + 1e-9)
      throw Error(ErrorKind::ValidationError,
                  "waypoint spacing " + std::to_string(prims.maxChord()) +
                      " m exceeds the agent radius; use a finer map or larger agents");
    graph_ = std::make_shared<const LatticeGraph>(m, std::move(prims), R);
    if (sc_.params.use_corridors)
      for (const auto& c : sc_.corridors) {
        corridors_.push_back(corridorGeometry(c, m, R));
        table_.addCorridor(c.id);
      }

    std::vector<AgentSpec> specs = sc_.agents;
    std::sort(specs.begin(), specs.end(),
              [](const AgentSpec& a, const AgentSpec& b) { return a.id < b.id; });
    double longest = 0.0;
    for (const auto& s : specs) {
      const std::string tag = "agent " + std::to_string(s.id);
      AgentState a;
      a.id = s.id;
      a.radius = s.radius;
      a.node = graph_->nodeNear(s.start);
      a.pose = graph_->pose(a.node);
      a.goal = {s.goal.x, s.goal.y, 0.0};
      a.mask = CellMask(m.width(), m.height());
      if (!graph_->nodeValid(a.node))
        throw Error(ErrorKind::ValidationError, tag + " start lacks clearance for its radius");
      if (!graph_->cellFree(m.cellOf(s.goal)))
        throw Error(ErrorKind::ValidationError, tag + " goal lacks clearance for its radius");
      planners_.push_back(std::make_unique<Planner>(graph_));
      PlanQuery q;
      q.start = a.pose;
      q.goal = a.goal;
      PlanResult r = planners_.back()->tryPlan(q);
      if (r.status != PlanStatus::Ok)
        throw Error(ErrorKind::ValidationError, tag + " goal is unreachable on the lattice");
      a.path = std::move(r.path);
      a.initial_length = a.path.length;
      longest = std::max(longest, a.path.length);
      a.history.push_back(a.pose.position());
      agents_.push_back(std::move(a));
    }
    budget_ = sc_.params.step_budget > 0
                  ? sc_.params.step_budget
                  : std::max(1, static_cast<int>(std::ceil(4.0 * longest / m.resolution())));
    for (auto& a : agents_) {
      if (atGoal(a)) {
        a.status = AgentStatus::Reached;
        a.finish_step = 0;
      }
    }
    record();
    if (std::none_of(agents_.begin(), agents_.end(), [](const AgentState& a) { return a.active(); }))
      finished_ = true;
  }

  const Scenario& scenario() const { return sc_; }
  const LatticeGraph& graph() const { return *graph_; }
  std::shared_ptr<const LatticeGraph> graphPtr() const { return graph_; }
  const std::vector<AgentState>& agents() const { return agents_; }
  const std::vector<CorridorGeometry>& corridors() const { return corridors_; }
  const ReservationTable& reservations() const { return table_; }
  const std::vector<TrajectoryRecord>& trajectory() const { return log_; }
  int stepIndex() const { return step_; }
  double now() const { return step_ * sc_.params.control_period; }
  int budget() const { return budget_; }
  bool finished() const { return finished_; }
  int collisionEvents() const { return collision_events_; }
  int exclusionViolations() const { return exclusion_violations_; }

  Metrics metrics() const {
    Metrics m = computeMetrics(agents_, step_);
    m.collision_events = collision_events_;
    m.exclusion_violations = exclusion_violations_;
    return m;
  }

  /// One lockstep step over the start-of-step snapshot.
  void step() {
    if (finished_) return;
    const SimParams& P = sc_.params;
    const double t = now();
    const size_t n = agents_.size();
    std::vector<Vec2> snap(n), vel(n);
    for (size_t i = 0; i < n; ++i) {
      snap[i] = agents_[i].pose.position();
      vel[i] = agents_[i].velocity;
    }

    struct Move {
      bool commit = false;
      size_t advance = 0;  // waypoints consumed
      Path path;
    };
    std::vector<Move> moves(n);
    for (size_t i = 0; i < n; ++i) {
      AgentState& a = agents_[i];
      if (!a.active()) continue;
      Move& mv = moves[i];
      if (P.use_corridors && !corridors_.empty()) handleCorridors(a, i, t);
      if (a.yield_until >= 0 && (step_ >= a.yield_until || a.path.size() < 2))
        endYield(a, i);
      else if (a.yield_until < 0 && P.yield_after > 0 && P.use_bvc && !a.waiting &&
               a.stalled >= P.yield_after)
        startYield(a, i, snap);
      const bool yielding = a.yield_until >= 0;

      const bool waiting = a.waiting.has_value();
      bool commit = !waiting && a.path.size() >= 2;
      if (commit && P.use_bvc)
        commit = segmentInside(localCell(snap, i), snap[i], a.path.poses[1].position());
      mv.commit = commit;
      const bool held = !waiting && !commit && a.path.size() >= 2;
      Path prospective = commit ? suffixAt(a.path, 1) : a.path;
      if (P.use_congestion && !waiting && !yielding && prospective.size() >= 2) {
        NeighborSnapshot nb;
        for (size_t j = 0; j < n; ++j)
          if (j != i && distance(snap[i], snap[j]) <= sc_.sensingRadius())
            nb.push_back({snap[j], vel[j], agents_[j].radius});
        const CellMask* mask = a.mask.empty() ? nullptr : &a.mask;
        Resolution r = conflictResolution(prospective, *planners_[i], a.goal, nb, P.weights,
                                          a.radius, P.nominal_speed, P.replan_epsilon, mask,
                                          P.control_period);
        if (held && P.use_bvc) penalizeBlockedFirstMoves(r, snap, i, P);
        a.last_choice = r.chosen;
        prospective = r.candidates[r.chosen];
      }
      mv.path = std::move(prospective);
    }

    std::vector<Vec2> before = snap;
    for (size_t i = 0; i < n; ++i) {
      AgentState& a = agents_[i];
      if (!a.active()) continue;
      Move& mv = moves[i];
      if (mv.commit) {
        a.traveled += a.path.cumulative[1];
        a.node = a.path.nodes[1];
        a.pose = a.path.poses[1];
      }
      a.path = std::move(mv.path);
    }
    ++step_;

    std::vector<Vec2> after(n), mid(n);
    std::vector<double> radii(n);
    for (size_t i = 0; i < n; ++i) {
      AgentState& a = agents_[i];
      after[i] = a.pose.position();
      mid[i] = (before[i] + after[i]) * 0.5;
      radii[i] = a.radius;
      a.velocity = (after[i] - before[i]) / P.control_period;
      a.stalled = after[i] == before[i] ? a.stalled + 1 : 0;
    }
    auto hits = detectCollisions(after, radii);
    for (const auto& pr : detectCollisions(mid, radii))
      if (std::find(hits.begin(), hits.end(), pr) == hits.end()) hits.push_back(pr);
    collision_events_ += static_cast<int>(hits.size());
    for (const auto& [i, j] : hits)
      for (size_t k : {i, j})
        if (agents_[k].active()) {
          agents_[k].status = AgentStatus::Collided;
          agents_[k].finish_step = step_;
          agents_[k].waiting.reset();
        }
    for (auto& a : agents_) {
      if (!a.active()) continue;
      if (atGoal(a)) {
        a.status = AgentStatus::Reached;
        a.finish_step = step_;
        a.grants.clear();
        continue;
      }
      a.history.push_back(a.pose.position());
      if (a.history.size() > static_cast<size_t>(P.deadlock_window) + 1) a.history.pop_front();
    }
    auditCorridors();
    record();

    bool any_active = false, all_stuck = true, any_waiting = false;
    for (const auto& a : agents_) {
      if (!a.active()) continue;
      any_active = true;
      any_waiting = any_waiting || a.waiting.has_value();
      all_stuck = all_stuck && detectDeadlock(a, P.deadlock_window, sc_.deadlockDelta());
    }
    if (!any_active) {
      finished_ = true;
    } else if ((all_stuck && !any_waiting) || step_ >= budget_) {
      for (auto& a : agents_)
        if (a.active()) {
          a.status = AgentStatus::Deadlocked;
          a.finish_step = step_;
        }
      relabelLast();
      finished_ = true;
    }
  }

  EpisodeResult run() {
    while (!finished_) step();
    return {log_, metrics(), table_.log()};
  }

 private:
  /// A held agent counts one predicted conflict for every candidate whose
  /// first move leaves its buffered Voronoi cell.
  void penalizeBlockedFirstMoves(Resolution& r, const std::vector<Vec2>& snap, size_t i,
                                 const SimParams& P) const {
    const BufferedVoronoiCell cell = localCell(snap, i);
    const CongestionWeights& w = P.weights;
    for (size_t k = 0; k < r.candidates.size(); ++k) {
      const Path& c = r.candidates[k];
      if (c.size() < 2 || segmentInside(cell, snap[i], c.poses[1].position())) continue;
      CongestionBreakdown& b = r.costs[k];
      b.collision += w.collision_penalty;
      b.total = weightedTotal(w, b);
    }
    r.chosen = argminCongestion(r.candidates, r.costs);
  }

  BufferedVoronoiCell localCell(const std::vector<Vec2>& snap, size_t i) const {
    std::vector<Vec2> nbrs;
    for (size_t j = 0; j < snap.size(); ++j)
      if (j != i && distance(snap[i], snap[j]) <= sc_.sensingRadius()) nbrs.push_back(snap[j]);
    return computeBvc(snap[i], agents_[i].radius + sc_.params.bvc_margin, nbrs);
  }

  /// Yield priority: corridor grant holders first, then less remaining distance, then lower id.
  bool outranks(size_t j, size_t i) const {
    auto key = [&](size_t k) {
      const AgentState& a = agents_[k];
      return std::make_tuple(a.grants.empty(), planners_[k]->heuristic(a.node, a.goal), a.id);
    };
    return key(j) < key(i);
  }

  /// Priority yield: an agent stalled next to a stalled higher-priority agent backs
  /// off to the free cell within the yield distance farthest from those
  /// agents (twice the distance if nothing fits), then replans to its goal once the
  /// manoeuvre ends.
  void startYield(AgentState& a, size_t i, const std::vector<Vec2>& snap) {
    const double R = a.radius;
    const Vec2 here = snap[i];
    std::vector<Vec2> blockers;
    for (size_t j = 0; j < agents_.size(); ++j) {
      const AgentState& b = agents_[j];
      if (j == i || !b.active() || b.stalled == 0 || b.waiting) continue;
      if (distance(here, snap[j]) <= 4.0 * R && outranks(j, i)) blockers.push_back(snap[j]);
    }
    if (blockers.empty()) return;
    const double d = sc_.yieldDistance();
    if (!tryYield(a, i, snap, blockers, d)) tryYield(a, i, snap, blockers, 2.0 * d);
  }

  bool tryYield(AgentState& a, size_t i, const std::vector<Vec2>& snap,
                const std::vector<Vec2>& blockers, double reach) {
    const GridMap& m = graph_->map();
    const double R = a.radius;
    const Vec2 here = snap[i];
    const double clear = 2.0 * R + sc_.params.bvc_margin;
    const Cell c0 = m.cellOf(here);
    const int span = static_cast<int>(std::ceil(reach / m.resolution()));
    struct Target {
      double score, travel;
      Cell cell;
    };
    std::vector<Target> targets;
    for (int dy = -span; dy <= span; ++dy)
      for (int dx = -span; dx <= span; ++dx) {
        const Cell c{c0.x + dx, c0.y + dy};
        if (!m.inBounds(c) || !graph_->cellFree(c) || a.mask.test(c)) continue;
        const Vec2 p = m.cellCenter(c);
        const double travel = distance(p, here);
        if (travel > reach || travel < R) continue;
        if (std::any_of(corridors_.begin(), corridors_.end(),
                        [&](const CorridorGeometry& g) { return g.inside(c); }))
          continue;
        bool free = true;
        for (size_t j = 0; j < snap.size() && free; ++j)
          free = j == i || distance(p, snap[j]) > clear;
        if (!free) continue;
        double score = std::numeric_limits<double>::infinity();
        for (const Vec2& b : blockers) score = std::min(score, distance(p, b));
        targets.push_back({score, travel, c});
      }
    std::stable_sort(targets.begin(), targets.end(), [](const Target& x, const Target& y) {
      if (std::abs(x.score - y.score) > 1e-9) return x.score > y.score;
      return x.travel < y.travel - 1e-9;
    });
    // best target per direction sector, so each try leaves in a different direction
    constexpr int kSectors = 8;
    std::vector<Target> picks;
    std::vector<bool> seen(kSectors, false);
    for (const Target& t : targets) {
      const Vec2 d = m.cellCenter(t.cell) - here;
      const double u = (std::atan2(d.y, d.x) + std::numbers::pi) / kTwoPi;
      const int k = std::min(kSectors - 1, static_cast<int>(u * kSectors));
      if (seen[k]) continue;
      seen[k] = true;
      picks.push_back(t);
    }

    const BufferedVoronoiCell cell = localCell(snap, i);
    for (const Target& t : picks) {
      const Vec2 target = m.cellCenter(t.cell);
      std::optional<Path> retreat = replanAround(*planners_[i], a.pose, {target.x, target.y, 0.0},
                                                 a.mask, sc_.params.replan_epsilon);
      if (!retreat || retreat->size() < 2) continue;
      size_t k = 1;
      while (k + 1 < retreat->size() && distance(retreat->poses[k].position(), here) < 1e-9) ++k;
      if (!segmentInside(cell, here, retreat->poses[k].position())) continue;
      a.path = std::move(*retreat);
      a.yield_until = step_ + sc_.params.yield_steps;
      return true;
    }
    return false;
  }

  void endYield(AgentState& a, size_t i) {
    a.yield_until = -1;
    std::optional<Path> back =
        replanAround(*planners_[i], a.pose, a.goal, a.mask, sc_.params.replan_epsilon);
    if (!back) back = replanAround(*planners_[i], a.pose, a.goal, CellMask{}, sc_.params.replan_epsilon);
    if (back) a.path = std::move(*back);
  }

  bool atGoal(const AgentState& a) const {
    return a.node.cell() == graph_->map().cellOf(a.goal.position());
  }

  void rebuildMask(AgentState& a) {
    a.mask = CellMask(graph_->map().width(), graph_->map().height());
    for (const auto& [c, d] : a.blocks) a.mask.merge(corridors_[c].entry_block);
  }

  bool holds(const AgentState& a, size_t c) const {
    return std::find(a.grants.begin(), a.grants.end(), c) != a.grants.end();
  }

  /// Denial: block the corridor entries and replan; wait in place if no
  /// alternative exists.
  void onDenied(AgentState& a, size_t i, size_t c, Direction d) {
    if (std::none_of(a.blocks.begin(), a.blocks.end(), [&](const auto& b) { return b.first == c; }))
      a.blocks.push_back({c, d});
    rebuildMask(a);
    std::optional<Path> alt =
        replanAround(*planners_[i], a.pose, a.goal, a.mask, sc_.params.replan_epsilon);
    if (alt) {
      a.path = std::move(*alt);
      a.waiting.reset();
    } else {
      a.waiting = std::make_pair(c, d);
    }
  }

  void handleCorridors(AgentState& a, size_t i, double t) {
    const SimParams& P = sc_.params;
    auto id = [&](size_t c) { return corridors_[c].corridor.id; };

    // Lift blocks whose reservation no longer opposes us.
    const size_t nblocks = a.blocks.size();
    std::erase_if(a.blocks, [&](const auto& b) {
      return !table_.record(id(b.first)).opposes(b.second, t) &&
             !(a.waiting && a.waiting->first == b.first);
    });
    if (a.blocks.size() != nblocks) rebuildMask(a);

    if (a.waiting) {
      const auto [c, d] = *a.waiting;
      if (table_.record(id(c)).opposes(d, t)) return;
      const auto crossings = findCrossings(a.path, 0, corridors_, graph_->map());
      const CorridorCrossing* cr = nullptr;
      for (const auto& x : crossings)
        if (x.corridor == c) cr = &x;
      a.waiting.reset();
      std::erase_if(a.blocks, [&](const auto& b) { return b.first == c; });
      rebuildMask(a);
      if (!cr) return;
      const double dist = a.path.cumulative[cr->entry];
      const Decision dec = table_.request(id(c), cr->direction, t + dist / P.nominal_speed,
                                          corridors_[c].corridor.length / P.nominal_speed, t,
                                          a.id);
      if (dec == Decision::Denied) {
        onDenied(a, i, c, cr->direction);
        return;
      }
      a.grants.push_back(c);
    }

    for (size_t round = 0; round <= corridors_.size(); ++round) {
      const auto crossings = findCrossings(a.path, 0, corridors_, graph_->map());
      std::erase_if(a.grants, [&](size_t g) {
        return std::none_of(crossings.begin(), crossings.end(),
                            [&](const CorridorCrossing& x) { return x.corridor == g; });
      });
      // Extend held grants whose window ends before the projected exit.
      bool denied = false;
      for (const auto& x : crossings) {
        if (!holds(a, x.corridor)) continue;
        const double eta = t + a.path.cumulative[x.entry] / P.nominal_speed;
        const double dur = std::max(a.path.cumulative[x.exit] - a.path.cumulative[x.entry],
                                    graph_->map().resolution()) /
                           P.nominal_speed;
        const ReservationRecord rec = table_.record(id(x.corridor));
        if (rec.status == Status::Reserved && !rec.expired(t) && rec.direction == x.direction &&
            rec.end_time >= eta + dur)
          continue;
        if (table_.request(id(x.corridor), x.direction, eta, dur, t, a.id) == Decision::Denied) {
          std::erase(a.grants, x.corridor);
          onDenied(a, i, x.corridor, x.direction);
          denied = true;
          break;
        }
      }
      if (denied) {
        if (a.waiting) return;
        continue;
      }
      const auto req = triggerCheck(a.path, 0, crossings, corridors_, P.trigger_radius,
                                    P.nominal_speed, t, a.grants);
      if (!req) return;
      const Decision dec = table_.request(id(req->corridor), req->direction, req->eta,
                                          req->duration, t, a.id);
      if (dec != Decision::Denied) {
        a.grants.push_back(req->corridor);
        continue;
      }
      onDenied(a, i, req->corridor, req->direction);
      if (a.waiting) return;
    }
  }

  /// Opposite-direction grant holders inside the same corridor.
  void auditCorridors() {
    for (size_t c = 0; c < corridors_.size(); ++c) {
      bool ab = false, ba = false;
      for (const auto& a : agents_) {
        if (!a.active() || !holds(a, c) || !corridors_[c].inside(a.node.cell())) continue;
        const auto cr = findCrossings(a.path, 0, corridors_, graph_->map());
        for (const auto& x : cr)
          if (x.corridor == c) {
            ab = ab || x.direction == Direction::AtoB;
            ba = ba || x.direction == Direction::BtoA;
          }
      }
      if (ab && ba) ++exclusion_violations_;
    }
  }

  void record() {
    for (const auto& a : agents_) {
      if (a.finish_step >= 0 && a.finish_step < step_) continue;
      log_.push_back({step_, a.id, a.pose.x, a.pose.y, a.pose.theta, a.status});
    }
  }

  void relabelLast() {
    for (auto it = log_.rbegin(); it != log_.rend() && it->step == step_; ++it)
      for (const auto& a : agents_)
        if (a.id == it->agent) it->status = a.status;
  }

  Scenario sc_;
  std::shared_ptr<const LatticeGraph> graph_;
  std::vector<std::unique_ptr<Planner>> planners_;
  std::vector<AgentState> agents_;
  std::vector<CorridorGeometry> corridors_;
  ReservationTable table_;
  std::vector<TrajectoryRecord> log_;
  int step_ = 0;
  int budget_ = 0;
  bool finished_ = false;
  int collision_events_ = 0;
  int exclusion_violations_ = 0;
};

/// Runs a scenario to completion, optionally overriding its mode flags.
inline EpisodeResult runEpisode(Scenario scenario, std::optional<Mode> mode = std::nullopt) {
  if (mode) scenario.params.applyMode(*mode);
  Simulation sim(std::move(scenario));
  return sim.run();
}

}  // namespace latnav
