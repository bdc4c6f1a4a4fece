#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "latnav/congestion.hpp"
#include "latnav/corridor.hpp"
#include "latnav/error.hpp"
#include "latnav/grid_map.hpp"

namespace latnav {

enum class Mode { Full, Baseline, NoCorridors };

inline const char* toString(Mode m) {
  switch (m) {
    case Mode::Full: return "full";
    case Mode::Baseline: return "baseline";
    case Mode::NoCorridors: return "no-corridors";
  }
  return "?";
}

inline Mode parseMode(const std::string& s) {
  if (s == "full") return Mode::Full;
  if (s == "baseline") return Mode::Baseline;
  if (s == "no-corridors") return Mode::NoCorridors;
  throw Error(ErrorKind::InvalidParameter, "unknown mode '" + s + "'");
}

/// Tunables. Zero-valued "auto" fields are resolved from the agent radius
/// or the initial plans when the simulation starts.
struct SimParams {
  int heading_count = 8;
  double turn_radius = 0.0;       // auto: 2 * resolution
  double nominal_speed = 1.0;     // m/s
  double control_period = 0.1;    // s per simulation step
  double sensing_radius = 0.0;    // auto: 10 R
  double trigger_radius = 5.0;    // m
  double width_threshold = 0.0;   // auto: 4 R (two agent diameters)
  double replan_epsilon = 2.0;
  double bvc_margin = 1e-3;       // m added to the BVC buffer
  int deadlock_window = 50;       // steps
  double deadlock_delta = 0.0;    // auto: R / 2
  int step_budget = 0;            // auto: 4 * longest initial plan / resolution
  int yield_after = 10;           // stalled steps before yielding; 0 disables
  int yield_steps = 20;           // length of a yield manoeuvre
  double yield_distance = 0.0;    // auto: 4 R
  std::uint64_t seed = 0;
  bool use_bvc = true;
  bool use_congestion = true;
  bool use_corridors = true;
  CongestionWeights weights;

  void applyMode(Mode m) {
    use_bvc = m != Mode::Baseline;
    use_congestion = m != Mode::Baseline;
    use_corridors = m == Mode::Full;
  }
  Mode mode() const {
    if (!use_bvc && !use_congestion && !use_corridors) return Mode::Baseline;
    if (use_bvc && use_congestion && !use_corridors) return Mode::NoCorridors;
    return Mode::Full;
  }
  bool operator==(const SimParams& o) const {
    auto w = [](const CongestionWeights& c) {
      return std::make_tuple(c.k_c, c.k_g, c.k_n, c.crowding_factor, c.horizon_steps,
                             c.collision_penalty);
    };
    return heading_count == o.heading_count && turn_radius == o.turn_radius &&
           nominal_speed == o.nominal_speed && control_period == o.control_period &&
           sensing_radius == o.sensing_radius && trigger_radius == o.trigger_radius &&
           width_threshold == o.width_threshold && replan_epsilon == o.replan_epsilon &&
           bvc_margin == o.bvc_margin && deadlock_window == o.deadlock_window &&
           deadlock_delta == o.deadlock_delta && step_budget == o.step_budget &&
           yield_after == o.yield_after && yield_steps == o.yield_steps &&
           yield_distance == o.yield_distance &&
           seed == o.seed && use_bvc == o.use_bvc && use_congestion == o.use_congestion &&
           use_corridors == o.use_corridors && w(weights) == w(o.weights);
  }
};

struct AgentSpec {
  int id = 0;
  Pose start;
  Vec2 goal;
  double radius = 0.25;
  std::optional<int> task;  // goal taken from the task list when set

  bool operator==(const AgentSpec&) const = default;
};

/// (t_i, g_i)
struct Task {
  int id = 0;
  Vec2 goal;
  bool operator==(const Task&) const = default;
};

struct Scenario {
  std::string name;
  GridMap map;
  bool map_as_ascii = true;  // serialization preference only
  std::vector<AgentSpec> agents;
  std::vector<Task> tasks;
  std::vector<Corridor> corridors;
  SimParams params;

  double agentRadius() const { return agents.empty() ? 0.0 : agents.front().radius; }
  double turnRadius() const {
    return params.turn_radius > 0.0 ? params.turn_radius : 2.0 * map.resolution();
  }
  double sensingRadius() const {
    return params.sensing_radius > 0.0 ? params.sensing_radius : 10.0 * agentRadius();
  }
  double widthThreshold() const {
    return params.width_threshold > 0.0 ? params.width_threshold : 4.0 * agentRadius();
  }
  double yieldDistance() const {
    return params.yield_distance > 0.0 ? params.yield_distance : 4.0 * agentRadius();
  }
  double deadlockDelta() const {
    return params.deadlock_delta > 0.0 ? params.deadlock_delta : 0.5 * agentRadius();
  }

  bool operator==(const Scenario&) const = default;
};

/// Resolves task references into agent goals.
inline void resolveTasks(Scenario& s) {
  for (auto& a : s.agents) {
    if (!a.task) continue;
    auto it = std::find_if(s.tasks.begin(), s.tasks.end(),
                           [&](const Task& t) { return t.id == *a.task; });
    if (it == s.tasks.end())
      throw Error(ErrorKind::ValidationError,
                  "agent " + std::to_string(a.id) + " references unknown task " +
                      std::to_string(*a.task));
    a.goal = it->goal;
  }
}

/// Structural checks on a loaded scenario. Lattice-level checks (clearance
/// of starts and goals, reachability) happen when a simulation is built.
inline void validateScenario(const Scenario& s) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  const GridMap& m = s.map;
  const double res = m.resolution();
  const SimParams& p = s.params;

  if (s.agents.empty()) fail("scenario has no agents");
  if (p.heading_count != 8 && p.heading_count != 16) fail("heading_count must be 8 or 16");
  if (!(s.turnRadius() >= res)) fail("turn_radius must be at least one cell");
  if (!(p.nominal_speed > 0.0)) fail("nominal_speed must be positive");
  if (!(p.control_period > 0.0)) fail("control_period must be positive");
  if (!(p.trigger_radius > 0.0)) fail("trigger_radius must be positive");
  if (!(p.replan_epsilon >= 1.0)) fail("replan_epsilon must be >= 1");
  if (p.bvc_margin < 0.0) fail("bvc_margin must be nonnegative");
  if (p.deadlock_window <= 0) fail("deadlock_window must be positive");
  if (p.step_budget < 0) fail("step_budget must be nonnegative");
  if (p.yield_after < 0) fail("yield_after must be nonnegative");
  if (p.yield_steps <= 0) fail("yield_steps must be positive");
  if (p.yield_distance < 0.0) fail("yield_distance must be nonnegative");
  try {
    p.weights.validate();
  } catch (const Error& e) {
    fail(e.what());
  }

  std::set<int> task_ids;
  for (const auto& t : s.tasks)
    if (!task_ids.insert(t.id).second) fail("duplicate task id " + std::to_string(t.id));

  std::set<int> ids;
  const double step = kTwoPi / p.heading_count;
  for (const auto& a : s.agents) {
    const std::string tag = "agent " + std::to_string(a.id);
    if (!ids.insert(a.id).second) fail("duplicate agent id " + std::to_string(a.id));
    if (!(a.radius > 0.0)) fail(tag + " radius must be positive");
    if (a.radius != s.agents.front().radius) fail("agents must share one radius (homogeneous)");
    if (a.task && !task_ids.count(*a.task))
      fail(tag + " references unknown task " + std::to_string(*a.task));
    const Cell sc = m.cellOf(a.start.position());
    if (!m.inBounds(sc) || m.occupied(sc)) fail(tag + " start is on an occupied or out-of-map cell");
    if (distance(m.cellCenter(sc), a.start.position()) > res / 10.0)
      fail(tag + " start is not at a cell centre");
    const double hk = wrapAngle(a.start.theta) / step;
    if (std::abs(hk - std::round(hk)) > 1e-6) fail(tag + " start heading is not a lattice heading");
    const Cell gc = m.cellOf(a.goal);
    if (!m.inBounds(gc) || m.occupied(gc)) fail(tag + " goal is on an occupied or out-of-map cell");
  }
  for (size_t i = 0; i < s.agents.size(); ++i)
    for (size_t j = i + 1; j < s.agents.size(); ++j) {
      const auto& a = s.agents[i];
      const auto& b = s.agents[j];
      if (distance(a.start.position(), b.start.position()) <= a.radius + b.radius)
        fail("agents " + std::to_string(a.id) + " and " + std::to_string(b.id) +
             " start overlapping (separation must exceed 2R)");
    }

  std::set<std::string> cids;
  for (const auto& c : s.corridors) {
    if (!cids.insert(c.id).second) fail("duplicate corridor id " + c.id);
    const std::string err = validateCorridor(c, m, s.widthThreshold());
    if (!err.empty()) fail(err);
  }
}

}  // namespace latnav
