#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latnav/error.hpp"
#include "latnav/scenario.hpp"

namespace latnav {

namespace detail {

using json = nlohmann::ordered_json;

[[noreturn]] inline void fieldError(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + msg);
}

inline void rejectUnknown(const json& obj, const std::string& where,
                          std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) fieldError(where.empty() ? k : where + "." + k, "unknown key");
  }
}

inline const json& need(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) fieldError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fieldError(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

inline double number(const json& v, const std::string& field) {
  if (!v.is_number()) fieldError(field, "expected a number");
  return v.get<double>();
}

inline int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fieldError(field, "expected an integer");
  return v.get<int>();
}

inline bool boolean(const json& v, const std::string& field) {
  if (!v.is_boolean()) fieldError(field, "expected true or false");
  return v.get<bool>();
}

inline std::vector<double> numbers(const json& v, const std::string& field, size_t n) {
  if (!v.is_array() || v.size() != n)
    fieldError(field, "expected an array of " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (size_t i = 0; i < n; ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline Cell cell(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) fieldError(field, "expected [x, y] cell indices");
  return {integer(v[0], field + "[0]"), integer(v[1], field + "[1]")};
}

inline GridMap parseMap(const json& j, bool& ascii) {
  rejectUnknown(j, "map", {"resolution", "rows", "width", "height", "occupied"});
  const double res = number(need(j, "resolution", "map"), "map.resolution");
  try {
    if (j.contains("rows")) {
      ascii = true;
      const json& rows = j["rows"];
      if (!rows.is_array()) fieldError("map.rows", "expected an array of strings");
      std::vector<std::string> r;
      for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_string()) fieldError("map.rows[" + std::to_string(i) + "]", "expected a string");
        const std::string s = rows[i].get<std::string>();
        if (s.find_first_not_of(".#") != std::string::npos)
          fieldError("map.rows[" + std::to_string(i) + "]", "only '.' and '#' are allowed");
        r.push_back(s);
      }
      return GridMap::fromAscii(r, res);
    }
    ascii = false;
    GridMap m(integer(need(j, "width", "map"), "map.width"),
              integer(need(j, "height", "map"), "map.height"), res);
    if (j.contains("occupied")) {
      const json& occ = j["occupied"];
      if (!occ.is_array()) fieldError("map.occupied", "expected an array of cells");
      for (size_t i = 0; i < occ.size(); ++i) {
        const std::string f = "map.occupied[" + std::to_string(i) + "]";
        const Cell c = cell(occ[i], f);
        if (!m.inBounds(c)) fieldError(f, "cell outside the map");
        m.setOccupied(c, true);
      }
    }
    return m;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidParameter) fieldError("map", e.what());
    throw;
  }
}

inline json mapJson(const GridMap& m, bool ascii) {
  json j;
  j["resolution"] = m.resolution();
  if (ascii) {
    json rows = json::array();
    for (int y = m.height() - 1; y >= 0; --y) {
      std::string r(m.width(), '.');
      for (int x = 0; x < m.width(); ++x)
        if (m.occupied({x, y})) r[x] = '#';
      rows.push_back(r);
    }
    j["rows"] = rows;
  } else {
    j["width"] = m.width();
    j["height"] = m.height();
    json occ = json::array();
    for (const auto& c : m.occupiedCells()) occ.push_back({c.x, c.y});
    j["occupied"] = occ;
  }
  return j;
}

inline SimParams parseParams(const json& j) {
  SimParams p;
  rejectUnknown(j, "params",
                {"heading_count", "turn_radius", "nominal_speed", "control_period", "sensing_radius",
                 "trigger_radius", "width_threshold", "replan_epsilon", "bvc_margin",
                 "deadlock_window", "deadlock_delta", "step_budget", "yield_after", "yield_steps",
                 "yield_distance", "seed", "bvc", "congestion", "corridors", "weights"});
  auto num = [&](const char* k, double& dst) {
    if (j.contains(k)) dst = number(j[k], std::string("params.") + k);
  };
  auto integ = [&](const char* k, int& dst) {
    if (j.contains(k)) dst = integer(j[k], std::string("params.") + k);
  };
  auto flag = [&](const char* k, bool& dst) {
    if (j.contains(k)) dst = boolean(j[k], std::string("params.") + k);
  };
  integ("heading_count", p.heading_count);
  num("turn_radius", p.turn_radius);
  num("nominal_speed", p.nominal_speed);
  num("control_period", p.control_period);
  num("sensing_radius", p.sensing_radius);
  num("trigger_radius", p.trigger_radius);
  num("width_threshold", p.width_threshold);
  num("replan_epsilon", p.replan_epsilon);
  num("bvc_margin", p.bvc_margin);
  integ("deadlock_window", p.deadlock_window);
  num("deadlock_delta", p.deadlock_delta);
  integ("step_budget", p.step_budget);
  integ("yield_after", p.yield_after);
  integ("yield_steps", p.yield_steps);
  num("yield_distance", p.yield_distance);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fieldError("params.seed", "expected a nonnegative integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }
  flag("bvc", p.use_bvc);
  flag("congestion", p.use_congestion);
  flag("corridors", p.use_corridors);
  if (j.contains("weights")) {
    const json& w = j["weights"];
    rejectUnknown(w, "params.weights",
                  {"k_c", "k_g", "k_n", "crowding_factor", "horizon_steps", "collision_penalty"});
    auto wn = [&](const char* k, double& dst) {
      if (w.contains(k)) dst = number(w[k], std::string("params.weights.") + k);
    };
    wn("k_c", p.weights.k_c);
    wn("k_g", p.weights.k_g);
    wn("k_n", p.weights.k_n);
    wn("crowding_factor", p.weights.crowding_factor);
    wn("collision_penalty", p.weights.collision_penalty);
    if (w.contains("horizon_steps"))
      p.weights.horizon_steps = integer(w["horizon_steps"], "params.weights.horizon_steps");
  }
  return p;
}

inline json paramsJson(const SimParams& p) {
  json j;
  j["heading_count"] = p.heading_count;
  j["turn_radius"] = p.turn_radius;
  j["nominal_speed"] = p.nominal_speed;
  j["control_period"] = p.control_period;
  j["sensing_radius"] = p.sensing_radius;
  j["trigger_radius"] = p.trigger_radius;
  j["width_threshold"] = p.width_threshold;
  j["replan_epsilon"] = p.replan_epsilon;
  j["bvc_margin"] = p.bvc_margin;
  j["deadlock_window"] = p.deadlock_window;
  j["deadlock_delta"] = p.deadlock_delta;
  j["step_budget"] = p.step_budget;
  j["yield_after"] = p.yield_after;
  j["yield_steps"] = p.yield_steps;
  j["yield_distance"] = p.yield_distance;
  j["seed"] = p.seed;
  j["bvc"] = p.use_bvc;
  j["congestion"] = p.use_congestion;
  j["corridors"] = p.use_corridors;
  j["weights"] = {{"k_c", p.weights.k_c},
                  {"k_g", p.weights.k_g},
                  {"k_n", p.weights.k_n},
                  {"crowding_factor", p.weights.crowding_factor},
                  {"horizon_steps", p.weights.horizon_steps},
                  {"collision_penalty", p.weights.collision_penalty}};
  return j;
}

/// 1-based line of a byte offset.
inline size_t lineOf(const std::string& text, size_t byte) {
  size_t line = 1;
  for (size_t i = 0; i < text.size() && i < byte; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

/// Parses scenario text without validating invariants.
inline Scenario parseScenario(const std::string& text) {
  using detail::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(detail::lineOf(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) detail::fieldError("", "top level must be an object");
  detail::rejectUnknown(j, "", {"name", "map", "agents", "tasks", "corridors", "params"});

  Scenario s;
  if (j.contains("name")) {
    if (!j["name"].is_string()) detail::fieldError("name", "expected a string");
    s.name = j["name"].get<std::string>();
  }
  s.map = detail::parseMap(detail::need(j, "map", ""), s.map_as_ascii);
  if (j.contains("params")) s.params = detail::parseParams(j["params"]);

  if (j.contains("tasks")) {
    const json& tasks = j["tasks"];
    if (!tasks.is_array()) detail::fieldError("tasks", "expected an array");
    for (size_t i = 0; i < tasks.size(); ++i) {
      const std::string f = "tasks[" + std::to_string(i) + "]";
      detail::rejectUnknown(tasks[i], f, {"id", "goal"});
      Task t;
      t.id = detail::integer(detail::need(tasks[i], "id", f), f + ".id");
      const auto g = detail::numbers(detail::need(tasks[i], "goal", f), f + ".goal", 2);
      t.goal = {g[0], g[1]};
      s.tasks.push_back(t);
    }
  }

  const json& agents = detail::need(j, "agents", "");
  if (!agents.is_array()) detail::fieldError("agents", "expected an array");
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string f = "agents[" + std::to_string(i) + "]";
    const json& aj = agents[i];
    detail::rejectUnknown(aj, f, {"id", "start", "goal", "task", "radius"});
    AgentSpec a;
    a.id = detail::integer(detail::need(aj, "id", f), f + ".id");
    const auto st = detail::numbers(detail::need(aj, "start", f), f + ".start", 3);
    a.start = {st[0], st[1], st[2]};
    a.radius = detail::number(detail::need(aj, "radius", f), f + ".radius");
    if (aj.contains("task")) a.task = detail::integer(aj["task"], f + ".task");
    if (aj.contains("goal")) {
      const auto g = detail::numbers(aj["goal"], f + ".goal", 2);
      a.goal = {g[0], g[1]};
    } else if (!a.task) {
      detail::fieldError(f + ".goal", "missing (give a goal or a task)");
    }
    s.agents.push_back(a);
  }

  if (j.contains("corridors")) {
    const json& cs = j["corridors"];
    if (!cs.is_array()) detail::fieldError("corridors", "expected an array");
    for (size_t i = 0; i < cs.size(); ++i) {
      const std::string f = "corridors[" + std::to_string(i) + "]";
      detail::rejectUnknown(cs[i], f, {"id", "cells"});
      const json& idj = detail::need(cs[i], "id", f);
      if (!idj.is_string()) detail::fieldError(f + ".id", "expected a string");
      const json& cells = detail::need(cs[i], "cells", f);
      if (!cells.is_array() || cells.empty()) detail::fieldError(f + ".cells", "expected cells");
      std::vector<Cell> cl;
      for (size_t k = 0; k < cells.size(); ++k)
        cl.push_back(detail::cell(cells[k], f + ".cells[" + std::to_string(k) + "]"));
      s.corridors.push_back(makeCorridor(idj.get<std::string>(), std::move(cl), s.map.resolution()));
    }
  }
  return s;
}

/// Parses and validates; task references are resolved into agent goals.
inline Scenario loadScenarioText(const std::string& text) {
  Scenario s = parseScenario(text);
  validateScenario(s);
  resolveTasks(s);
  return s;
}

inline Scenario loadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return loadScenarioText(ss.str());
}

inline std::string saveScenario(const Scenario& s) {
  using detail::json;
  json j;
  j["name"] = s.name;
  j["map"] = detail::mapJson(s.map, s.map_as_ascii);
  j["params"] = detail::paramsJson(s.params);
  if (!s.tasks.empty()) {
    json tasks = json::array();
    for (const auto& t : s.tasks) tasks.push_back({{"id", t.id}, {"goal", {t.goal.x, t.goal.y}}});
    j["tasks"] = tasks;
  }
  json agents = json::array();
  for (const auto& a : s.agents) {
    json aj;
    aj["id"] = a.id;
    aj["start"] = {a.start.x, a.start.y, a.start.theta};
    aj["goal"] = {a.goal.x, a.goal.y};
    if (a.task) aj["task"] = *a.task;
    aj["radius"] = a.radius;
    agents.push_back(aj);
  }
  j["agents"] = agents;
  json cs = json::array();
  for (const auto& c : s.corridors) {
    json cells = json::array();
    for (const auto& cell : c.cells) cells.push_back({cell.x, cell.y});
    cs.push_back({{"id", c.id}, {"cells", cells}});
  }
  j["corridors"] = cs;
  return j.dump(2) + "\n";
}

inline void saveScenarioFile(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << saveScenario(s);
}

}  // namespace latnav
