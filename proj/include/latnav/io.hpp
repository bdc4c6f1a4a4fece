#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latnav/bvc.hpp"
#include "latnav/error.hpp"
#include "latnav/grid_map.hpp"
#include "latnav/sim.hpp"

namespace latnav {

namespace detail {
inline std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}
}  // namespace detail

inline constexpr const char* kTrajectoryHeader = "step,agent,x,y,theta,status";

inline std::string trajectoryCsv(const std::vector<TrajectoryRecord>& records) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.step) + "," + std::to_string(r.agent) + "," + detail::fixed(r.x) + "," +
           detail::fixed(r.y) + "," + detail::fixed(r.theta) + "," + toString(r.status) + "\n";
  }
  return out;
}

inline std::vector<TrajectoryRecord> parseTrajectoryCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw Error(ErrorKind::ParseError, "line 1: expected header '" + std::string(kTrajectoryHeader) + "'");
  std::vector<TrajectoryRecord> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string tok; std::getline(ls, tok, ',');) f.push_back(tok);
    if (f.size() != 6)
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 6 fields");
    try {
      TrajectoryRecord r;
      r.step = std::stoi(f[0]);
      r.agent = std::stoi(f[1]);
      r.x = std::stod(f[2]);
      r.y = std::stod(f[3]);
      r.theta = std::stod(f[4]);
      r.status = parseAgentStatus(f[5]);
      out.push_back(r);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::string metricsJson(const Metrics& m, const std::string& scenario = "",
                               Mode mode = Mode::Full) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["mode"] = toString(mode);
  j["agents"] = m.agents;
  j["reached"] = m.reached;
  j["collided"] = m.collided;
  j["deadlocked"] = m.deadlocked;
  j["SR"] = m.sr;
  j["DF"] = m.df;
  j["CF"] = m.cf;
  j["avg_path_length"] = m.avg_path_length;
  j["avg_initial_length"] = m.avg_initial_length;
  j["steps"] = m.steps;
  j["collision_events"] = m.collision_events;
  j["exclusion_violations"] = m.exclusion_violations;
  auto per = nlohmann::ordered_json::array();
  for (const auto& a : m.per_agent)
    per.push_back({{"id", a.id},
                   {"status", toString(a.status)},
                   {"traveled", a.traveled},
                   {"initial_length", a.initial_length},
                   {"finish_step", a.finish_step}});
  j["per_agent"] = per;
  return j.dump(2) + "\n";
}

inline constexpr const char* kReservationHeader =
    "time,agent,corridor,direction,decision,start_time,end_time";

inline std::string reservationCsv(const std::vector<ReservationEvent>& events) {
  std::string out = std::string(kReservationHeader) + "\n";
  for (const auto& e : events)
    out += detail::fixed(e.time) + "," + std::to_string(e.agent) + "," + e.corridor + "," +
           toString(e.direction) + "," + toString(e.decision) + "," + detail::fixed(e.start_time) +
           "," + detail::fixed(e.end_time) + "\n";
  return out;
}

inline void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << content;
  if (!out) throw Error(ErrorKind::IoError, "write failed: " + path);
}

inline std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SvgOptions {
  double pixels_per_meter = 50.0;
  double agent_radius = 0.0;  // 0: no disks
  std::vector<std::vector<Vec2>> cells;  // optional polygons (e.g. Voronoi cells)
};

/// Map, per-agent polylines, final disks and optional cell polygons.
inline std::string renderSvg(const GridMap& map, const std::vector<TrajectoryRecord>& trajectory,
                             const SvgOptions& opt = {}) {
  using detail::fixed;
  const double s = opt.pixels_per_meter;
  const double res = map.resolution();
  const double W = map.width() * res * s, H = map.height() * res * s;
  auto X = [&](double x) { return fixed(x * s, 2); };
  auto Y = [&](double y) { return fixed(H - y * s, 2); };
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(W, 0) + "\" height=\"" +
       fixed(H, 0) + "\" viewBox=\"0 0 " + fixed(W, 2) + " " + fixed(H, 2) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + fixed(W, 2) + "\" height=\"" + fixed(H, 2) +
       "\" fill=\"#ffffff\"/>\n";
  o += "<g fill=\"#333333\">\n";
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width();) {
      if (!map.occupied({x, y})) {
        ++x;
        continue;
      }
      int e = x;
      while (e < map.width() && map.occupied({e, y})) ++e;
      o += "<rect x=\"" + X(x * res) + "\" y=\"" + Y((y + 1) * res) + "\" width=\"" +
           fixed((e - x) * res * s, 2) + "\" height=\"" + fixed(res * s, 2) + "\"/>\n";
      x = e;
    }
  }
  o += "</g>\n";

  for (const auto& poly : opt.cells) {
    if (poly.empty()) continue;
    o += "<polygon fill=\"#9ecae1\" fill-opacity=\"0.3\" stroke=\"#3182bd\" points=\"";
    for (size_t k = 0; k < poly.size(); ++k)
      o += (k ? " " : "") + X(poly[k].x) + "," + Y(poly[k].y);
    o += "\"/>\n";
  }

  std::map<int, std::vector<const TrajectoryRecord*>> by_agent;
  for (const auto& r : trajectory) by_agent[r.agent].push_back(&r);
  size_t color = 0;
  for (const auto& [id, recs] : by_agent) {
    const char* c = palette[color++ % 10];
    o += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"2\" points=\"";
    for (size_t k = 0; k < recs.size(); ++k) o += (k ? " " : "") + X(recs[k]->x) + "," + Y(recs[k]->y);
    o += "\"/>\n";
    if (opt.agent_radius > 0.0) {
      const auto* last = recs.back();
      const char* stroke = last->status == AgentStatus::Collided ? "#ff0000" : "#000000";
      o += "<circle cx=\"" + X(last->x) + "\" cy=\"" + Y(last->y) + "\" r=\"" +
           fixed(opt.agent_radius * s, 2) + "\" fill=\"" + c + "\" fill-opacity=\"0.5\" stroke=\"" +
           stroke + "\"/>\n";
    }
  }
  o += "</svg>\n";
  return o;
}

}  // namespace latnav
