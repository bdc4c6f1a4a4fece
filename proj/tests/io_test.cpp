#include <gtest/gtest.h>

#include <functional>
#include <optional>

#include "support.hpp"

using namespace latnav;
using namespace latnav::testing;

namespace {

const char* kSmall = R"({
  "name": "small",
  "map": {"resolution": 0.1, "width": 30, "height": 20, "occupied": [[15, 0], [15, 1], [15, 2]]},
  "agents": [
    {"id": 0, "start": [0.55, 0.55, 0.0], "goal": [2.45, 1.05], "radius": 0.24},
    {"id": 1, "start": [2.45, 1.55, 3.141592653589793], "task": 7, "radius": 0.24}
  ],
  "tasks": [{"id": 7, "goal": [0.55, 1.55]}],
  "params": {"trigger_radius": 3.0, "weights": {"k_n": 0.5}}
})";

std::optional<ErrorKind> kindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

std::string messageOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ScenarioIo, ParsesTasksAndParams) {
  const Scenario s = loadScenarioText(kSmall);
  EXPECT_EQ(s.name, "small");
  EXPECT_FALSE(s.map_as_ascii);
  EXPECT_TRUE(s.map.occupied({15, 2}));
  EXPECT_FALSE(s.map.occupied({15, 3}));
  ASSERT_EQ(s.agents.size(), 2u);
  EXPECT_EQ(s.agents[1].goal, (Vec2{0.55, 1.55}));
  EXPECT_EQ(s.params.trigger_radius, 3.0);
  EXPECT_EQ(s.params.weights.k_n, 0.5);
  EXPECT_EQ(s.params.weights.k_c, CongestionWeights{}.k_c);
}

TEST(ScenarioIo, RoundTripIsLossless) {
  for (const char* name : {"minimal", "crossing", "head_on", "two_agents_two_corridors",
                           "two_corridor_swap_20"}) {
    const Scenario s = corpus(name);
    const std::string text = saveScenario(s);
    const Scenario back = loadScenarioText(text);
    EXPECT_EQ(back, s) << name;
    EXPECT_EQ(saveScenario(back), text) << name;
  }
  const Scenario s = loadScenarioText(kSmall);
  EXPECT_EQ(loadScenarioText(saveScenario(s)), s);
}

TEST(ScenarioIo, ParseErrorsCarryLocation) {
  EXPECT_EQ(kindOf([] { loadScenarioText("{\n  \"name\": \"x\",\n  oops\n}"); }), ErrorKind::ParseError);
  EXPECT_NE(messageOf([] { loadScenarioText("{\n  \"name\": \"x\",\n  oops\n}"); }).find("line 3"),
            std::string::npos);
  const std::string unknown = R"({"map": {"resolution": 0.1, "width": 5, "height": 5},
    "agents": [], "colour": 1})";
  EXPECT_NE(messageOf([&] { loadScenarioText(unknown); }).find("colour"), std::string::npos);
  const std::string bad_radius = R"({"map": {"resolution": 0.1, "width": 5, "height": 5},
    "agents": [{"id": 0, "start": [0.25, 0.25, 0], "goal": [0.25, 0.25], "radius": "big"}]})";
  EXPECT_NE(messageOf([&] { loadScenarioText(bad_radius); }).find("agents[0].radius"),
            std::string::npos);
}

TEST(ScenarioIo, ValidationErrors) {
  Scenario s = loadScenarioText(kSmall);
  s.agents[1].start = {0.75, 0.55, 0.0};
  EXPECT_EQ(kindOf([&] { validateScenario(s); }), ErrorKind::ValidationError);
  EXPECT_NE(messageOf([&] { validateScenario(s); }).find("overlapping"), std::string::npos);

  s = loadScenarioText(kSmall);
  s.corridors.push_back(makeCorridor("c", {{14, 1}, {15, 1}, {16, 1}}, 0.1));
  EXPECT_NE(messageOf([&] { validateScenario(s); }).find("occupied"), std::string::npos);

  s = loadScenarioText(kSmall);
  s.agents[0].goal = {1.55, 0.15};
  EXPECT_NE(messageOf([&] { validateScenario(s); }).find("goal"), std::string::npos);

  s = loadScenarioText(kSmall);
  s.agents[0].start.theta = 0.3;
  EXPECT_NE(messageOf([&] { validateScenario(s); }).find("heading"), std::string::npos);

  s = loadScenarioText(kSmall);
  s.agents[1].radius = 0.3;
  EXPECT_NE(messageOf([&] { validateScenario(s); }).find("radius"), std::string::npos);

  s = loadScenarioText(kSmall);
  s.agents[1].task = 99;
  EXPECT_EQ(kindOf([&] { validateScenario(s); }), ErrorKind::ValidationError);

  s = loadScenarioText(kSmall);
  s.params.replan_epsilon = 0.5;
  EXPECT_EQ(kindOf([&] { validateScenario(s); }), ErrorKind::ValidationError);
}

TEST(ScenarioIo, AsciiRowsTopIsHighestY) {
  const Scenario s = loadScenarioText(R"({"map": {"resolution": 0.5, "rows": ["#...", "...."]},
    "agents": [{"id": 0, "start": [1.25, 0.25, 0], "goal": [1.75, 0.25], "radius": 0.25}]})");
  EXPECT_TRUE(s.map_as_ascii);
  EXPECT_EQ(s.map.width(), 4);
  EXPECT_EQ(s.map.height(), 2);
  EXPECT_TRUE(s.map.occupied({0, 1}));
  EXPECT_FALSE(s.map.occupied({0, 0}));
}

TEST(Outputs, MinimalScenarioRunsToGoal) {
  const EpisodeResult r = runEpisode(corpus("minimal"));
  EXPECT_EQ(r.metrics.reached, 1);
  EXPECT_EQ(r.trajectory.front().step, 0);
  EXPECT_EQ(r.trajectory.back().status, AgentStatus::Reached);
  EXPECT_TRUE(r.reservations.empty());
}

TEST(Outputs, TrajectoryCsvRoundTrip) {
  const EpisodeResult r = runEpisode(corpus("crossing"));
  const std::string csv = trajectoryCsv(r.trajectory);
  EXPECT_EQ(csv.rfind("step,agent,x,y,theta,status\n", 0), 0u);
  const auto back = parseTrajectoryCsv(csv);
  ASSERT_EQ(back.size(), r.trajectory.size());
  for (size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].step, r.trajectory[k].step);
    EXPECT_EQ(back[k].agent, r.trajectory[k].agent);
    EXPECT_NEAR(back[k].x, r.trajectory[k].x, 5e-7);
    EXPECT_NEAR(back[k].theta, r.trajectory[k].theta, 5e-7);
    EXPECT_EQ(back[k].status, r.trajectory[k].status);
  }
  EXPECT_EQ(trajectoryCsv(back), csv);
  EXPECT_EQ(kindOf([] { parseTrajectoryCsv("step,agent\n"); }), ErrorKind::ParseError);
  EXPECT_NE(messageOf([] { parseTrajectoryCsv("step,agent,x,y,theta,status\n0,0,1,2,3,flying\n"); })
                .find("line 2"),
            std::string::npos);
}

TEST(Outputs, TrajectoryRowsAreFixedPrecision) {
  const std::vector<TrajectoryRecord> recs{{3, 1, 0.25, -0.0, 3.14159265, AgentStatus::Collided}};
  EXPECT_EQ(trajectoryCsv(recs),
            "step,agent,x,y,theta,status\n3,1,0.250000,0.000000,3.141593,collided\n");
}

TEST(Outputs, MetricsJsonFields) {
  const EpisodeResult r = runEpisode(corpus("crossing"));
  const auto j = nlohmann::json::parse(metricsJson(r.metrics, "crossing", Mode::Full));
  EXPECT_EQ(j["scenario"], "crossing");
  EXPECT_EQ(j["mode"], "full");
  EXPECT_EQ(j["agents"], 4);
  EXPECT_EQ(j["SR"], 1.0);
  EXPECT_EQ(j["per_agent"].size(), 4u);
  EXPECT_EQ(j["per_agent"][0]["status"], "reached");
  EXPECT_DOUBLE_EQ(j["avg_path_length"].get<double>(), r.metrics.avg_path_length);
}

TEST(Outputs, ReservationCsvRows) {
  const std::vector<ReservationEvent> ev{
      {0.0, 0, "upper", Direction::AtoB, Decision::GrantedNew, 3.5, 4.25},
      {0.1, 1, "upper", Direction::BtoA, Decision::Denied, 3.5, 4.25}};
  EXPECT_EQ(reservationCsv(ev),
            "time,agent,corridor,direction,decision,start_time,end_time\n"
            "0.000000,0,upper,a->b,granted_new,3.500000,4.250000\n"
            "0.100000,1,upper,b->a,denied,3.500000,4.250000\n");
}

TEST(Outputs, RepeatedRunsAreByteIdentical) {
  for (const char* name : {"crossing", "two_agents_one_corridor", "head_on"}) {
    const EpisodeResult a = runEpisode(corpus(name));
    const EpisodeResult b = runEpisode(corpus(name));
    EXPECT_EQ(trajectoryCsv(a.trajectory), trajectoryCsv(b.trajectory)) << name;
    EXPECT_EQ(metricsJson(a.metrics, name), metricsJson(b.metrics, name)) << name;
    EXPECT_EQ(reservationCsv(a.reservations), reservationCsv(b.reservations)) << name;
  }
}

TEST(Svg, EmptyTrajectoryDrawsOnlyTheMap) {
  GridMap m(4, 3, 1.0);
  m.setOccupied({1, 1}, true);
  const std::string svg = renderSvg(m, {});
  EXPECT_EQ(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("<rect x=\"50.00\" y=\"50.00\""), std::string::npos);
  EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
}

TEST(Svg, OnePolylinePerAgent) {
  const EpisodeResult r = runEpisode(corpus("crossing"));
  const std::string svg = renderSvg(corpus("crossing").map, r.trajectory);
  size_t count = 0;
  for (size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
    ++count;
  EXPECT_EQ(count, 4u);
}

TEST(Svg, MatchesGoldenFile) {
  GridMap m(6, 4, 0.5);
  m.setOccupied({2, 1}, true);
  m.setOccupied({3, 1}, true);
  const std::vector<TrajectoryRecord> traj{{0, 0, 0.25, 0.25, 0.0, AgentStatus::Active},
                                           {1, 0, 0.75, 0.25, 0.0, AgentStatus::Reached},
                                           {0, 1, 2.75, 1.75, 3.14, AgentStatus::Active},
                                           {1, 1, 2.25, 1.75, 3.14, AgentStatus::Collided}};
  SvgOptions opt;
  opt.agent_radius = 0.2;
  opt.cells.push_back({{0, 0}, {1, 0}, {1, 1}});
  const std::string golden = readFile(std::string(LATNAV_GOLDEN_DIR) + "/small.svg");
  EXPECT_EQ(renderSvg(m, traj, opt), golden);
}
