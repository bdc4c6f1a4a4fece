#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latnav/latnav.hpp"

namespace fs = std::filesystem;
using namespace latnav;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnomaly = 1;
constexpr int kExitInput = 2;

int cmdRun(const std::string& path, const std::string& out_dir, std::optional<std::uint64_t> seed,
           std::optional<std::string> mode_name, bool quiet) {
  Scenario sc = loadScenario(path);
  if (seed) sc.params.seed = *seed;
  if (mode_name) sc.params.applyMode(parseMode(*mode_name));
  const Mode mode = sc.params.mode();
  const auto t0 = std::chrono::steady_clock::now();
  Simulation sim(sc);
  EpisodeResult r = sim.run();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir + ": " + ec.message());
  writeFile((fs::path(out_dir) / "trajectory.csv").string(), trajectoryCsv(r.trajectory));
  writeFile((fs::path(out_dir) / "metrics.json").string(), metricsJson(r.metrics, sc.name, mode));
  writeFile((fs::path(out_dir) / "reservations.csv").string(), reservationCsv(r.reservations));

  const Metrics& m = r.metrics;
  if (!quiet)
    std::cout << sc.name << " [" << toString(mode) << "] agents=" << m.agents
              << " reached=" << m.reached << " collided=" << m.collided
              << " deadlocked=" << m.deadlocked << " SR=" << m.sr << " steps=" << m.steps
              << " avg_len=" << m.avg_path_length << " (" << secs << " s)\n";
  const bool clean = m.reached == m.agents && m.collision_events == 0 && m.exclusion_violations == 0;
  return clean ? kExitOk : kExitAnomaly;
}

int cmdValidate(const std::string& path) {
  Scenario sc = loadScenario(path);
  Simulation sim(sc);
  std::cout << "ok: " << sc.agents.size() << " agents, " << sc.corridors.size()
            << " corridors, step budget " << sim.budget() << "\n";
  return kExitOk;
}

int cmdRender(const std::string& traj_path, const std::string& scenario_path,
              const std::string& out, std::optional<int> cells_step) {
  Scenario sc = loadScenario(scenario_path);
  const auto traj = parseTrajectoryCsv(readFile(traj_path));
  SvgOptions opt;
  opt.agent_radius = sc.agentRadius();
  if (cells_step) {
    std::vector<Vec2> pos;
    for (const auto& r : traj)
      if (r.step == *cells_step) pos.push_back({r.x, r.y});
    const Vec2 hi{sc.map.width() * sc.map.resolution(), sc.map.height() * sc.map.resolution()};
    for (size_t i = 0; i < pos.size(); ++i) {
      std::vector<Vec2> others;
      for (size_t j = 0; j < pos.size(); ++j)
        if (j != i) others.push_back(pos[j]);
      opt.cells.push_back(cellPolygon(computeBvc(pos[i], opt.agent_radius, others), {0, 0}, hi));
    }
  }
  writeFile(out, renderSvg(sc.map, traj, opt));
  return kExitOk;
}

int cmdPrimitives(int headings, double turn_radius, double resolution) {
  std::cout << serializePrimitives(buildPrimitives(headings, turn_radius, resolution));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latnav: decentralized multi-agent lattice navigation"};
  app.require_subcommand(1);

  std::string scenario, out_dir, traj;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> cells_step;
  bool quiet = false;
  int headings = 8;
  double turn_radius = 0.2, resolution = 0.1;

  auto* run = app.add_subcommand("run", "Run one episode and write logs");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--seed", seed, "Seed override");
  run->add_option("--mode", mode, "full | baseline | no-corridors")
      ->check(CLI::IsMember({"full", "baseline", "no-corridors"}));
  run->add_flag("-q,--quiet", quiet, "No summary line");

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario, "Scenario file")->required();

  auto* render = app.add_subcommand("render", "Render a trajectory log as SVG");
  render->add_option("trajectory", traj, "Trajectory CSV")->required();
  render->add_option("scenario", scenario, "Scenario file")->required();
  render->add_option("--out", out_dir, "Output SVG path")->required();
  render->add_option("--cells-at", cells_step, "Overlay buffered Voronoi cells at this step");

  auto* prims = app.add_subcommand("gen-primitives", "Print the motion primitive set");
  prims->add_option("--headings", headings, "8 or 16")->check(CLI::IsMember({8, 16}));
  prims->add_option("--turn-radius", turn_radius, "Minimum turning radius (m)");
  prims->add_option("--resolution", resolution, "Cell size (m)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*run) return cmdRun(scenario, out_dir, seed, mode, quiet);
    if (*validate) return cmdValidate(scenario);
    if (*render) return cmdRender(traj, scenario, out_dir, cells_step);
    if (*prims) return cmdPrimitives(headings, turn_radius, resolution);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
