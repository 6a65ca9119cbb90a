#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "manifest.hpp"
#include "terranav/ascii_grid.hpp"
#include "terranav/costmap.hpp"
#include "terranav/geobench.hpp"
#include "terranav/planner.hpp"
#include "terranav/scenario.hpp"
#include "terranav/simworld.hpp"

namespace fs = std::filesystem;
using namespace terranav;

namespace {

enum Exit { kOk = 0, kBadInput = 2, kFailed = 3, kIo = 4 };

struct BadInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw BadInput(std::string(what) + " not found: " + p.string());
}

template <class F>
void writing(const fs::path& dir, F&& f) {
  try {
    fs::create_directories(dir);
    f();
  } catch (const fs::filesystem_error& e) {
    throw IoFailure(e.what());
  } catch (const std::runtime_error& e) {
    throw IoFailure(e.what());
  }
}

planner::Waypoint parse_point(const std::string& s, const char* what) {
  std::istringstream in(s);
  double x, y;
  char comma;
  if (!(in >> x >> comma >> y) || comma != ',' || !(in >> std::ws).eof()) {
    throw BadInput(std::string(what) + " must be 'x,y', got '" + s + "'");
  }
  return {x, y};
}

std::string fmt(double v, int prec = 3) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(prec) << v;
  return o.str();
}

void write_path(const fs::path& p, const std::vector<planner::Waypoint>& wps) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << std::setprecision(10) << "x,y\n";
  for (const auto& w : wps) out << w[0] << ',' << w[1] << '\n';
}

struct SimulateArgs {
  std::string scenario, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  bool profile = false;
};

int run_simulate(const SimulateArgs& a) {
  require_file(a.scenario, "scenario");
  sim::ScenarioConfig cfg = sim::load_scenario(a.scenario);
  if (a.seed) {
    cfg.seed = *a.seed;
    cfg.terrain.seed = *a.seed;
  }
  if (a.duration) cfg.duration = *a.duration;
  cfg.validate();
  const auto rep = sim::run_loop(cfg, {a.profile});
  writing(a.out, [&] {
    sim::write_report(rep, a.out);
    cli::Manifest m{"simulate", {{"scenario", a.scenario}}, cfg.seed, {a.scenario}};
    if (a.duration) m.args["duration"] = fmt(*a.duration);
    if (!cfg.weights.empty()) m.inputs.push_back(cfg.weights);
    cli::write_manifest(a.out, m);
  });
  std::cout << "outcome: " << sim::outcome_name(rep.outcome);
  if (rep.outcome == sim::Outcome::Recommendation) std::cout << " (" << decision::cause_name(rep.recommendation_cause) << ')';
  std::cout << "\nsim time: " << fmt(rep.sim_time, 2) << " s, plans: " << rep.plans.size()
            << ", events: " << rep.events.size() << "\nreport: " << a.out << '\n';
  if (!sim::meets_expectation(rep, cfg)) {
    std::cerr << "run did not meet its expectation (" << sim::outcome_name(rep.outcome) << ")\n";
    return kFailed;
  }
  return kOk;
}

struct PlanArgs {
  std::string costmap, meta, start, goal, out, preset = "standard", format = "table";
  std::optional<double> wt;
  bool compare = false;
  bool prune = false;
};

int run_plan(const PlanArgs& a) {
  require_file(a.costmap, "costmap");
  const fs::path meta = a.meta.empty() ? costmap::sidecar_path(a.costmap) : fs::path(a.meta);
  require_file(meta, "costmap metadata");
  const auto preset = planner::preset_from_name(a.preset);
  if (!preset) throw BadInput("unknown preset '" + a.preset + "' (standard|offline)");
  if (a.format != "table" && a.format != "csv") throw BadInput("format must be table or csv");
  auto cfg = planner::PlannerConfig::preset(*preset);
  if (a.wt) cfg.w_t = *a.wt;
  const auto world = costmap::load_costmap(a.costmap, meta);
  const auto start = parse_point(a.start, "--start");
  const auto goal = parse_point(a.goal, "--goal");

  std::vector<std::tuple<std::string, double, planner::PlanResult>> rows;
  double dist_pct = 0.0, terrain_pct = 0.0;
  if (a.compare) {
    auto c = planner::compare(world, start, goal, cfg);
    if (!c.comparison) {
      std::cerr << "no plan: " << planner::failure_name(c.cause) << '\n';
      return kFailed;
    }
    dist_pct = c.comparison->distance_increase_pct;
    terrain_pct = c.comparison->terrain_reduction_pct;
    rows.emplace_back("baseline", 0.0, c.comparison->baseline);
    rows.emplace_back(std::string(planner::preset_name(*preset)), cfg.w_t, c.comparison->aware);
  } else {
    auto r = planner::plan(world, start, goal, cfg);
    if (!r.ok()) {
      std::cerr << "no plan: " << planner::failure_name(r.cause) << '\n';
      return kFailed;
    }
    rows.emplace_back(std::string(planner::preset_name(*preset)), cfg.w_t, *r.result);
  }
  if (a.prune) {
    for (auto& [label, w, r] : rows) {
      auto pc = cfg;
      pc.w_t = w;
      r = planner::prune_line_of_sight(r, world, pc);
    }
  }

  // Every row's terrain cost uses the preset weight.
  std::ostringstream table;
  if (a.format == "csv") {
    table << "plan,w_t,distance_m,terrain_cost,waypoints,g_total\n";
    for (const auto& [label, w, r] : rows) {
      table << label << ',' << w << ',' << fmt(r.distance_total) << ',' << fmt(cfg.w_t * r.terrain_exposure) << ','
            << r.waypoints.size() << ',' << fmt(r.g_total) << '\n';
    }
    if (a.compare) table << "delta,," << fmt(dist_pct, 1) << "%," << fmt(-terrain_pct, 1) << "%,,\n";
  } else {
    table << std::left << std::setw(10) << "plan" << std::right << std::setw(8) << "w_t" << std::setw(14)
          << "distance_m" << std::setw(14) << "terrain_cost" << std::setw(11) << "waypoints" << '\n';
    for (const auto& [label, w, r] : rows) {
      table << std::left << std::setw(10) << label << std::right << std::setw(8) << fmt(w, 1) << std::setw(14)
            << fmt(r.distance_total) << std::setw(14) << fmt(cfg.w_t * r.terrain_exposure) << std::setw(11)
            << r.waypoints.size() << '\n';
    }
    if (a.compare) {
      table << "distance: " << (dist_pct >= 0 ? "+" : "") << fmt(dist_pct, 1) << "%, terrain cost: "
            << (terrain_pct >= 0 ? "-" : "+") << fmt(std::abs(terrain_pct), 1) << "%\n";
    }
  }
  std::cout << table.str();

  writing(a.out, [&] {
    for (const auto& [label, w, r] : rows) write_path(fs::path(a.out) / ("path_" + label + ".csv"), r.waypoints);
    std::ofstream cmp(fs::path(a.out) / "comparison.csv");
    if (!cmp) throw std::runtime_error("cannot write comparison.csv");
    cmp << "plan,w_t,distance_m,terrain_cost,distance_delta_pct,terrain_delta_pct\n";
    for (const auto& [label, w, r] : rows) {
      const bool base = a.compare && label == "baseline";
      cmp << label << ',' << w << ',' << fmt(r.distance_total, 6) << ',' << fmt(cfg.w_t * r.terrain_exposure, 6) << ','
          << (base || !a.compare ? "0" : fmt(dist_pct, 3)) << ',' << (base || !a.compare ? "0" : fmt(-terrain_pct, 3))
          << '\n';
    }
    cmp.close();
    cli::Manifest m{"plan", {{"start", a.start}, {"goal", a.goal}, {"preset", a.preset}}, 0, {a.costmap, meta}};
    if (a.wt) m.args["wt"] = fmt(*a.wt);
    m.args["compare"] = a.compare ? "true" : "false";
    m.args["prune"] = a.prune ? "true" : "false";
    cli::write_manifest(a.out, m);
  });
  return kOk;
}

struct ConvertArgs {
  std::string input, out;
  double t_high = 0.85, t_crit = 0.6;
};

int run_convert(const ConvertArgs& a) {
  require_file(a.input, "traversability grid");
  costmap::CostmapConfig cfg;
  cfg.t_high = a.t_high;
  cfg.t_crit = a.t_crit;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
  const auto grid = read_ascii_grid(fs::path(a.input));
  const auto world = costmap::convert_layer(import_layer(grid, Layer::Traversability), cfg);
  writing(a.out, [&] {
    costmap::render_costmap(world, fs::path(a.out) / "costmap.pgm");
    cli::write_manifest(a.out, {"convert", {{"t_high", fmt(a.t_high)}, {"t_crit", fmt(a.t_crit)}}, 0, {a.input}});
  });
  std::cout << "costmap " << world.cols() << "x" << world.rows() << " written to " << a.out << '\n';
  return kOk;
}

struct GeobenchArgs {
  std::string mode, input, reference, out;
  double rate = 100.0;
  double bucket = 0.5;
  int per_decade = 10;
};

int run_geobench(const GeobenchArgs& a) {
  require_file(a.input, "input");
  if (a.mode == "c2c") {
    if (a.reference.empty()) throw BadInput("c2c needs --reference");
    require_file(a.reference, "reference");
    const auto cloud = geobench::read_xyz(fs::path(a.input));
    const auto ref = geobench::read_xyz(fs::path(a.reference));
    if (cloud.empty() || ref.empty()) throw BadInput("empty point cloud");
    const auto mesh = geobench::delaunay_2_5d(ref);
    const auto stats = geobench::cloud_to_mesh_stats(cloud, mesh, a.bucket);
    geobench::write_stats_summary(std::cout, stats);
    writing(a.out, [&] {
      std::ofstream out(fs::path(a.out) / "deviation.csv");
      if (!out) throw std::runtime_error("cannot write deviation.csv");
      geobench::write_stats_csv(out, stats);
      out.close();
      cli::write_manifest(a.out, {"geobench", {{"mode", "c2c"}, {"bucket_cm", fmt(a.bucket)}}, 0,
                                  {a.input, a.reference}});
    });
  } else if (a.mode == "allan") {
    const auto series = geobench::read_series(a.input);
    if (series.size() < 2) throw BadInput("series needs at least two samples");
    const auto taus = geobench::log_spaced_taus(series.size(), a.rate, a.per_decade);
    const auto res = geobench::allan_deviation(series, a.rate, taus);
    for (double t : res.omitted) std::cerr << "warning: tau " << t << " s omitted, series too short\n";
    if (res.curve.empty()) throw BadInput("series too short for any tau");
    std::cout << "taus: " << res.curve.size() << ", min deviation: ";
    double best = res.curve.front().deviation, best_tau = res.curve.front().tau;
    for (const auto& p : res.curve) {
      if (p.deviation < best) {
        best = p.deviation;
        best_tau = p.tau;
      }
    }
    std::cout << best << " at tau " << best_tau << " s\n";
    writing(a.out, [&] {
      std::ofstream out(fs::path(a.out) / "allan.csv");
      if (!out) throw std::runtime_error("cannot write allan.csv");
      geobench::write_allan_csv(out, res);
      out.close();
      cli::write_manifest(a.out, {"geobench", {{"mode", "allan"}, {"rate", fmt(a.rate)}}, 0, {a.input}});
    });
  } else {
    throw BadInput("mode must be c2c or allan");
  }
  return kOk;
}

struct RenderArgs {
  std::string scenario, out;
  double resolution = 0.1;
};

int run_render(const RenderArgs& a) {
  require_file(a.scenario, "scenario");
  if (!(a.resolution > 0.0)) throw BadInput("resolution must be positive");
  const auto cfg = sim::load_scenario(a.scenario);
  const sim::Terrain terrain(cfg.terrain);
  const auto truth = sim::render_truth(terrain, a.resolution);
  const auto world = costmap::convert_layer(truth, cfg.costmap);
  writing(a.out, [&] {
    write_ascii_grid(fs::path(a.out) / "traversability.asc", export_layer(truth, Layer::Traversability));
    write_ascii_grid(fs::path(a.out) / "elevation.asc", export_layer(truth, Layer::Elevation));
    costmap::render_costmap(world, fs::path(a.out) / "costmap.pgm");
    cli::write_manifest(a.out, {"render", {{"resolution", fmt(a.resolution)}}, cfg.seed, {a.scenario}});
  });
  std::cout << "rendered " << world.cols() << "x" << world.rows() << " cells to " << a.out << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"terranav: traversability-aware navigation engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TERRANAV_VERSION);

  SimulateArgs sa;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a closed-loop scenario and write a report");
  sim_cmd->add_option("--scenario", sa.scenario, "Scenario YAML file")->required();
  sim_cmd->add_option("--out", sa.out, "Report directory")->required();
  sim_cmd->add_option("--seed", sa.seed, "Seed override");
  sim_cmd->add_option("--duration", sa.duration, "Time budget override (s)");
  sim_cmd->add_flag("--profile", sa.profile, "Write per-stage wall-clock timing");

  PlanArgs pa;
  auto* plan_cmd = app.add_subcommand("plan", "Plan on a stored costmap");
  plan_cmd->add_option("--costmap", pa.costmap, "P2 costmap image")->required();
  plan_cmd->add_option("--meta", pa.meta, "Metadata YAML (defaults to the sidecar)");
  plan_cmd->add_option("--start", pa.start, "Start x,y in meters")->required();
  plan_cmd->add_option("--goal", pa.goal, "Goal x,y in meters")->required();
  plan_cmd->add_option("--preset", pa.preset, "standard or offline");
  plan_cmd->add_option("--wt", pa.wt, "Terrain weight override");
  plan_cmd->add_flag("--compare", pa.compare, "Also plan with w_t = 0 and tabulate the difference");
  plan_cmd->add_flag("--prune", pa.prune, "Apply line-of-sight pruning");
  plan_cmd->add_option("--format", pa.format, "table or csv");
  plan_cmd->add_option("--out", pa.out, "Output directory")->required();

  ConvertArgs ca;
  auto* conv_cmd = app.add_subcommand("convert", "Convert a traversability grid to a costmap");
  conv_cmd->add_option("--input", ca.input, "Traversability ASCII grid")->required();
  conv_cmd->add_option("--out", ca.out, "Output directory")->required();
  conv_cmd->add_option("--t-high", ca.t_high, "Free-space threshold");
  conv_cmd->add_option("--t-crit", ca.t_crit, "Critical threshold");

  GeobenchArgs ga;
  auto* geo_cmd = app.add_subcommand("geobench", "Cloud-to-mesh deviation or Allan deviation");
  geo_cmd->add_option("--mode", ga.mode, "c2c or allan")->required();
  geo_cmd->add_option("--input", ga.input, "Query cloud (x y z) or series (one per line)")->required();
  geo_cmd->add_option("--reference", ga.reference, "Reference cloud for c2c");
  geo_cmd->add_option("--rate", ga.rate, "Series sample rate (Hz)");
  geo_cmd->add_option("--bucket", ga.bucket, "Histogram bucket width (cm)");
  geo_cmd->add_option("--per-decade", ga.per_decade, "Allan taus per decade");
  geo_cmd->add_option("--out", ga.out, "Output directory")->required();

  RenderArgs ra;
  auto* render_cmd = app.add_subcommand("render", "Render a scenario's reference maps");
  render_cmd->add_option("--scenario", ra.scenario, "Scenario YAML file")->required();
  render_cmd->add_option("--resolution", ra.resolution, "Cell size (m)");
  render_cmd->add_option("--out", ra.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (*sim_cmd) return run_simulate(sa);
    if (*plan_cmd) return run_plan(pa);
    if (*conv_cmd) return run_convert(ca);
    if (*geo_cmd) return run_geobench(ga);
    if (*render_cmd) return run_render(ra);
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
