// Command-line driver: simulate | zmatrix | optimize | pattern.
// Exit codes: 0 success, 2 config error, 3 numerical error.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rispeec/errors.hpp"
#include "rispeec/mna.hpp"
#include "rispeec/pipeline.hpp"

namespace {

using namespace rispeec;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CommonArgs {
  std::string scenario_path;
};

ScenarioConfig load_config(const CommonArgs& args, RunReport& report,
                           std::vector<StageTiming>& timings) {
  const auto t0 = Clock::now();
  ScenarioConfig cfg = parse_scenario_file(args.scenario_path);
  timings.push_back({"parse", seconds_since(t0)});
  report.scenario_digest = cfg.digest;
  report.frequency_hz = cfg.scenario.frequency_hz;
  return cfg;
}

SimulationContext build_stage(const ScenarioConfig& cfg, RunReport& report,
                              std::vector<StageTiming>& timings) {
  const auto t0 = Clock::now();
  SimulationContext ctx = build_context(cfg);
  timings.push_back({"elements", seconds_since(t0)});
  report.num_branches = ctx.mesh.num_segments();
  report.num_nodes = ctx.mesh.num_nodes();
  return ctx;
}

int run_simulate(const CommonArgs& common, const std::string& loads_path,
                 const std::string& out_path, const std::string& dump_lp,
                 const std::string& dump_p) {
  RunReport report;
  ScenarioConfig cfg = load_config(common, report, report.timings);
  SimulationContext ctx = build_stage(cfg, report, report.timings);
  if (!dump_lp.empty()) write_matrix_entries_csv(dump_lp, ctx.pe.Lp);
  if (!dump_p.empty()) write_matrix_entries_csv(dump_p, ctx.pe.P);

  Eigen::VectorXcd loads;
  if (!loads_path.empty()) loads = read_loads_csv(loads_path);

  const auto t0 = Clock::now();
  const Eigen::VectorXcd currents = solve_currents(ctx, loads);
  report.timings.push_back({"solve", seconds_since(t0)});

  write_currents_csv(out_path, currents);
  std::cout << report.to_json() << std::endl;
  return 0;
}

int run_zmatrix(const CommonArgs& common, const std::string& out_path) {
  RunReport report;
  ScenarioConfig cfg = load_config(common, report, report.timings);
  SimulationContext ctx = build_stage(cfg, report, report.timings);

  const auto t0 = Clock::now();
  const PortNetwork net = extract_zsys(ctx.pe, ctx.mesh);
  report.timings.push_back({"zsys", seconds_since(t0)});

  write_zmatrix_csv(out_path, net.Zsys);
  std::cout << report.to_json() << std::endl;
  return 0;
}

int run_optimize(const CommonArgs& common, const std::string& constraint, double tol,
                 int max_sweeps, std::uint64_t seed, int baseline_count, double noise_ratio,
                 const std::string& out_path, const std::string& trace_path) {
  RunReport report;
  ScenarioConfig cfg = load_config(common, report, report.timings);
  SimulationContext ctx = build_stage(cfg, report, report.timings);

  auto t0 = Clock::now();
  const PortNetwork net = extract_zsys(ctx.pe, ctx.mesh);
  report.timings.push_back({"zsys", seconds_since(t0)});

  OptParams params;
  params.constraint = constraint == "passive" ? LoadConstraint::Passive
                                              : LoadConstraint::Reactive;
  params.tol = tol;
  params.max_sweeps = max_sweeps;
  params.zg = cfg.zg;
  params.zr = cfg.zr;
  params.noise_power_ratio = noise_ratio;

  t0 = Clock::now();
  const OptResult res = optimize(net, params);
  report.timings.push_back({"optimize", seconds_since(t0)});
  report.objective_before = res.objective_initial;
  report.objective_after = res.objective;
  report.sweeps_used = res.sweeps_used;

  write_loads_csv(out_path, res.loads);
  if (!trace_path.empty()) write_trace_csv(trace_path, res.trace);

  if (baseline_count > 0) {
    t0 = Clock::now();
    const double best_random =
        best_random_reactive_objective(net, params, baseline_count, seed);
    report.timings.push_back({"baseline", seconds_since(t0)});
    std::cerr << "random baseline: best |h|^2 over " << baseline_count << " draws = "
              << best_random << " (optimized " << res.objective << ")\n";
  }

  std::cout << report.to_json() << std::endl;
  return 0;
}

int run_pattern(const CommonArgs& common, const std::string& loads_path,
                const std::string& plane_name, std::optional<double> fixed_angle,
                int n_points, const std::string& out_path) {
  RunReport report;
  ScenarioConfig cfg = load_config(common, report, report.timings);
  SimulationContext ctx = build_stage(cfg, report, report.timings);

  Eigen::VectorXcd loads;
  if (!loads_path.empty()) loads = read_loads_csv(loads_path);

  const CutPlane plane = plane_name == "theta" ? CutPlane::Theta : CutPlane::Phi;
  const auto t0 = Clock::now();
  const PatternCut cut = scattered_pattern(ctx, loads, plane, fixed_angle, n_points);
  report.timings.push_back({"pattern", seconds_since(t0)});

  write_pattern_csv(out_path, cut);
  std::cout << report.to_json() << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin-wire PEEC solver for RIS-aided links"};
  app.require_subcommand(1);

  CommonArgs common;

  auto* sim = app.add_subcommand("simulate", "Solve branch currents for a scenario");
  std::string sim_loads, sim_out = "currents.csv", sim_dump_lp, sim_dump_p;
  sim->add_option("scenario", common.scenario_path, "Scenario config file")->required();
  sim->add_option("--loads", sim_loads, "RIS loads CSV (default: shorts)");
  sim->add_option("--out", sim_out, "Output currents CSV");
  sim->add_option("--dump-lp", sim_dump_lp, "Debug dump of the partial inductance matrix");
  sim->add_option("--dump-p", sim_dump_p, "Debug dump of the potential coefficient matrix");

  auto* zm = app.add_subcommand("zmatrix", "Extract the multiport impedance matrix");
  std::string zm_out = "zmatrix.csv";
  zm->add_option("scenario", common.scenario_path, "Scenario config file")->required();
  zm->add_option("--out", zm_out, "Output Z-matrix CSV");

  auto* opt = app.add_subcommand("optimize", "Optimize the RIS load reactances");
  std::string opt_constraint = "reactive", opt_out = "loads.csv", opt_trace;
  double opt_tol = 1e-6, opt_noise = 1.0;
  int opt_sweeps = 20, opt_baseline = 0;
  std::uint64_t opt_seed = 0;
  opt->add_option("scenario", common.scenario_path, "Scenario config file")->required();
  opt->add_option("--constraint", opt_constraint, "reactive|passive")
      ->check(CLI::IsMember({"reactive", "passive"}));
  opt->add_option("--tol", opt_tol, "Relative per-sweep improvement tolerance");
  opt->add_option("--max-sweeps", opt_sweeps, "Sweep cap");
  opt->add_option("--seed", opt_seed, "Seed for the random baseline");
  opt->add_option("--baseline", opt_baseline, "Random baseline draws (0 = off)");
  opt->add_option("--noise-ratio", opt_noise, "|h|^2 multiplier for rate reporting");
  opt->add_option("--out", opt_out, "Output loads CSV");
  opt->add_option("--trace", opt_trace, "Objective trace CSV");

  auto* pat = app.add_subcommand("pattern", "Scattered far-field pattern cut");
  std::string pat_loads, pat_plane = "phi", pat_out = "pattern.csv";
  int pat_points = 361;
  double pat_fixed = std::numeric_limits<double>::quiet_NaN();
  pat->add_option("scenario", common.scenario_path, "Scenario config file")->required();
  pat->add_option("--loads", pat_loads, "RIS loads CSV (default: shorts)");
  pat->add_option("--plane", pat_plane, "phi|theta")
      ->check(CLI::IsMember({"phi", "theta"}));
  pat->add_option("--fixed-angle", pat_fixed, "Fixed angle in degrees (default: Rx direction)");
  pat->add_option("--points", pat_points, "Number of angular sample points");
  pat->add_option("--out", pat_out, "Output pattern CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) return run_simulate(common, sim_loads, sim_out, sim_dump_lp, sim_dump_p);
    if (zm->parsed()) return run_zmatrix(common, zm_out);
    if (opt->parsed())
      return run_optimize(common, opt_constraint, opt_tol, opt_sweeps, opt_seed, opt_baseline,
                          opt_noise, opt_out, opt_trace);
    if (pat->parsed()) {
      std::optional<double> fixed;
      if (!std::isnan(pat_fixed)) fixed = pat_fixed;
      return run_pattern(common, pat_loads, pat_plane, fixed, pat_points, pat_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
