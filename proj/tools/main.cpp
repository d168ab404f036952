// Command-line front end: scenario runs, controller comparison, trace
// plotting, and one-off comfort-index evaluation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ceco/config.hpp"
#include "ceco/plot.hpp"
#include "ceco/sim.hpp"

namespace fs = std::filesystem;

namespace {

struct RunFlags {
  std::string config_path;
  std::string controller = "ceco-e";
  std::string out_dir;  // overrides config output_dir when nonempty
  bool timing = false;
  bool solver_log = false;
};

int fail(const std::string& message) {
  std::cerr << "error: " << message << '\n';
  return 1;
}

// Applies the CECO_SEED environment override and validates every section.
std::optional<ceco::ScenarioConfig> load_scenario(const std::string& path) {
  ceco::ScenarioConfig cfg;
  try {
    cfg = ceco::load_config(path);
  } catch (const ceco::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return std::nullopt;
  }
  if (const char* env_seed = std::getenv("CECO_SEED")) {
    try {
      cfg.seed = std::stoull(env_seed);
      cfg.plant.perturbation_seed = cfg.seed;
    } catch (const std::exception&) {
      std::cerr << "error: CECO_SEED is not an unsigned integer: " << env_seed
                << '\n';
      return std::nullopt;
    }
  }
  const auto problems = cfg.validate();
  if (!problems.empty()) {
    std::cerr << "error: invalid configuration " << path << '\n';
    for (const auto& p : problems) std::cerr << "  - " << p << '\n';
    return std::nullopt;
  }
  return cfg;
}

void write_solver_log(const std::string& path,
                      const std::vector<ceco::IterationRecord>& log) {
  std::ofstream out(path, std::ios::binary);
  out << "iter,f,violation,step_length,grad_norm\n";
  char buf[160];
  for (const auto& r : log) {
    std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g\n", r.iter,
                  r.objective, r.violation, r.step_length, r.grad_norm);
    out << buf;
  }
}

void write_outputs(const fs::path& dir, const std::string& kind_name,
                   const ceco::SimTrace& trace, const ceco::MetricsReport& metrics,
                   bool timing) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / ("trace_" + kind_name + ".csv"), std::ios::binary);
    ceco::write_trace_csv(out, trace, timing);
  }
  {
    std::ofstream out(dir / ("metrics_" + kind_name + ".json"), std::ios::binary);
    ceco::write_metrics_json(out, metrics, timing);
  }
}

int cmd_run(const RunFlags& flags) {
  const auto kind = ceco::controller_kind_from_string(flags.controller);
  if (!kind) {
    return fail("unknown controller '" + flags.controller +
                "' (expected baseline|ceco-e|ceco-c|ceco-ioch)");
  }
  const auto cfg = load_scenario(flags.config_path);
  if (!cfg) return 1;

  const fs::path out_dir = flags.out_dir.empty() ? cfg->output_dir : flags.out_dir;
  try {
    const ceco::DriveCycle cycle = ceco::load_cycle(cfg->cycle_path, cfg->mpc.ts);
    ceco::MpcModel model = cfg->mpc_model();
    std::vector<ceco::IterationRecord> solver_log;
    const ceco::SimTrace trace = ceco::run_closed_loop(
        *kind, cycle, cfg->plant, model, cfg->bounds,
        flags.solver_log ? &solver_log : nullptr);
    const ceco::MetricsReport metrics = ceco::compute_metrics(trace);
    write_outputs(out_dir, to_string(*kind), trace, metrics, flags.timing);
    if (flags.solver_log) {
      write_solver_log((out_dir / ("solver_log_" + std::string(to_string(*kind)) +
                                   ".csv")).string(),
                       solver_log);
    }
    std::cout << to_string(*kind) << ": e_tot=" << metrics.e_tot_j / 1000.0
              << " kJ, i_pmv=" << metrics.i_pmv
              << ", otc_violation=" << metrics.otc_violation_pct
              << "%, mean_solve=" << metrics.mean_solve_time_s * 1000.0
              << " ms\n";
  } catch (const ceco::SimAbortError& e) {
    write_outputs(out_dir, to_string(*kind), e.partial_trace(),
                  ceco::compute_metrics(e.partial_trace()), flags.timing);
    return fail(e.what());
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return 0;
}

int cmd_compare(const RunFlags& flags) {
  const auto cfg = load_scenario(flags.config_path);
  if (!cfg) return 1;
  const fs::path out_dir = flags.out_dir.empty() ? cfg->output_dir : flags.out_dir;
  try {
    const ceco::DriveCycle cycle = ceco::load_cycle(cfg->cycle_path, cfg->mpc.ts);
    const auto rows =
        ceco::compare_controllers(cycle, cfg->plant, cfg->mpc_model(), cfg->bounds);
    std::cout << ceco::format_comparison_table(rows);
    fs::create_directories(out_dir);
    for (const auto& row : rows) {
      write_outputs(out_dir, to_string(row.kind), row.trace, row.metrics,
                    flags.timing);
      if (row.error) {
        std::cerr << to_string(row.kind) << " failed: " << *row.error << '\n';
      }
    }
    int rc = 0;
    for (const auto& row : rows) {
      if (row.error) rc = 1;
    }
    return rc;
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

int cmd_plot(const std::string& trace_path, const std::string& out_dir) {
  try {
    std::ifstream in(trace_path);
    if (!in) return fail("cannot open trace " + trace_path);
    const ceco::SimTrace trace = ceco::read_trace_csv(in, trace_path);
    const auto files = ceco::write_trace_plots(trace, out_dir);
    for (const auto& f : files) std::cout << f << '\n';
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return 0;
}

struct PmvFlags {
  double t_cab = 26.0;
  double t_ain = 10.0;
  double t_int = 28.0;
  double m_bl = 0.1;
  double w_rad = 0.0;
  std::string config_path;
};

int cmd_pmv_eval(const PmvFlags& flags) {
  ceco::OccupantParams occ;
  if (!flags.config_path.empty()) {
    const auto cfg = load_scenario(flags.config_path);
    if (!cfg) return 1;
    occ = cfg->occupant;
  }
  const double y = ceco::pmv_modified(flags.t_cab, flags.t_ain, flags.t_int,
                                      flags.m_bl, flags.w_rad, occ);
  std::cout << "y_pmv = " << ceco::clamp_pmv_for_report(y) << " ("
            << ceco::sensation_level(y) << ")\n";
  std::cout << "raw = " << y << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicle A/C energy-and-comfort optimizing control simulator"};
  app.require_subcommand(0, 1);

  bool dump_defaults = false;
  app.add_flag("--dump-default-config", dump_defaults,
               "Print the default scenario configuration and exit");

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one controller over the cycle");
  run->add_option("--config", run_flags.config_path, "Scenario config file")
      ->required();
  run->add_option("--controller", run_flags.controller,
                  "baseline|ceco-e|ceco-c|ceco-ioch");
  run->add_option("--out", run_flags.out_dir, "Output directory override");
  run->add_flag("--timing", run_flags.timing,
                "Persist measured solve times (breaks byte-reproducibility)");
  run->add_flag("--solver-log", run_flags.solver_log,
                "Write per-iteration solver CSV next to the trace");

  RunFlags cmp_flags;
  auto* cmp = app.add_subcommand("compare", "Run all four controllers");
  cmp->add_option("--config", cmp_flags.config_path, "Scenario config file")
      ->required();
  cmp->add_option("--out", cmp_flags.out_dir, "Output directory override");
  cmp->add_flag("--timing", cmp_flags.timing,
                "Persist measured solve times (breaks byte-reproducibility)");

  std::string trace_path, plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "Render SVG panels from a trace CSV");
  plot->add_option("--trace", trace_path, "Trace CSV file")->required();
  plot->add_option("--out", plot_out, "Directory for the SVG files");

  PmvFlags pmv_flags;
  auto* pmv = app.add_subcommand("pmv", "Comfort-model utilities");
  auto* eval = pmv->add_subcommand("eval", "Evaluate the comfort index once");
  eval->add_option("--t-cab", pmv_flags.t_cab, "Cabin air temperature [C]");
  eval->add_option("--t-ain", pmv_flags.t_ain, "Vent air temperature [C]");
  eval->add_option("--t-int", pmv_flags.t_int, "Interior temperature [C]");
  eval->add_option("--m-bl", pmv_flags.m_bl, "Blower mass flow [kg/s]");
  eval->add_option("--w-rad", pmv_flags.w_rad,
                   "Effective solar load on the occupant [W/m^2]");
  eval->add_option("--config", pmv_flags.config_path,
                   "Take occupant parameters from this scenario config");

  CLI11_PARSE(app, argc, argv);

  if (dump_defaults) {
    ceco::dump_config(std::cout, ceco::ScenarioConfig{});
    return 0;
  }
  if (*run) return cmd_run(run_flags);
  if (*cmp) return cmd_compare(cmp_flags);
  if (*plot) return cmd_plot(trace_path, plot_out);
  if (*pmv) {
    if (*eval) return cmd_pmv_eval(pmv_flags);
    std::cerr << "error: pmv requires the eval subcommand\n";
    return 1;
  }
  std::cout << app.help();
  return 0;
}
