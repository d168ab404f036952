#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ceco/config.hpp"
#include "ceco/plot.hpp"
#include "ceco/sim.hpp"

using namespace ceco;
namespace fs = std::filesystem;

namespace {

#ifndef CECO_CLI_PATH
#define CECO_CLI_PATH ""
#endif

std::string cli_path() { return CECO_CLI_PATH; }

// Runs the CLI with stdout/stderr captured into a file; returns exit code.
int run_cli(const std::string& args, const fs::path& capture) {
  const std::string cmd = "\"" + cli_path() + "\" " + args + " > " +
                          capture.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("ceco_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config defaults round-trip through dump and parse") {
  ScenarioConfig defaults;
  std::ostringstream out;
  dump_config(out, defaults);
  std::istringstream in(out.str());
  const ScenarioConfig back = parse_config(in, "dump");
  CHECK(back.validate().empty());
  CHECK(back.plant.ac.gamma3 == defaults.plant.ac.gamma3);
  CHECK(back.plant.ac.eta_speed_knots == defaults.plant.ac.eta_speed_knots);
  CHECK(back.plant.int_gain_rad == defaults.plant.int_gain_rad);
  CHECK(back.occupant.solar_fraction == defaults.occupant.solar_fraction);
  CHECK(back.bounds.ub_decay_tau == defaults.bounds.ub_decay_tau);
  CHECK(back.mpc.comfort_weight == defaults.mpc.comfort_weight);
  CHECK(back.solver.fd_step == defaults.solver.fd_step);
  CHECK(back.cycle_path == defaults.cycle_path);
  CHECK(back.seed == defaults.seed);
}

TEST_CASE("config parsing") {
  SUBCASE("values land in their sections") {
    std::istringstream in(
        "[ac]\n"
        "gamma3 = 0.21\n"
        "eta_speed_knots = 0:1, 12:1.1, 25:1.3\n"
        "[mpc]\n"
        "comfort_weight = 2e4  # inline comment\n"
        "[scenario]\n"
        "seed = 77\n");
    const ScenarioConfig cfg = parse_config(in, "inline");
    CHECK(cfg.plant.ac.gamma3 == doctest::Approx(0.21));
    REQUIRE(cfg.plant.ac.eta_speed_knots.size() == 3);
    CHECK(cfg.plant.ac.eta_speed_knots[1].first == doctest::Approx(12.0));
    CHECK(cfg.mpc.comfort_weight == doctest::Approx(2e4));
    CHECK(cfg.seed == 77);
    CHECK(cfg.plant.perturbation_seed == 77);  // scenario seed wins
  }

  SUBCASE("unknown key is a parse error with its line") {
    std::istringstream in("[ac]\ngamma9 = 1\n");
    try {
      parse_config(in, "bad");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("gamma9") != std::string::npos);
    }
  }

  SUBCASE("key before any section is rejected") {
    std::istringstream in("gamma1 = 0.1\n");
    CHECK_THROWS_AS(parse_config(in, "nosec"), ParseError);
  }

  SUBCASE("validation aggregates every offending field") {
    std::istringstream in(
        "[mpc]\ncomfort_weight = -1\n[solver]\ntol = -2\n[bounds]\nub_decay_tau = 0\n");
    const ScenarioConfig cfg = parse_config(in, "invalid");
    const auto problems = cfg.validate();
    REQUIRE(problems.size() >= 3);
    bool saw_weight = false, saw_tol = false, saw_tau = false;
    for (const auto& p : problems) {
      saw_weight = saw_weight || p.find("comfort_weight") != std::string::npos;
      saw_tol = saw_tol || p.find("tol") != std::string::npos;
      saw_tau = saw_tau || p.find("ub_decay_tau") != std::string::npos;
    }
    CHECK(saw_weight);
    CHECK(saw_tol);
    CHECK(saw_tau);
  }
}

TEST_CASE("trace plots") {
  const DriveCycle cycle = load_cycle("data/sc03_like_600s.csv", 5.0);
  PlantParams plant;
  MpcModel model;
  ComfortBoundsSpec bounds;
  const SimTrace tr =
      run_closed_loop(ControllerKind::kBaseline, cycle, plant, model, bounds);

  SUBCASE("four panels are written") {
    const fs::path dir = temp_dir("plots");
    const auto files = write_trace_plots(tr, dir.string());
    REQUIRE(files.size() == 4);
    for (const auto& f : files) {
      CHECK(fs::exists(f));
      const std::string svg = slurp(f);
      CHECK(svg.find("<svg") != std::string::npos);
      CHECK(svg.find("polyline") != std::string::npos);
    }
    // bounds appear dashed in the comfort panel
    const std::string pmv_svg = slurp(files[0]);
    CHECK(pmv_svg.find("stroke-dasharray") != std::string::npos);
  }

  SUBCASE("empty trace is rejected") {
    SimTrace empty;
    CHECK_THROWS_WITH_AS(write_trace_plots(empty, "/tmp"),
                         doctest::Contains("empty trace"), ValidationError);
  }
}

TEST_CASE("command line interface" * doctest::skip(cli_path().empty())) {
  const fs::path dir = temp_dir("cli");
  const fs::path cap = dir / "out.txt";

  SUBCASE("default config dump validates and runs") {
    REQUIRE(run_cli("--dump-default-config", cap) == 0);
    const ScenarioConfig cfg = load_config(cap.string());
    CHECK(cfg.validate().empty());
  }

  SUBCASE("run writes trace, metrics, and exits zero") {
    // short synthetic cycle keeps this smoke test quick
    const fs::path cycle = dir / "short.csv";
    {
      std::ofstream out(cycle);
      out << "t_s,v_mps,w_rad_wm2,t_amb_k\n";
      for (int t = 0; t <= 60; t += 5)
        out << t << ",5,800," << 308.15 << "\n";
    }
    const fs::path cfg_path = dir / "scenario.cfg";
    {
      ScenarioConfig cfg;
      cfg.cycle_path = cycle.string();
      cfg.output_dir = (dir / "out").string();
      std::ofstream out(cfg_path);
      dump_config(out, cfg);
    }
    REQUIRE(run_cli("run --config " + cfg_path.string() + " --controller ceco-e",
                    cap) == 0);
    CHECK(fs::exists(dir / "out" / "trace_ceco-e.csv"));
    CHECK(fs::exists(dir / "out" / "metrics_ceco-e.json"));

    SUBCASE("plot renders the four panels from the written trace") {
      REQUIRE(run_cli("plot --trace " + (dir / "out" / "trace_ceco-e.csv").string() +
                          " --out " + (dir / "plots").string(),
                      cap) == 0);
      CHECK(fs::exists(dir / "plots" / "pmv.svg"));
      CHECK(fs::exists(dir / "plots" / "cabin_temp.svg"));
      CHECK(fs::exists(dir / "plots" / "controls.svg"));
      CHECK(fs::exists(dir / "plots" / "powers.svg"));
    }

    SUBCASE("solver log is emitted on request") {
      REQUIRE(run_cli("run --config " + cfg_path.string() +
                          " --controller ceco-c --solver-log",
                      cap) == 0);
      const fs::path log = dir / "out" / "solver_log_ceco-c.csv";
      REQUIRE(fs::exists(log));
      const std::string head = slurp(log).substr(0, 40);
      CHECK(head.find("iter,f,violation,step_length,grad_norm") == 0);
    }
  }

  SUBCASE("invalid comfort weight fails naming the field") {
    const fs::path cfg_path = dir / "bad.cfg";
    {
      std::ofstream out(cfg_path);
      out << "[mpc]\ncomfort_weight = -5\n";
    }
    CHECK(run_cli("run --config " + cfg_path.string() + " --controller ceco-c",
                  cap) != 0);
    CHECK(slurp(cap).find("comfort_weight") != std::string::npos);
  }

  SUBCASE("pmv eval prints a value and a sensation label") {
    REQUIRE(run_cli("pmv eval --t-cab 26 --t-ain 10 --t-int 28 --m-bl 0.1 --w-rad 0",
                    cap) == 0);
    const std::string text = slurp(cap);
    CHECK(text.find("y_pmv = ") != std::string::npos);
  }

  SUBCASE("plot rejects an empty trace file") {
    const fs::path empty = dir / "empty.csv";
    {
      std::ofstream out(empty);
      out << kTraceCsvHeader << "\n";
    }
    CHECK(run_cli("plot --trace " + empty.string(), cap) != 0);
    CHECK(slurp(cap).find("empty trace") != std::string::npos);
  }
}
