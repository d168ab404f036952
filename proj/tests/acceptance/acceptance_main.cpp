// Acceptance suite: exercises the complete stack on the default scenario and
// prints one PASS/FAIL line per criterion. Exits nonzero if any criterion
// fails. Run from the repository root (the bundled cycle is resolved
// relative to it).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ceco/config.hpp"
#include "ceco/mpc.hpp"
#include "ceco/nlp_solver.hpp"
#include "ceco/sim.hpp"
#include "support/pmv_reference.hpp"

namespace fs = std::filesystem;
using namespace ceco;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Scenario {
  ScenarioConfig cfg;
  DriveCycle cycle;
};

Scenario load_default_scenario() {
  Scenario s;
  s.cycle = load_cycle(s.cfg.cycle_path, s.cfg.mpc.ts);
  return s;
}

// ---------------------------------------------------------------------------

void criterion_1_and_2(const Scenario& s,
                       std::vector<ComparisonRow>& rows_out) {
  const auto start = std::chrono::steady_clock::now();
  rows_out = compare_controllers(s.cycle, s.cfg.plant, s.cfg.mpc_model(), s.cfg.bounds);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double e_base = rows_out[0].metrics.e_tot_j;
  const double e_e = rows_out[1].metrics.e_tot_j;
  const double e_c = rows_out[2].metrics.e_tot_j;
  const double e_i = rows_out[3].metrics.e_tot_j;
  const double sav_e = 100.0 * (e_base - e_e) / e_base;
  const double sav_c = 100.0 * (e_base - e_c) / e_base;
  const double sav_i = 100.0 * (e_base - e_i) / e_base;

  const bool ordering = e_e < e_i && e_i <= e_c && e_c < e_base;
  const bool savings = sav_e >= 2.0 && sav_c >= 2.0 && sav_i >= 2.0;
  const bool runtime = elapsed <= 300.0;
  report(1, "energy ordering and savings", ordering && savings && runtime,
         fmt("e_tot kJ: e=%.1f ioch=%.1f c=%.1f base=%.1f; savings %%: %.1f/%.1f/%.1f; "
             "wall %.1fs",
             e_e / 1e3, e_i / 1e3, e_c / 1e3, e_base / 1e3, sav_e, sav_c, sav_i,
             elapsed));

  const double ipmv_e = rows_out[1].metrics.i_pmv;
  const double ipmv_c = rows_out[2].metrics.i_pmv;
  const double otc_base = rows_out[0].metrics.otc_violation_pct;
  const double otc_c = rows_out[2].metrics.otc_violation_pct;
  const double otc_i = rows_out[3].metrics.otc_violation_pct;
  const bool comfort = ipmv_c < ipmv_e && otc_c < otc_base && otc_i < otc_base;
  report(2, "comfort ordering", comfort,
         fmt("i_pmv c=%.1f < e=%.1f; otc %%: c=%.2f ioch=%.2f base=%.2f", ipmv_c,
             ipmv_e, otc_c, otc_i, otc_base));
}

void criterion_3(const Scenario& s) {
  // (a) zero-speed cycle: the tightening incentive vanishes and the
  // energy-priority and tightening controllers coincide
  DriveCycle still = s.cycle;
  for (auto& sm : still.samples) sm.v_veh = 0.0;
  const SimTrace tr_e = run_closed_loop(ControllerKind::kCecoE, still, s.cfg.plant,
                                        s.cfg.mpc_model(), s.cfg.bounds);
  const SimTrace tr_i = run_closed_loop(ControllerKind::kCecoIoch, still, s.cfg.plant,
                                        s.cfg.mpc_model(), s.cfg.bounds);
  double dm = 0.0, dsp = 0.0;
  for (std::size_t k = 0; k < tr_e.records.size(); ++k) {
    dm = std::max(dm, std::fabs(tr_e.records[k].control.m_bl -
                                tr_i.records[k].control.m_bl));
    dsp = std::max(dsp, std::fabs(tr_e.records[k].control.t_evap_sp -
                                  tr_i.records[k].control.t_evap_sp));
  }
  const bool match = dm <= s.cfg.solver.tol && dsp <= s.cfg.solver.tol * 100.0;

  // (b) default cycle: tightening concentrates on the efficient (fast) steps
  const SimTrace tr = run_closed_loop(ControllerKind::kCecoIoch, s.cycle, s.cfg.plant,
                                      s.cfg.mpc_model(), s.cfg.bounds);
  double hi = 0.0, lo = 0.0;
  int nhi = 0, nlo = 0;
  for (std::size_t k = 0; k < tr.records.size(); ++k) {
    if (s.cycle.samples[k].v_veh > 15.0) {
      hi += tr.records[k].mean_slack;
      ++nhi;
    } else {
      lo += tr.records[k].mean_slack;
      ++nlo;
    }
  }
  const double mean_hi = nhi > 0 ? hi / nhi : 0.0;
  const double mean_lo = nlo > 0 ? lo / nlo : 0.0;
  const bool contrast = nhi > 0 && nlo > 0 && mean_hi > mean_lo;

  report(3, "online constraint tightening mechanism", match && contrast,
         fmt("zero-speed max |d m_bl|=%.2e, |d sp|=%.2e; mean slack fast=%.4f > slow=%.4f",
             dm, dsp, mean_hi, mean_lo));
}

void criterion_4(const Scenario& s) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> tcab(15.0, 40.0);
  std::uniform_real_distribution<double> tain(3.0, 20.0);
  std::uniform_real_distribution<double> tint(15.0, 45.0);
  std::uniform_real_distribution<double> flow(0.05, 0.17);

  OccupantParams reduced = s.cfg.occupant;
  reduced.alpha1 = 1.0;
  reduced.alpha2 = 0.0;
  reduced.mech_power = 0.0;

  double max_reduction_err = 0.0;
  double max_oracle_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t_cab = tcab(rng);
    const double t_int = tint(rng);
    const double m_bl = flow(rng);
    const double t_ain = tain(rng);

    ComfortEnv env{t_cab, t_int, vent_air_velocity(m_bl, reduced), 0.0};
    const double y_mod = pmv_modified(t_cab, t_ain, t_int, m_bl, 0.0, reduced);
    const double y_orig = pmv_original(reduced, env);
    max_reduction_err = std::max(max_reduction_err, std::fabs(y_mod - y_orig));

    ceco_test::PmvRefInput ref;
    ref.met = reduced.metabolic_rate;
    ref.work = 0.0;
    ref.i_cl = reduced.clothing_insulation;
    ref.p_a = reduced.vapor_pressure;
    ref.t_a = env.t_a;
    ref.t_mr = env.t_mr;
    ref.v_air = env.v_air;
    max_oracle_err = std::max(max_oracle_err,
                              std::fabs(y_orig - ceco_test::pmv_reference(ref)));
  }
  report(4, "comfort-model equivalences", max_reduction_err <= 1e-12 && max_oracle_err <= 1e-9,
         fmt("reduction err %.2e (<=1e-12), oracle err %.2e (<=1e-9)",
             max_reduction_err, max_oracle_err));
}

void criterion_5(const Scenario& s) {
  bool ok = true;
  std::string detail;

  // analytic problems
  {
    NlpProblem p;
    p.dimension = 2;
    p.lower = {-5.0, -5.0};
    p.upper = {5.0, 5.0};
    p.objective = [](std::span<const double> z) {
      return (z[0] - 2.0) * (z[0] - 2.0) + (z[1] - 2.0) * (z[1] - 2.0);
    };
    p.num_constraints = 1;
    p.constraints = [](std::span<const double> z, std::span<double> g) {
      g[0] = z[0] + z[1] - 2.0;
    };
    const std::vector<double> z0 = {0.0, 0.0};
    const NlpSolution sol = solve(p, z0, {});
    const double err = std::max(std::fabs(sol.z_opt[0] - 1.0), std::fabs(sol.z_opt[1] - 1.0));
    ok = ok && err <= 1e-3;
    detail += fmt("kkt err %.1e; ", err);
  }
  {
    NlpProblem p;
    p.dimension = 3;
    p.lower = {2.0, -1.0, 0.5};
    p.upper = {5.0, 1.0, 2.0};
    p.objective = [](std::span<const double> z) { return z[0] + z[1] * z[1] + (z[2] - 1.0) * (z[2] - 1.0); };
    const std::vector<double> z0 = {4.0, 0.7, 0.6};
    const NlpSolution sol = solve(p, z0, {});
    const double err = std::max({std::fabs(sol.z_opt[0] - 2.0), std::fabs(sol.z_opt[1]),
                                 std::fabs(sol.z_opt[2] - 1.0)});
    ok = ok && err <= 1e-3;
    detail += fmt("box-lp err %.1e; ", err);
  }

  // gradient checks on the full receding-horizon objective
  const MpcModel model = s.cfg.mpc_model();
  const ACState x0{305.0, 284.0, 308.0, 312.0};
  PreviewWindow pv;
  for (int i = 0; i <= model.config.np; ++i) {
    pv.exogenous.push_back({10.0, 700.0, 308.15});
    pv.pmv_lb.push_back(-0.5);
    pv.pmv_ub.push_back(1.0);
  }
  const NlpProblem rollout = build_general_ocp(model, x0, pv);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> mb(0.06, 0.16);
  std::uniform_real_distribution<double> sp(276.5, 282.8);
  double max_grad_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> z(static_cast<std::size_t>(rollout.dimension));
    for (int i = 0; i < model.config.np; ++i) {
      z[static_cast<std::size_t>(i)] = mb(rng);
      z[static_cast<std::size_t>(model.config.np + i)] = sp(rng);
    }
    max_grad_err = std::max(max_grad_err, check_gradient(rollout, z, model.solver));
  }
  ok = ok && max_grad_err <= 1e-4;
  detail += fmt("rollout grad err %.1e; ", max_grad_err);

  // box respect across assorted solves
  double worst_box = 0.0;
  {
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
      NlpProblem p;
      p.dimension = 4;
      p.lower.assign(4, -1.0);
      p.upper.assign(4, 1.0);
      std::vector<double> center(4);
      for (auto& v : center) v = c(rng);
      p.objective = [center](std::span<const double> z) {
        double f = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
          const double d = z[i] - center[i];
          f += d * d;
        }
        return f;
      };
      const std::vector<double> z0 = {0.0, 0.0, 0.0, 0.0};
      const NlpSolution sol = solve(p, z0, {});
      for (std::size_t i = 0; i < 4; ++i) {
        worst_box = std::max(worst_box, p.lower[i] - sol.z_opt[i]);
        worst_box = std::max(worst_box, sol.z_opt[i] - p.upper[i]);
      }
    }
  }
  ok = ok && worst_box <= 1e-9;
  detail += fmt("box excess %.1e", worst_box);

  report(5, "solver correctness", ok, detail);
}

void criterion_6(const Scenario& s) {
  // weighted problem at zero weight == general problem
  MpcModel model = s.cfg.mpc_model();
  model.config.comfort_weight = 0.0;
  const ACState x0{304.0, 283.0, 306.0, 311.0};
  PreviewWindow pv;
  for (int i = 0; i <= model.config.np; ++i) {
    pv.exogenous.push_back({12.0, 650.0, 308.15});
    pv.pmv_lb.push_back(-0.5);
    pv.pmv_ub.push_back(1.2);
  }
  const NlpProblem general = build_general_ocp(model, x0, pv);
  const NlpProblem weighted = build_weighted_ocp(model, x0, pv);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> mb(0.05, 0.17);
  std::uniform_real_distribution<double> sp(276.15, 283.15);
  bool equal = true;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> z(static_cast<std::size_t>(general.dimension));
    for (int i = 0; i < model.config.np; ++i) {
      z[static_cast<std::size_t>(i)] = mb(rng);
      z[static_cast<std::size_t>(model.config.np + i)] = sp(rng);
    }
    equal = equal && general.objective(z) == weighted.objective(z);
  }

  // unperturbed plant with inert auxiliaries == the nominal two-map composition
  PlantParams pp = s.cfg.plant;
  pp.perturbation_fraction = 0.0;
  pp.int_gain_cab = 0.0;
  pp.int_gain_rad = 0.0;
  pp.shell_gain_amb = 0.0;
  pp.shell_gain_speed = 0.0;
  const SurrogatePlant plant(pp);
  std::uniform_real_distribution<double> temps(285.0, 320.0);
  bool bit_exact = true;
  for (int trial = 0; trial < 100; ++trial) {
    ACState x{temps(rng), 276.0 + 10.0 * mb(rng), temps(rng), temps(rng)};
    ControlInput u{mb(rng), sp(rng)};
    ExogenousSample ex{10.0, 500.0, 308.15};
    const ACState next = plant.step(x, u, ex);
    const double t_ain = vent_air_temp(x.t_evap, u.m_bl, pp.ac);
    bit_exact = bit_exact && next.t_cab == step_cabin_temp(x, u, t_ain, pp.ac);
    bit_exact = bit_exact && next.t_evap == step_evap_temp(x.t_evap, u.t_evap_sp, pp.ac);
    bit_exact = bit_exact && next.t_int == x.t_int && next.t_shell == x.t_shell;
  }

  report(6, "reduction identities", equal && bit_exact,
         fmt("objective equality on 100 points: %s; nominal plant bit-exact: %s",
             equal ? "yes" : "no", bit_exact ? "yes" : "no"));
}

void criterion_7() {
  SimTrace a;
  a.ts = 5.0;
  for (int i = 0; i < 10; ++i) {
    TraceRecord r;
    r.t = 5.0 * i;
    r.p_comp = 60.0;
    r.p_bl = 40.0;
    a.records.push_back(r);
  }
  const bool e1 = total_energy(a) == 5000.0;

  SimTrace b;
  b.ts = 5.0;
  int i = 0;
  for (double p : {100.0, 200.0, 300.0}) {
    TraceRecord r;
    r.t = 5.0 * i++;
    r.p_comp = p;
    b.records.push_back(r);
  }
  const bool e2 = total_energy(b) == 3000.0;

  SimTrace c;
  c.ts = 5.0;
  i = 0;
  for (double y : {0.5, -0.5, 1.0}) {
    TraceRecord r;
    r.t = 5.0 * i++;
    r.y_pmv = y;
    r.lb = -0.5;
    r.ub = 0.5;
    c.records.push_back(r);
  }
  const bool e3 = comfort_index(c) == 7.5;

  SimTrace d;
  d.ts = 5.0;
  for (int k = 0; k < 12; ++k) {
    TraceRecord r;
    r.t = 5.0 * k;
    r.y_pmv = (k % 4 == 0) ? 2.0 : 0.0;
    r.lb = -0.5;
    r.ub = 0.5;
    d.records.push_back(r);
  }
  const bool e4 = otc_violation(d) == 25.0;

  report(7, "metric arithmetic on fixture traces", e1 && e2 && e3 && e4,
         fmt("5000 J: %s; 3000 J: %s; 7.5: %s; 25%%: %s", e1 ? "ok" : "bad",
             e2 ? "ok" : "bad", e3 ? "ok" : "bad", e4 ? "ok" : "bad"));
}

#ifndef CECO_CLI_PATH
#define CECO_CLI_PATH ""
#endif

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_8() {
  const std::string cli = CECO_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / "ceco_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const fs::path cfg_path = dir / "scenario.cfg";
  {
    ScenarioConfig cfg;  // default scenario, bundled cycle
    cfg.output_dir = (dir / "a").string();
    std::ofstream out(cfg_path);
    dump_config(out, cfg);
  }

  auto run_compare = [&](const std::string& out_dir) {
    const std::string cmd = "\"" + cli + "\" compare --config " +
                            cfg_path.string() + " --out " + out_dir + " > " +
                            (dir / "log.txt").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc != -1 && WEXITSTATUS(rc) == 0;
  };

  bool ok = run_compare((dir / "a").string()) && run_compare((dir / "b").string());
  std::string mismatch = "none";
  if (ok) {
    const char* kinds[] = {"baseline", "ceco-e", "ceco-c", "ceco-ioch"};
    for (const char* k : kinds) {
      for (const char* prefix : {"trace_", "metrics_"}) {
        const std::string suffix = std::string(prefix) == "trace_" ? ".csv" : ".json";
        const fs::path fa = dir / "a" / (std::string(prefix) + k + suffix);
        const fs::path fb = dir / "b" / (std::string(prefix) + k + suffix);
        if (!fs::exists(fa) || !fs::exists(fb) || slurp(fa) != slurp(fb)) {
          ok = false;
          mismatch = fa.filename().string();
        }
      }
    }
  } else {
    mismatch = "compare run failed";
  }
  report(8, "byte-identical outputs across repeated runs", ok,
         "first mismatch: " + mismatch);
}

}  // namespace

int main() {
  std::printf("acceptance suite: default scenario, bundled 600 s cycle\n");
  try {
    const Scenario s = load_default_scenario();
    std::vector<ComparisonRow> rows;
    criterion_1_and_2(s, rows);
    criterion_3(s);
    criterion_4(s);
    criterion_5(s);
    criterion_6(s);
    criterion_7();
    criterion_8();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
