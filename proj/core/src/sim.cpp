#include "ceco/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ceco {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim spaces
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, const std::string& file, int line,
                    const char* column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("cannot parse '") + s + "' in column " + column,
                     file, line);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<std::string> DriveCycle::validate() const {
  std::vector<std::string> out;
  if (samples.empty()) out.push_back("cycle must be nonempty");
  if (!(cycle_dt > 0.0)) out.push_back("cycle_dt must be > 0");
  for (const auto& s : samples) {
    if (!(s.v_veh >= 0.0)) {
      out.push_back("cycle speeds must be >= 0");
      break;
    }
  }
  return out;
}

DriveCycle load_cycle(const std::string& path, double cycle_dt) {
  if (!(cycle_dt > 0.0)) {
    throw ValidationError({"cycle_dt must be > 0"});
  }
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open drive cycle file", path, 0);
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty drive cycle file", path, 0);
  }
  const auto header = split_csv_line(line);
  const char* required[] = {"t_s", "v_mps", "w_rad_wm2", "t_amb_k"};
  int col[4] = {-1, -1, -1, -1};
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == required[c]) {
        col[c] = static_cast<int>(i);
        break;
      }
    }
    if (col[c] < 0) {
      throw ParseError(std::string("missing column '") + required[c] + "'",
                       path, 1);
    }
  }

  struct Row {
    double t, v, w, amb;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    const auto need = static_cast<std::size_t>(
        *std::max_element(std::begin(col), std::end(col)) + 1);
    if (fields.size() < need) {
      throw ParseError("row has too few fields", path, lineno);
    }
    Row r{};
    r.t = parse_double(fields[static_cast<std::size_t>(col[0])], path, lineno, "t_s");
    r.v = parse_double(fields[static_cast<std::size_t>(col[1])], path, lineno, "v_mps");
    r.w = parse_double(fields[static_cast<std::size_t>(col[2])], path, lineno, "w_rad_wm2");
    r.amb = parse_double(fields[static_cast<std::size_t>(col[3])], path, lineno, "t_amb_k");
    if (!rows.empty() && !(r.t > rows.back().t)) {
      throw ParseError("time must be strictly increasing", path, lineno);
    }
    if (r.v < 0.0) {
      throw ParseError("speed must be >= 0", path, lineno);
    }
    rows.push_back(r);
  }
  if (rows.empty()) {
    throw ParseError("drive cycle has no data rows", path, lineno);
  }

  DriveCycle cycle;
  cycle.name = path;
  cycle.cycle_dt = cycle_dt;

  // Resample on a uniform grid starting at the first timestamp.
  const double t0 = rows.front().t;
  const double t_end = rows.back().t;
  const auto n_samples =
      static_cast<std::size_t>(std::floor((t_end - t0) / cycle_dt + 1e-9)) + 1;
  std::size_t j = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double t = t0 + static_cast<double>(k) * cycle_dt;
    while (j + 1 < rows.size() && rows[j + 1].t < t) ++j;
    ExogenousSample s;
    if (j + 1 >= rows.size() || t <= rows[j].t) {
      s.v_veh = rows[j].v;
      s.w_rad = rows[j].w;
      s.t_amb = rows[j].amb;
    } else {
      const Row& a = rows[j];
      const Row& b = rows[j + 1];
      const double w = (t - a.t) / (b.t - a.t);
      s.v_veh = a.v + w * (b.v - a.v);
      s.w_rad = a.w + w * (b.w - a.w);
      s.t_amb = a.amb + w * (b.amb - a.amb);
    }
    cycle.samples.push_back(s);
  }
  return cycle;
}

PreviewWindow preview_window(const DriveCycle& cycle, int k,
                             const MpcConfig& cfg,
                             const ComfortBoundsSpec& bounds) {
  if (std::fabs(cycle.cycle_dt - cfg.ts) > 1e-9) {
    throw ValidationError({"cycle must be resampled at the controller period"});
  }
  PreviewWindow window;
  const int last = static_cast<int>(cycle.samples.size()) - 1;
  for (int i = 0; i <= cfg.np; ++i) {
    const int idx = std::min(k + i, last);
    window.exogenous.push_back(cycle.samples[static_cast<std::size_t>(idx)]);
    const double t = static_cast<double>(k + i) * cfg.ts;
    const ComfortBounds cb = comfort_bounds(t, bounds);
    window.pmv_lb.push_back(cb.lb);
    window.pmv_ub.push_back(cb.ub);
  }
  return window;
}

SimTrace run_closed_loop(ControllerKind kind, const DriveCycle& cycle,
                         const PlantParams& plant_params, const MpcModel& model,
                         const ComfortBoundsSpec& bounds,
                         std::vector<IterationRecord>* solver_log) {
  SimTrace trace;
  trace.ts = model.config.ts;
  MpcModel effective = model;
  if (solver_log != nullptr) effective.solver.record_iterations = true;
  if (cycle.samples.size() < 2) {
    return trace;  // zero-length cycle: nothing to simulate
  }

  const SurrogatePlant plant(plant_params);
  ACState x;  // hot-soak defaults
  PiState pi;
  std::vector<double> warm;
  bool have_warm = false;

  const int steps = static_cast<int>(cycle.samples.size()) - 1;
  trace.records.reserve(static_cast<std::size_t>(steps));

  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * model.config.ts;
    const ExogenousSample& ex = cycle.samples[static_cast<std::size_t>(k)];

    TraceRecord rec;
    rec.t = t;
    rec.state = x;

    try {
      if (kind == ControllerKind::kBaseline) {
        auto [u, next_pi] = pi_baseline_step(pi, x.t_cab, model.config);
        pi = next_pi;
        rec.control = u;
      } else {
        const PreviewWindow preview = preview_window(cycle, k, model.config, bounds);
        const auto start = std::chrono::steady_clock::now();
        MpcStepResult step =
            mpc_step(effective, kind, x, preview, have_warm ? &warm : nullptr);
        const auto stop = std::chrono::steady_clock::now();
        warm = step.solution.z_opt;
        have_warm = true;
        if (solver_log != nullptr) {
          solver_log->insert(solver_log->end(), step.solution.iteration_log.begin(),
                             step.solution.iteration_log.end());
        }
        rec.control = step.control;
        rec.solver_iters = step.solution.iterations;
        rec.solve_ms =
            std::chrono::duration<double, std::milli>(stop - start).count();
        if (kind == ControllerKind::kCecoIoch) {
          const OcpLayout layout{model.config.np, true};
          double sum = 0.0;
          for (int i = 0; i < model.config.np; ++i) {
            sum += step.solution.z_opt[static_cast<std::size_t>(layout.slack_index(i))];
          }
          rec.mean_slack = sum / model.config.np;
        }
      }

      // Comfort and power are logged against the physical vent condition.
      const double t_ain =
          vent_air_temp(x.t_evap, rec.control.m_bl, plant.perturbed_ac());
      rec.y_pmv = pmv_modified(x.t_cab - 273.15, t_ain - 273.15,
                               x.t_int - 273.15, rec.control.m_bl,
                               model.occupant.solar_fraction * ex.w_rad,
                               model.occupant);
      const ComfortBounds cb = comfort_bounds(t, bounds);
      rec.lb = cb.lb;
      rec.ub = cb.ub;
      rec.p_comp = plant.actual_compressor_power(x, rec.control, ex);
      rec.p_bl = plant.actual_blower_power(rec.control.m_bl);
      trace.records.push_back(rec);

      x = plant.step(x, rec.control, ex);
    } catch (const ModelDivergenceError& e) {
      throw SimAbortError(std::string("closed loop aborted at t=") +
                              format_double(t) + "s: " + e.what(),
                          trace);
    } catch (const NumericalFailure& e) {
      throw SimAbortError(std::string("solver failed at t=") +
                              format_double(t) + "s (" + to_string(kind) +
                              "): " + e.what(),
                          trace);
    }
  }
  return trace;
}

double total_energy(const SimTrace& trace) {
  double sum = 0.0;
  for (const auto& r : trace.records) sum += (r.p_comp + r.p_bl) * trace.ts;
  return sum;
}

double comfort_index(const SimTrace& trace) {
  double sum = 0.0;
  for (const auto& r : trace.records) sum += r.y_pmv * r.y_pmv * trace.ts;
  return sum;
}

double otc_violation(const SimTrace& trace) {
  if (trace.records.empty()) return 0.0;
  std::size_t outside = 0;
  for (const auto& r : trace.records) {
    if (r.y_pmv > r.ub || r.y_pmv < r.lb) ++outside;
  }
  return 100.0 * static_cast<double>(outside) /
         static_cast<double>(trace.records.size());
}

MetricsReport compute_metrics(const SimTrace& trace) {
  MetricsReport m;
  m.e_tot_j = total_energy(trace);
  m.i_pmv = comfort_index(trace);
  m.otc_violation_pct = otc_violation(trace);
  if (!trace.records.empty()) {
    double ms = 0.0;
    for (const auto& r : trace.records) ms += r.solve_ms;
    m.mean_solve_time_s = ms / 1000.0 / static_cast<double>(trace.records.size());
  }
  return m;
}

std::vector<ComparisonRow> compare_controllers(const DriveCycle& cycle,
                                               const PlantParams& plant_params,
                                               const MpcModel& model,
                                               const ComfortBoundsSpec& bounds) {
  const ControllerKind kinds[] = {ControllerKind::kBaseline, ControllerKind::kCecoE,
                                  ControllerKind::kCecoC, ControllerKind::kCecoIoch};
  std::vector<ComparisonRow> rows;
  for (ControllerKind kind : kinds) {
    ComparisonRow row;
    row.kind = kind;
    try {
      row.trace = run_closed_loop(kind, cycle, plant_params, model, bounds);
      row.metrics = compute_metrics(row.trace);
    } catch (const SimAbortError& e) {
      row.error = e.what();
      row.trace = e.partial_trace();
      row.metrics = compute_metrics(row.trace);
    }
    rows.push_back(std::move(row));
  }
  const double base = rows.front().metrics.e_tot_j;
  for (auto& row : rows) {
    row.energy_savings_pct =
        base > 0.0 ? 100.0 * (base - row.metrics.e_tot_j) / base : 0.0;
  }
  rows.front().energy_savings_pct = 0.0;
  return rows;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace,
                     bool include_timing) {
  out << kTraceCsvHeader << '\n';
  for (const auto& r : trace.records) {
    out << format_double(r.t) << ',' << format_double(r.state.t_cab) << ','
        << format_double(r.state.t_evap) << ',' << format_double(r.state.t_int)
        << ',' << format_double(r.state.t_shell) << ','
        << format_double(r.control.m_bl) << ','
        << format_double(r.control.t_evap_sp) << ','
        << format_double(r.p_comp) << ',' << format_double(r.p_bl) << ','
        << format_double(r.y_pmv) << ',' << format_double(r.lb) << ','
        << format_double(r.ub) << ',' << r.solver_iters << ','
        << format_double(include_timing ? r.solve_ms : 0.0) << '\n';
  }
}

SimTrace read_trace_csv(std::istream& in, const std::string& name) {
  SimTrace trace;
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty trace", name, 0);
  }
  if (split_csv_line(line) != split_csv_line(kTraceCsvHeader)) {
    throw ParseError("unexpected trace header", name, 1);
  }
  int lineno = 1;
  double prev_t = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 14) {
      throw ParseError("expected 14 fields", name, lineno);
    }
    TraceRecord r;
    r.t = parse_double(f[0], name, lineno, "t_s");
    r.state.t_cab = parse_double(f[1], name, lineno, "t_cab_k");
    r.state.t_evap = parse_double(f[2], name, lineno, "t_evap_k");
    r.state.t_int = parse_double(f[3], name, lineno, "t_int_k");
    r.state.t_shell = parse_double(f[4], name, lineno, "t_shell_k");
    r.control.m_bl = parse_double(f[5], name, lineno, "m_bl_kgps");
    r.control.t_evap_sp = parse_double(f[6], name, lineno, "t_evap_sp_k");
    r.p_comp = parse_double(f[7], name, lineno, "p_comp_w");
    r.p_bl = parse_double(f[8], name, lineno, "p_bl_w");
    r.y_pmv = parse_double(f[9], name, lineno, "y_pmv");
    r.lb = parse_double(f[10], name, lineno, "y_lb");
    r.ub = parse_double(f[11], name, lineno, "y_ub");
    r.solver_iters = static_cast<int>(parse_double(f[12], name, lineno, "solver_iters"));
    r.solve_ms = parse_double(f[13], name, lineno, "solve_ms");
    if (trace.records.size() == 1) {
      trace.ts = r.t - prev_t;
    }
    if (!trace.records.empty() && !(r.t > prev_t)) {
      throw ParseError("time must be strictly increasing", name, lineno);
    }
    prev_t = r.t;
    trace.records.push_back(r);
  }
  return trace;
}

void write_metrics_json(std::ostream& out, const MetricsReport& metrics,
                        bool include_timing) {
  nlohmann::ordered_json j;
  j["e_tot_j"] = metrics.e_tot_j;
  j["i_pmv"] = metrics.i_pmv;
  j["otc_violation_pct"] = metrics.otc_violation_pct;
  j["mean_solve_time_s"] = include_timing ? metrics.mean_solve_time_s : 0.0;
  out << j.dump(2) << '\n';
}

std::string format_comparison_table(const std::vector<ComparisonRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %14s %12s %10s %14s %12s\n",
                "controller", "e_tot_kj", "i_pmv", "otc_pct", "savings_pct",
                "solve_ms");
  os << buf;
  for (const auto& row : rows) {
    if (row.error) {
      std::snprintf(buf, sizeof buf, "%-10s failed: %s\n", to_string(row.kind),
                    row.error->c_str());
      os << buf;
      continue;
    }
    std::snprintf(buf, sizeof buf, "%-10s %14.3f %12.3f %10.2f %14.2f %12.3f\n",
                  to_string(row.kind), row.metrics.e_tot_j / 1000.0,
                  row.metrics.i_pmv, row.metrics.otc_violation_pct,
                  row.energy_savings_pct, row.metrics.mean_solve_time_s * 1000.0);
    os << buf;
  }
  return os.str();
}

}  // namespace ceco
