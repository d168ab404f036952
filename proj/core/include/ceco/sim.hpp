#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ceco/cabin_model.hpp"
#include "ceco/comfort.hpp"
#include "ceco/mpc.hpp"

namespace ceco {

// Closed-loop drive-cycle simulation: plant + controller stepping at Ts with
// perfect exogenous previews, per-step trace records, and the aggregate
// energy/comfort metrics computed from them.

struct DriveCycle {
  std::string name;
  double cycle_dt = 5.0;  // s
  std::vector<ExogenousSample> samples;

  double duration() const {
    return samples.empty() ? 0.0
                           : static_cast<double>(samples.size() - 1) * cycle_dt;
  }

  std::vector<std::string> validate() const;
};

struct TraceRecord {
  double t = 0.0;  // s
  ACState state;
  ControlInput control;
  double p_comp = 0.0;  // W
  double p_bl = 0.0;    // W
  double y_pmv = 0.0;
  double lb = 0.0;
  double ub = 0.0;
  int solver_iters = 0;
  double solve_ms = 0.0;
  double mean_slack = 0.0;  // mean comfort slack of the solve; not persisted
};

struct SimTrace {
  double ts = 5.0;
  std::vector<TraceRecord> records;
};

struct MetricsReport {
  double e_tot_j = 0.0;
  double i_pmv = 0.0;               // PMV^2 s
  double otc_violation_pct = 0.0;   // %
  double mean_solve_time_s = 0.0;
};

// Aborted closed-loop run; carries whatever was simulated before the failure.
class SimAbortError : public std::runtime_error {
 public:
  SimAbortError(const std::string& what, SimTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const SimTrace& partial_trace() const noexcept { return partial_; }

 private:
  SimTrace partial_;
};

// Reads a drive-cycle CSV (header t_s,v_mps,w_rad_wm2,t_amb_k) and resamples
// it to cycle_dt by linear interpolation. Throws ParseError with the line
// number on malformed input.
DriveCycle load_cycle(const std::string& path, double cycle_dt);

// Previewed exogenous samples and comfort bounds for prediction steps
// k..k+np, clamped at the cycle end. The cycle must be sampled at cfg.ts.
PreviewWindow preview_window(const DriveCycle& cycle, int k,
                             const MpcConfig& cfg,
                             const ComfortBoundsSpec& bounds);

// Simulates `kind` over the whole cycle from a hot-soak initial state.
// The controller sees the nominal model in `model`; the plant runs the
// seeded perturbation in `plant_params`. When solver_log is non-null the
// per-iteration records of every solve are appended to it.
SimTrace run_closed_loop(ControllerKind kind, const DriveCycle& cycle,
                         const PlantParams& plant_params, const MpcModel& model,
                         const ComfortBoundsSpec& bounds,
                         std::vector<IterationRecord>* solver_log = nullptr);

// Rectangle-rule integral of (p_comp + p_bl) over the trace, J.
double total_energy(const SimTrace& trace);

// Rectangle-rule integral of y_pmv^2, PMV^2 s.
double comfort_index(const SimTrace& trace);

// Percentage of steps with y_pmv outside [lb, ub].
double otc_violation(const SimTrace& trace);

MetricsReport compute_metrics(const SimTrace& trace);

struct ComparisonRow {
  ControllerKind kind = ControllerKind::kBaseline;
  MetricsReport metrics;
  double energy_savings_pct = 0.0;  // vs baseline; 0 for the baseline row
  std::optional<std::string> error; // set when this run failed
  SimTrace trace;
};

// Runs all four controllers on the identical scenario and reports metrics
// plus energy savings relative to the baseline. A failed run is reported in
// its row without aborting the others.
std::vector<ComparisonRow> compare_controllers(const DriveCycle& cycle,
                                               const PlantParams& plant_params,
                                               const MpcModel& model,
                                               const ComfortBoundsSpec& bounds);

// --- trace and metrics persistence -------------------------------------------

inline constexpr const char* kTraceCsvHeader =
    "t_s,t_cab_k,t_evap_k,t_int_k,t_shell_k,m_bl_kgps,t_evap_sp_k,p_comp_w,"
    "p_bl_w,y_pmv,y_lb,y_ub,solver_iters,solve_ms";

// include_timing controls whether measured solve times are persisted; when
// false the timing fields are written as zero so repeated runs are
// byte-identical.
void write_trace_csv(std::ostream& out, const SimTrace& trace,
                     bool include_timing);
SimTrace read_trace_csv(std::istream& in, const std::string& name);

void write_metrics_json(std::ostream& out, const MetricsReport& metrics,
                        bool include_timing);

// Aligned text table for a comparison, with measured mean solve times.
std::string format_comparison_table(const std::vector<ComparisonRow>& rows);

}  // namespace ceco
