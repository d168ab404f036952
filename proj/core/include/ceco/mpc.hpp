#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ceco/cabin_model.hpp"
#include "ceco/comfort.hpp"
#include "ceco/nlp_solver.hpp"

namespace ceco {

// Receding-horizon controllers. Three optimizing variants share one
// single-shooting rollout of the nominal cabin/evaporator model and differ in
// the stage cost and in whether the comfort upper bound is tightened online;
// the baseline is a PI cabin-temperature tracker with anti-windup.

enum class ControllerKind { kBaseline, kCecoE, kCecoC, kCecoIoch };

const char* to_string(ControllerKind kind);
std::optional<ControllerKind> controller_kind_from_string(const std::string& s);

struct MpcConfig {
  int np = 6;          // prediction horizon, steps
  double ts = 5.0;     // s
  // Comfort deviation penalty used by the comfort-priority variant, W per
  // PMV^2. The energy-priority variant runs with this weight at zero.
  double comfort_weight = 1e5;
  double ioch_beta = 50.0;    // W, bound-tightening incentive weight
  double ioch_xi = 0.1;       // regularity term in the incentive denominator
  double ioch_eps_ub = 1.0;   // PMV units, slack upper bound
  double pmv_soft_weight = 1e6;  // W per PMV^2 of comfort-bound violation
  double t_evap_lb = 274.15;  // K, evaporator path constraint
  double t_evap_ub = 289.15;  // K
  double m_bl_min = kBlowerFlowMin;
  double m_bl_max = kBlowerFlowMax;
  double t_evap_sp_min = kEvapSetpointMin;
  double t_evap_sp_max = kEvapSetpointMax;

  std::vector<std::string> validate() const;
};

// Exogenous previews and comfort bounds for prediction steps 0..np.
struct PreviewWindow {
  std::vector<ExogenousSample> exogenous;
  std::vector<double> pmv_lb;
  std::vector<double> pmv_ub;

  std::vector<std::string> validate(int np) const;
};

// Everything the optimizing controllers are allowed to know: the nominal
// (unperturbed) model, the occupant, tuning, and solver settings.
struct MpcModel {
  ACParams ac;
  OccupantParams occupant;
  MpcConfig config;
  SolverOptions solver;
};

// Decision-vector layout shared by the builders: blower flows for stages
// 0..np-1, then evaporator set-points, then (IOCH only) comfort slacks.
struct OcpLayout {
  int np = 0;
  bool has_slack = false;

  int dimension() const { return np * (has_slack ? 3 : 2); }
  int flow_index(int stage) const { return stage; }
  int setpoint_index(int stage) const { return np + stage; }
  int slack_index(int stage) const { return 2 * np + stage; }
};

// Energy-only stage cost with softened comfort bounds (the general problem).
NlpProblem build_general_ocp(const MpcModel& model, const ACState& x0,
                             const PreviewWindow& preview);

// General problem plus comfort_weight * y_pmv^2 per stage. A zero weight
// reproduces build_general_ocp exactly.
NlpProblem build_weighted_ocp(const MpcModel& model, const ACState& x0,
                              const PreviewWindow& preview);

// General problem with per-stage slacks that tighten the comfort upper bound
// where the previewed A/C efficiency is high.
NlpProblem build_ioch_ocp(const MpcModel& model, const ACState& x0,
                          const PreviewWindow& preview);

struct MpcStepResult {
  ControlInput control;
  NlpSolution solution;
};

// Builds the problem for `kind`, warm-starts from the previous decision
// vector shifted one stage (when provided), solves, and returns the first
// control move. kind must not be kBaseline.
MpcStepResult mpc_step(const MpcModel& model, ControllerKind kind,
                       const ACState& x0, const PreviewWindow& preview,
                       const std::vector<double>* warm_start);

// --- baseline ---------------------------------------------------------------

inline constexpr double kPiSetpointK = 299.15;  // 26 C cabin target

struct PiState {
  double integral = 0.0;  // integral of the tracking error, K*s
};

struct PiGains {
  double kp = 0.05;   // (kg/s)/K
  double ki = 0.002;  // (kg/s)/(K*s)
  double kb = 0.01;   // back-calculation gain; ~one-sample tracking time
};

// One PI step: blower flow from the tracking error with back-calculation
// anti-windup, evaporator set-point pinned to maximum cooling.
std::pair<ControlInput, PiState> pi_baseline_step(const PiState& state,
                                                  double t_cab_meas,
                                                  const MpcConfig& cfg,
                                                  const PiGains& gains = {});

}  // namespace ceco
