#include "ceco/mpc.hpp"

#include <algorithm>
#include <cmath>

namespace ceco {

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kBaseline: return "baseline";
    case ControllerKind::kCecoE: return "ceco-e";
    case ControllerKind::kCecoC: return "ceco-c";
    case ControllerKind::kCecoIoch: return "ceco-ioch";
  }
  return "unknown";
}

std::optional<ControllerKind> controller_kind_from_string(const std::string& s) {
  if (s == "baseline") return ControllerKind::kBaseline;
  if (s == "ceco-e") return ControllerKind::kCecoE;
  if (s == "ceco-c") return ControllerKind::kCecoC;
  if (s == "ceco-ioch") return ControllerKind::kCecoIoch;
  return std::nullopt;
}

std::vector<std::string> MpcConfig::validate() const {
  std::vector<std::string> out;
  if (np < 1) out.push_back("np must be >= 1");
  if (!(ts > 0.0)) out.push_back("ts must be > 0");
  if (!(comfort_weight >= 0.0)) out.push_back("comfort_weight must be >= 0");
  if (!(ioch_beta >= 0.0)) out.push_back("ioch_beta must be >= 0");
  if (!(ioch_xi > 0.0)) out.push_back("ioch_xi must be > 0");
  if (!(ioch_eps_ub >= 0.0)) out.push_back("ioch_eps_ub must be >= 0");
  if (!(pmv_soft_weight > 0.0)) out.push_back("pmv_soft_weight must be > 0");
  if (!(t_evap_lb < t_evap_ub)) out.push_back("t_evap_lb must be < t_evap_ub");
  if (!(m_bl_min < m_bl_max)) out.push_back("m_bl_min must be < m_bl_max");
  if (!(t_evap_sp_min < t_evap_sp_max)) {
    out.push_back("t_evap_sp_min must be < t_evap_sp_max");
  }
  return out;
}

std::vector<std::string> PreviewWindow::validate(int np) const {
  std::vector<std::string> out;
  const auto want = static_cast<std::size_t>(np) + 1;
  if (exogenous.size() != want || pmv_lb.size() != want || pmv_ub.size() != want) {
    out.push_back("preview window must hold np+1 samples and bounds");
    return out;
  }
  for (std::size_t i = 0; i < want; ++i) {
    if (!(pmv_lb[i] < pmv_ub[i])) {
      out.push_back("preview bounds must satisfy lb < ub at every step");
      break;
    }
  }
  return out;
}

namespace {

constexpr double kSlackTieBreak = 1e-6;  // keeps the slack determinate at eta == 1

enum class CostVariant { kGeneral, kWeighted, kIoch };

// Single-shooting evaluation of the stage-cost sum for a decision vector.
// Stage np reuses the stage np-1 control (and slack).
struct Rollout {
  MpcModel model;
  ACState x0;
  PreviewWindow preview;
  CostVariant variant;
  OcpLayout layout;

  double operator()(std::span<const double> z) const {
    const MpcConfig& cfg = model.config;
    const OccupantParams& occ = model.occupant;
    const int np = layout.np;

    double t_cab = x0.t_cab;
    double t_evap = x0.t_evap;
    ACState stage_state = x0;

    double total = 0.0;
    for (int i = 0; i <= np; ++i) {
      const int ci = std::min(i, np - 1);
      const double m_bl = z[static_cast<std::size_t>(layout.flow_index(ci))];
      const double sp = z[static_cast<std::size_t>(layout.setpoint_index(ci))];
      const ExogenousSample& ex = preview.exogenous[static_cast<std::size_t>(i)];

      stage_state.t_cab = t_cab;
      stage_state.t_evap = t_evap;
      const ControlInput u{m_bl, sp};

      const double t_ain = vent_air_temp(t_evap, m_bl, model.ac);
      total += compressor_power(stage_state, u, ex, model.ac) +
               blower_power(m_bl, model.ac);

      const double w_eff = occ.solar_fraction * ex.w_rad;
      const double y = pmv_modified(t_cab - 273.15, t_ain - 273.15,
                                    x0.t_int - 273.15, m_bl, w_eff, occ);

      double ub = preview.pmv_ub[static_cast<std::size_t>(i)];
      if (variant == CostVariant::kIoch) {
        const double eps = z[static_cast<std::size_t>(layout.slack_index(ci))];
        ub -= eps;
        const double eta = efficiency_multiplier(ex.v_veh, model.ac);
        total += cfg.ioch_beta * (eta - 1.0) / (eps + cfg.ioch_xi);
      }
      const double lb = preview.pmv_lb[static_cast<std::size_t>(i)];
      const double over = std::max(y - ub, 0.0);
      const double under = std::max(lb - y, 0.0);
      total += cfg.pmv_soft_weight * (over * over + under * under);

      if (variant == CostVariant::kWeighted) {
        total += cfg.comfort_weight * y * y;
      }

      if (i < np) {
        const double next_cab = step_cabin_temp(stage_state, u, t_ain, model.ac);
        t_evap = step_evap_temp(t_evap, sp, model.ac);
        t_cab = next_cab;
      }
    }

    if (variant == CostVariant::kIoch) {
      for (int j = 0; j < np; ++j) {
        const double eps = z[static_cast<std::size_t>(layout.slack_index(j))];
        total += kSlackTieBreak * eps * eps;
      }
    }
    return total;
  }
};

// Evaporator band along the horizon, written as g <= 0. The evaporator
// trajectory depends only on the set-point block.
struct EvapPathConstraints {
  MpcModel model;
  double t_evap0 = 0.0;
  OcpLayout layout;

  void operator()(std::span<const double> z, std::span<double> g) const {
    const int np = layout.np;
    double t_evap = t_evap0;
    std::size_t k = 0;
    for (int i = 0; i <= np; ++i) {
      g[k++] = model.config.t_evap_lb - t_evap;
      g[k++] = t_evap - model.config.t_evap_ub;
      if (i < np) {
        const double sp = z[static_cast<std::size_t>(layout.setpoint_index(i))];
        t_evap = step_evap_temp(t_evap, sp, model.ac);
      }
    }
  }
};

NlpProblem build_ocp(const MpcModel& model, const ACState& x0,
                     const PreviewWindow& preview, CostVariant variant) {
  const MpcConfig& cfg = model.config;
  if (auto problems = preview.validate(cfg.np); !problems.empty()) {
    throw ValidationError(std::move(problems));
  }
  OcpLayout layout{cfg.np, variant == CostVariant::kIoch};

  NlpProblem problem;
  problem.dimension = layout.dimension();
  problem.objective = Rollout{model, x0, preview, variant, layout};
  problem.num_constraints = 2 * (cfg.np + 1);
  problem.constraints = EvapPathConstraints{model, x0.t_evap, layout};

  problem.lower.resize(static_cast<std::size_t>(problem.dimension));
  problem.upper.resize(static_cast<std::size_t>(problem.dimension));
  for (int i = 0; i < cfg.np; ++i) {
    problem.lower[static_cast<std::size_t>(layout.flow_index(i))] = cfg.m_bl_min;
    problem.upper[static_cast<std::size_t>(layout.flow_index(i))] = cfg.m_bl_max;
    problem.lower[static_cast<std::size_t>(layout.setpoint_index(i))] = cfg.t_evap_sp_min;
    problem.upper[static_cast<std::size_t>(layout.setpoint_index(i))] = cfg.t_evap_sp_max;
    if (layout.has_slack) {
      problem.lower[static_cast<std::size_t>(layout.slack_index(i))] = 0.0;
      problem.upper[static_cast<std::size_t>(layout.slack_index(i))] = cfg.ioch_eps_ub;
    }
  }
  return problem;
}

}  // namespace

NlpProblem build_general_ocp(const MpcModel& model, const ACState& x0,
                             const PreviewWindow& preview) {
  return build_ocp(model, x0, preview, CostVariant::kGeneral);
}

NlpProblem build_weighted_ocp(const MpcModel& model, const ACState& x0,
                              const PreviewWindow& preview) {
  return build_ocp(model, x0, preview, CostVariant::kWeighted);
}

NlpProblem build_ioch_ocp(const MpcModel& model, const ACState& x0,
                          const PreviewWindow& preview) {
  return build_ocp(model, x0, preview, CostVariant::kIoch);
}

MpcStepResult mpc_step(const MpcModel& model, ControllerKind kind,
                       const ACState& x0, const PreviewWindow& preview,
                       const std::vector<double>* warm_start) {
  const MpcConfig& cfg = model.config;
  const OcpLayout layout{cfg.np, kind == ControllerKind::kCecoIoch};

  NlpProblem problem;
  switch (kind) {
    case ControllerKind::kCecoE: {
      problem = build_general_ocp(model, x0, preview);
      break;
    }
    case ControllerKind::kCecoC: {
      problem = build_weighted_ocp(model, x0, preview);
      break;
    }
    case ControllerKind::kCecoIoch: {
      problem = build_ioch_ocp(model, x0, preview);
      break;
    }
    case ControllerKind::kBaseline:
      throw std::invalid_argument("mpc_step does not handle the baseline");
  }

  std::vector<double> z0(static_cast<std::size_t>(problem.dimension), 0.0);
  if (warm_start != nullptr &&
      warm_start->size() == static_cast<std::size_t>(problem.dimension)) {
    // Shift every block one stage forward, duplicating the last entry.
    const int blocks = layout.has_slack ? 3 : 2;
    for (int b = 0; b < blocks; ++b) {
      const int base = b * cfg.np;
      for (int i = 0; i < cfg.np; ++i) {
        const int src = base + std::min(i + 1, cfg.np - 1);
        z0[static_cast<std::size_t>(base + i)] =
            (*warm_start)[static_cast<std::size_t>(src)];
      }
    }
  } else {
    for (int i = 0; i < cfg.np; ++i) {
      z0[static_cast<std::size_t>(layout.flow_index(i))] =
          0.5 * (cfg.m_bl_min + cfg.m_bl_max);
      z0[static_cast<std::size_t>(layout.setpoint_index(i))] =
          0.5 * (cfg.t_evap_sp_min + cfg.t_evap_sp_max);
      if (layout.has_slack) {
        z0[static_cast<std::size_t>(layout.slack_index(i))] = 0.0;
      }
    }
  }

  NlpSolution solution = solve(problem, z0, model.solver);
  ControlInput first{
      solution.z_opt[static_cast<std::size_t>(layout.flow_index(0))],
      solution.z_opt[static_cast<std::size_t>(layout.setpoint_index(0))]};
  return {first, std::move(solution)};
}

std::pair<ControlInput, PiState> pi_baseline_step(const PiState& state,
                                                  double t_cab_meas,
                                                  const MpcConfig& cfg,
                                                  const PiGains& gains) {
  const double error = t_cab_meas - kPiSetpointK;
  const double raw = gains.kp * error + gains.ki * state.integral;
  const double clamped = std::clamp(raw, cfg.m_bl_min, cfg.m_bl_max);

  PiState next = state;
  next.integral += error * cfg.ts + (clamped - raw) / gains.kb;

  return {ControlInput{clamped, cfg.t_evap_sp_min}, next};
}

}  // namespace ceco
