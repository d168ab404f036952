#include "ceco/cabin_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ceco {

namespace {

bool finite(double x) { return std::isfinite(x); }

void check_positive(std::vector<std::string>& out, double v, const char* name) {
  if (!(v > 0.0) || !finite(v)) {
    out.push_back(std::string(name) + " must be > 0");
  }
}

}  // namespace

std::vector<std::string> ACParams::validate() const {
  std::vector<std::string> out;
  check_positive(out, sample_time, "sample_time");
  check_positive(out, blower_power_coeff, "blower_power_coeff");
  check_positive(out, cop_base, "cop_base");
  check_positive(out, air_cp, "air_cp");
  if (!(gamma1 + gamma2 + gamma3 * kBlowerFlowMax < 1.0)) {
    out.push_back("gamma1 + gamma2 + gamma3*0.17 must be < 1 (cabin map unstable)");
  }
  if (!(std::fabs(gamma4 + gamma5) < 1.0)) {
    out.push_back("|gamma4 + gamma5| must be < 1 (evaporator map unstable)");
  }
  if (eta_speed_knots.empty()) {
    out.push_back("eta_speed_knots must be nonempty");
  } else {
    if (eta_speed_knots.front().second != 1.0) {
      out.push_back("eta_speed_knots: first multiplier must be 1");
    }
    for (std::size_t i = 0; i < eta_speed_knots.size(); ++i) {
      if (eta_speed_knots[i].second < 1.0) {
        out.push_back("eta_speed_knots: all multipliers must be >= 1");
        break;
      }
    }
    for (std::size_t i = 1; i < eta_speed_knots.size(); ++i) {
      if (eta_speed_knots[i].first <= eta_speed_knots[i - 1].first ||
          eta_speed_knots[i].second < eta_speed_knots[i - 1].second) {
        out.push_back("eta_speed_knots must be strictly increasing in speed and "
                      "nondecreasing in multiplier");
        break;
      }
    }
  }
  return out;
}

std::vector<std::string> ACState::validate() const {
  std::vector<std::string> out;
  const double temps[] = {t_cab, t_evap, t_int, t_shell};
  const char* names[] = {"t_cab", "t_evap", "t_int", "t_shell"};
  for (int i = 0; i < 4; ++i) {
    if (!finite(temps[i]) || temps[i] < kTempMinK || temps[i] > kTempMaxK) {
      out.push_back(std::string(names[i]) + " must be finite and in [230, 360] K");
    }
  }
  return out;
}

std::vector<std::string> ControlInput::validate() const {
  std::vector<std::string> out;
  if (!(m_bl >= kBlowerFlowMin && m_bl <= kBlowerFlowMax)) {
    out.push_back("m_bl must be in [0.05, 0.17] kg/s");
  }
  if (!(t_evap_sp >= kEvapSetpointMin && t_evap_sp <= kEvapSetpointMax)) {
    out.push_back("t_evap_sp must be in [276.15, 283.15] K");
  }
  return out;
}

std::vector<std::string> ExogenousSample::validate() const {
  std::vector<std::string> out;
  if (!(v_veh >= 0.0) || !finite(v_veh)) out.push_back("v_veh must be >= 0");
  if (!(w_rad >= 0.0) || !finite(w_rad)) out.push_back("w_rad must be >= 0");
  if (!finite(t_amb)) out.push_back("t_amb must be finite");
  return out;
}

std::vector<std::string> PlantParams::validate() const {
  std::vector<std::string> out = ac.validate();
  const double gains[] = {int_gain_cab, int_gain_rad, shell_gain_amb,
                          shell_gain_speed};
  const char* names[] = {"int_gain_cab", "int_gain_rad", "shell_gain_amb",
                         "shell_gain_speed"};
  for (int i = 0; i < 4; ++i) {
    if (!(gains[i] >= 0.0) || !finite(gains[i])) {
      out.push_back(std::string(names[i]) + " must be >= 0");
    }
  }
  if (!(perturbation_fraction >= 0.0 && perturbation_fraction <= 0.2)) {
    out.push_back("perturbation_fraction must be in [0, 0.2]");
  }
  return out;
}

double step_cabin_temp(const ACState& state, const ControlInput& u,
                       double t_ain, const ACParams& p) {
  const double next = state.t_cab + p.gamma1 * (state.t_int - state.t_cab) +
                      p.gamma2 * (state.t_shell - state.t_cab) +
                      p.gamma3 * (t_ain - state.t_cab) * u.m_bl + p.tau1;
  if (!std::isfinite(next)) {
    throw ModelDivergenceError("cabin temperature update is non-finite");
  }
  return next;
}

double step_evap_temp(double t_evap, double t_evap_sp, const ACParams& p) {
  const double next =
      p.gamma4 * t_evap + p.gamma5 * (t_evap - t_evap_sp) + p.tau2;
  if (!std::isfinite(next)) {
    throw ModelDivergenceError("evaporator temperature update is non-finite");
  }
  return next;
}

double vent_air_temp(double t_evap, double m_bl, const ACParams& p) {
  return p.gamma6 * t_evap + p.gamma7 * m_bl + p.tau3;
}

double blower_power(double m_bl, const ACParams& p) {
  return p.blower_power_coeff * m_bl * m_bl * m_bl;
}

double efficiency_multiplier(double v_veh, const ACParams& p) {
  const auto& knots = p.eta_speed_knots;
  if (v_veh <= knots.front().first) return knots.front().second;
  if (v_veh >= knots.back().first) return knots.back().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (v_veh <= knots[i].first) {
      const auto& [s0, m0] = knots[i - 1];
      const auto& [s1, m1] = knots[i];
      const double w = (v_veh - s0) / (s1 - s0);
      return m0 + w * (m1 - m0);
    }
  }
  return knots.back().second;
}

double compressor_power(const ACState& state, const ControlInput& u,
                        const ExogenousSample& ex, const ACParams& p) {
  const double t_ain = vent_air_temp(state.t_evap, u.m_bl, p);
  const double q_cool =
      u.m_bl * p.air_cp * std::max(state.t_cab - t_ain, 0.0);
  return q_cool / (p.cop_base * efficiency_multiplier(ex.v_veh, p));
}

SurrogatePlant::SurrogatePlant(const PlantParams& params)
    : params_(params), perturbed_(params.ac) {
  if (params_.perturbation_fraction > 0.0) {
    std::mt19937_64 rng(params_.perturbation_seed);
    std::uniform_real_distribution<double> dist(-params_.perturbation_fraction,
                                                params_.perturbation_fraction);
    // Only the gain-like parameters are perturbed. gamma4 and gamma6 sit near
    // unity on Kelvin-scale terms; relative noise there shifts the evaporator
    // and vent equilibria by tens of kelvin instead of modelling mismatch.
    double* gammas[] = {&perturbed_.gamma1, &perturbed_.gamma2,
                        &perturbed_.gamma3, &perturbed_.gamma5,
                        &perturbed_.gamma7};
    for (double* g : gammas) {
      *g *= 1.0 + dist(rng);
    }
  }
}

ACState SurrogatePlant::step(const ACState& state, const ControlInput& u,
                             const ExogenousSample& ex) const {
  ACState next;
  const double t_ain = vent_air_temp(state.t_evap, u.m_bl, perturbed_);
  next.t_cab = step_cabin_temp(state, u, t_ain, perturbed_);
  next.t_evap = step_evap_temp(state.t_evap, u.t_evap_sp, perturbed_);

  next.t_int = state.t_int + params_.int_gain_cab * (state.t_cab - state.t_int) +
               params_.int_gain_rad * ex.w_rad;

  // Shell relaxes toward ambient; ram air speeds the approach but may not
  // push the shell past ambient within one step.
  const double toward_amb = params_.shell_gain_amb * (ex.t_amb - state.t_shell);
  const double sign = state.t_shell > ex.t_amb ? 1.0 : (state.t_shell < ex.t_amb ? -1.0 : 0.0);
  double shell = state.t_shell + toward_amb - params_.shell_gain_speed * ex.v_veh * sign;
  if (sign > 0.0) {
    shell = std::max(shell, ex.t_amb);
  } else if (sign < 0.0) {
    shell = std::min(shell, ex.t_amb);
  }
  next.t_shell = shell;

  const auto problems = next.validate();
  if (!problems.empty()) {
    std::ostringstream msg;
    msg << "plant state diverged:";
    for (const auto& p : problems) msg << ' ' << p << ';';
    throw ModelDivergenceError(msg.str());
  }
  return next;
}

double SurrogatePlant::actual_compressor_power(const ACState& state,
                                               const ControlInput& u,
                                               const ExogenousSample& ex) const {
  return compressor_power(state, u, ex, perturbed_);
}

double SurrogatePlant::actual_blower_power(double m_bl) const {
  return blower_power(m_bl, perturbed_);
}

ACState plant_step(const SurrogatePlant& plant, const ACState& state,
                   const ControlInput& u, const ExogenousSample& ex) {
  return plant.step(state, u, ex);
}

}  // namespace ceco
