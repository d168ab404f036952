#include "ceco/comfort.hpp"

#include <algorithm>
#include <cmath>

namespace ceco {

std::vector<std::string> OccupantParams::validate() const {
  std::vector<std::string> out;
  if (!(metabolic_rate > 0.0)) out.push_back("metabolic_rate must be > 0");
  if (!(mech_power >= 0.0)) out.push_back("mech_power must be >= 0");
  if (!(clothing_insulation >= 0.0)) out.push_back("clothing_insulation must be >= 0");
  if (!(vapor_pressure > 0.0)) out.push_back("vapor_pressure must be > 0");
  if (!(alpha1 >= 0.0 && alpha2 >= 0.0)) {
    out.push_back("alpha1 and alpha2 must be >= 0");
  }
  if (std::fabs(alpha1 + alpha2 - 1.0) > 1e-12) {
    out.push_back("alpha1 + alpha2 must equal 1");
  }
  if (!(vent_velocity_gain > 0.0)) out.push_back("vent_velocity_gain must be > 0");
  if (!(solar_fraction >= 0.0 && solar_fraction <= 1.0)) {
    out.push_back("solar_fraction must be in [0, 1]");
  }
  return out;
}

std::vector<std::string> ComfortEnv::validate() const {
  std::vector<std::string> out;
  if (!(v_air >= 0.0)) out.push_back("v_air must be >= 0");
  if (!(w_rad >= 0.0)) out.push_back("w_rad must be >= 0");
  if (!std::isfinite(t_a) || !std::isfinite(t_mr)) {
    out.push_back("temperatures must be finite");
  }
  return out;
}

std::vector<std::string> ComfortBoundsSpec::validate() const {
  std::vector<std::string> out;
  if (!(lb_const < ub_final)) out.push_back("lb_const must be < ub_final");
  if (!(ub_final <= ub_initial)) out.push_back("ub_final must be <= ub_initial");
  if (!(ub_decay_tau > 0.0)) out.push_back("ub_decay_tau must be > 0");
  return out;
}

double clothing_area_factor(double i_cl) {
  return i_cl <= 0.078 ? 1.00 + 1.29 * i_cl : 1.05 + 0.645 * i_cl;
}

double convective_coeff(double t_cl, double t_a, double v_air) {
  const double natural = 2.38 * std::pow(std::fabs(t_cl - t_a), 0.25);
  const double forced = 12.1 * std::sqrt(v_air);
  return natural > forced ? natural : forced;
}

double cloth_surface_temp(const OccupantParams& occ, double t_a) {
  const double m = occ.metabolic_rate;
  const double mw = m - occ.mech_power;
  const double pa_kpa = occ.vapor_pressure / 1000.0;
  return 35.7 - 0.0275 * mw -
         occ.clothing_insulation *
             (mw - 3.05 * (5.73 - 0.007 * mw - pa_kpa) -
              0.42 * (mw - 58.15) - 0.0173 * m * (5.87 - pa_kpa) -
              0.0014 * m * (34.0 - t_a));
}

double dry_heat_loss(double t_cl, const ComfortEnv& env, double f_cl,
                     double h_c) {
  const double radiative =
      3.96e-8 * f_cl *
      (std::pow(t_cl + 273.0, 4.0) - std::pow(env.t_mr + 273.0, 4.0));
  const double convective = f_cl * h_c * (t_cl - env.t_a);
  return radiative + convective;
}

double evaporative_heat(const OccupantParams& occ) {
  const double mw = occ.metabolic_rate - occ.mech_power;
  const double sweat = std::max(0.42 * (mw - 58.15), 0.0);
  return 3.05e-3 * (5733.0 - 6.99 * mw - occ.vapor_pressure) + sweat;
}

double respiratory_convective(const OccupantParams& occ, double t_a) {
  return 0.0014 * occ.metabolic_rate * (34.0 - t_a);
}

double respiratory_evaporative(const OccupantParams& occ) {
  return 1.7e-5 * occ.metabolic_rate * (5867.0 - occ.vapor_pressure);
}

namespace {

// Shared heat-balance core: sensitivity factor times (gains - losses).
double pmv_balance(const OccupantParams& occ, const ComfortEnv& env,
                   double metabolic_side) {
  const double t_cl = cloth_surface_temp(occ, env.t_a);
  const double f_cl = clothing_area_factor(occ.clothing_insulation);
  const double h_c = convective_coeff(t_cl, env.t_a, env.v_air);
  const double losses = dry_heat_loss(t_cl, env, f_cl, h_c) +
                        evaporative_heat(occ) +
                        respiratory_convective(occ, env.t_a) +
                        respiratory_evaporative(occ);
  const double sensitivity =
      0.303 * std::exp(-0.036 * occ.metabolic_rate) + 0.028;
  return sensitivity * (metabolic_side - losses);
}

}  // namespace

double pmv_original(const OccupantParams& occ, const ComfortEnv& env) {
  return pmv_balance(occ, env, occ.metabolic_rate - occ.mech_power);
}

double blended_air_temp(double t_cab, double t_ain, const OccupantParams& occ) {
  return occ.alpha1 * t_cab + occ.alpha2 * t_ain;
}

double vent_air_velocity(double m_bl, const OccupantParams& occ) {
  return occ.vent_velocity_gain * m_bl;
}

double pmv_modified(double t_cab, double t_ain, double t_int, double m_bl,
                    double w_rad, const OccupantParams& occ) {
  OccupantParams seated = occ;
  seated.mech_power = 0.0;
  ComfortEnv env;
  env.t_a = blended_air_temp(t_cab, t_ain, seated);
  env.t_mr = t_int;
  env.v_air = vent_air_velocity(m_bl, seated);
  env.w_rad = w_rad;
  return pmv_balance(seated, env, seated.metabolic_rate + w_rad);
}

double clamp_pmv_for_report(double y) { return std::clamp(y, -4.0, 4.0); }

const char* sensation_level(double y) {
  const long level = std::lround(std::clamp(y, -3.0, 3.0));
  switch (level) {
    case 3: return "Hot";
    case 2: return "Warm";
    case 1: return "Slightly warm";
    case 0: return "Neutral";
    case -1: return "Slightly cool";
    case -2: return "Cool";
    default: return "Cold";
  }
}

ComfortBounds comfort_bounds(double t, const ComfortBoundsSpec& spec) {
  const double ub = spec.ub_final + (spec.ub_initial - spec.ub_final) *
                                        std::exp(-t / spec.ub_decay_tau);
  return {spec.lb_const, ub};
}

}  // namespace ceco
