#pragma once

#include <string>
#include <vector>

namespace ceco {

// Steady-state thermal-sensation (PMV) model: the indoor-space formulation
// plus the automotive variant that blends cabin and vent air temperatures,
// adds the occupant's effective solar load, and derives air velocity from the
// blower flow. All temperatures here are in degrees Celsius.

struct OccupantParams {
  double metabolic_rate = 58.15;      // M, W/m^2 (1 met, seated)
  double mech_power = 0.0;            // W_mech, W/m^2
  double clothing_insulation = 0.0775;  // I_cl, m^2 K/W (0.5 clo)
  double vapor_pressure = 1700.0;     // p_a, Pa
  double alpha1 = 0.8;                // weight of cabin bulk air
  double alpha2 = 0.2;                // weight of vent air
  double vent_velocity_gain = 5.0;    // k_v, (m/s)/(kg/s)
  // Fraction of exogenous solar irradiance that reaches the occupant as an
  // effective radiative load (glazing transmission x projected-area factor).
  double solar_fraction = 0.02;

  std::vector<std::string> validate() const;
};

struct ComfortEnv {
  double t_a = 25.0;    // air temperature, C
  double t_mr = 25.0;   // mean radiant temperature, C
  double v_air = 0.1;   // relative air velocity, m/s
  double w_rad = 0.0;   // effective solar load on the occupant, W/m^2

  std::vector<std::string> validate() const;
};

// Time-varying comfort-zone bounds: constant lower bound, upper bound
// decaying exponentially from an initial hot-soak allowance to its final
// steady value.
struct ComfortBoundsSpec {
  double lb_const = -0.5;
  double ub_final = 0.5;
  double ub_initial = 3.0;
  double ub_decay_tau = 120.0;  // s

  std::vector<std::string> validate() const;
};

struct ComfortBounds {
  double lb;
  double ub;
};

// Clothing surface area factor f_cl.
double clothing_area_factor(double i_cl);

// Convective heat transfer coefficient: larger of the natural- and
// forced-convection correlations.
double convective_coeff(double t_cl, double t_a, double v_air);

// Closed-form cloth surface temperature. The bracketed vapor-pressure terms
// are evaluated in kPa; see the config reference for the unit conventions.
double cloth_surface_temp(const OccupantParams& occ, double t_a);

// Dry heat loss: long-wave radiative exchange plus convection.
double dry_heat_loss(double t_cl, const ComfortEnv& env, double f_cl, double h_c);

// Evaporative heat exchange at the skin. The sweating term is clamped at
// zero so it never becomes a heat gain.
double evaporative_heat(const OccupantParams& occ);

// Respiratory convective and evaporative heat exchange.
double respiratory_convective(const OccupantParams& occ, double t_a);
double respiratory_evaporative(const OccupantParams& occ);

// Indoor-space PMV. Returns the raw index; reporting surfaces clamp with
// clamp_pmv_for_report.
double pmv_original(const OccupantParams& occ, const ComfortEnv& env);

// Occupant-felt air temperature: alpha1*T_cab + alpha2*T_ain.
double blended_air_temp(double t_cab, double t_ain, const OccupantParams& occ);

// Air velocity at the occupant from the blower mass flow.
double vent_air_velocity(double m_bl, const OccupantParams& occ);

// Automotive PMV: blended air temperature, interior surfaces as the radiant
// temperature, blower-driven air velocity, and the solar load added on the
// metabolic side. w_rad here is the effective occupant load (already scaled
// by solar_fraction where it comes from irradiance).
double pmv_modified(double t_cab, double t_ain, double t_int, double m_bl,
                    double w_rad, const OccupantParams& occ);

// Display clamp for PMV values; the sensation scale is defined on [-4, 4].
double clamp_pmv_for_report(double y);

// Seven-level thermal sensation label for a PMV value (nearest integer,
// clamped to [-3, 3]).
const char* sensation_level(double y);

// Comfort-zone bounds at elapsed time t (s).
ComfortBounds comfort_bounds(double t, const ComfortBoundsSpec& spec);

}  // namespace ceco
