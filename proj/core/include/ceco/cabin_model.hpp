#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ceco/errors.hpp"

namespace ceco {

// Control-oriented A/C thermal model: one-step cabin/evaporator temperature
// maps, the static vent-air temperature map, electrical power models, and the
// speed-dependent efficiency multiplier. Temperatures are in Kelvin
// throughout; Celsius appears only at the comfort-model boundary.

struct ACParams {
  double gamma1 = 0.02;   // cabin<-interior coupling, per step
  double gamma2 = 0.01;   // cabin<-shell coupling, per step
  double gamma3 = 0.25;   // cabin<-vent coupling, per (kg/s) per step
  double gamma4 = 1.0;    // evaporator inertia
  double gamma5 = -0.3;   // evaporator tracking gain
  double gamma6 = 1.0;    // vent<-evaporator gain
  double gamma7 = 30.0;   // vent blower heating, K per (kg/s)
  double tau1 = 0.3;      // K offsets; tau1 carries the constant heat ingress
  double tau2 = 0.0;
  double tau3 = 0.0;
  double sample_time = 5.0;           // s
  double blower_power_coeff = 6.0e4;  // W per (kg/s)^3
  double cop_base = 2.5;
  double air_cp = 1005.0;  // J/(kg K)
  // Piecewise-linear A/C efficiency multiplier vs vehicle speed (m/s).
  std::vector<std::pair<double, double>> eta_speed_knots = {
      {0.0, 1.0}, {10.0, 1.08}, {20.0, 1.22}, {30.0, 1.35}};

  // Returns one message per violated invariant; empty means valid.
  std::vector<std::string> validate() const;
};

struct ACState {
  double t_cab = 313.15;    // average cabin air temperature, K
  double t_evap = 288.15;   // evaporator wall temperature, K
  double t_int = 313.15;    // cabin interior (seats/panels) temperature, K
  double t_shell = 318.15;  // cabin shell temperature, K

  std::vector<std::string> validate() const;
};

inline constexpr double kTempMinK = 230.0;
inline constexpr double kTempMaxK = 360.0;

inline constexpr double kBlowerFlowMin = 0.05;   // kg/s
inline constexpr double kBlowerFlowMax = 0.17;   // kg/s
inline constexpr double kEvapSetpointMin = 276.15;  // K (3 C)
inline constexpr double kEvapSetpointMax = 283.15;  // K (10 C)

struct ControlInput {
  double m_bl = 0.1;         // blower mass flow, kg/s
  double t_evap_sp = 279.15;  // evaporator set-point, K

  std::vector<std::string> validate() const;
};

struct ExogenousSample {
  double v_veh = 0.0;    // m/s
  double w_rad = 0.0;    // W/m^2 solar irradiance at the vehicle
  double t_amb = 308.15; // K

  std::vector<std::string> validate() const;
};

// Surrogate plant parameters. The plant evolves the two auxiliary
// temperatures with first-order laws and realizes plant/model mismatch by a
// one-time seeded multiplicative perturbation of the gamma gains.
struct PlantParams {
  ACParams ac;
  double int_gain_cab = 0.12;      // 1/step pull of interior toward cabin air
  double int_gain_rad = 8.4e-4;    // K m^2/W per step solar heating of interior
  double shell_gain_amb = 0.01;    // 1/step pull of shell toward ambient
  double shell_gain_speed = 5.0e-4;  // K s/m per step ram-air effect
  std::uint64_t perturbation_seed = 1;
  double perturbation_fraction = 0.05;  // in [0, 0.2]

  std::vector<std::string> validate() const;
};

// --- nominal one-step maps -------------------------------------------------

// Next cabin air temperature given the current state, control, and the vent
// discharge temperature t_ain.
double step_cabin_temp(const ACState& state, const ControlInput& u,
                       double t_ain, const ACParams& p);

// Next evaporator wall temperature.
double step_evap_temp(double t_evap, double t_evap_sp, const ACParams& p);

// Static vent (discharge) air temperature.
double vent_air_temp(double t_evap, double m_bl, const ACParams& p);

// --- power models ------------------------------------------------------------

// Fan affinity law, coeff * m_bl^3.
double blower_power(double m_bl, const ACParams& p);

// Piecewise-linear interpolation of eta_speed_knots, clamped at the end
// knots. Nondecreasing, >= 1.
double efficiency_multiplier(double v_veh, const ACParams& p);

// Electrical compressor power: sensible cooling load divided by the
// speed-corrected coefficient of performance.
double compressor_power(const ACState& state, const ControlInput& u,
                        const ExogenousSample& ex, const ACParams& p);

// --- surrogate plant ---------------------------------------------------------

// Stands in for a high-fidelity refrigerant-loop model. Gamma gains are
// perturbed once at construction (deterministic given the seed); every step
// after that is a pure function of (state, control, exogenous).
class SurrogatePlant {
 public:
  explicit SurrogatePlant(const PlantParams& params);

  // Advances all four temperatures by one sample step. Throws
  // ModelDivergenceError if any temperature leaves [230, 360] K.
  ACState step(const ACState& state, const ControlInput& u,
               const ExogenousSample& ex) const;

  // Actual electrical powers drawn for (state, control), using the perturbed
  // gains. These are what the energy metrics integrate.
  double actual_compressor_power(const ACState& state, const ControlInput& u,
                                 const ExogenousSample& ex) const;
  double actual_blower_power(double m_bl) const;

  const ACParams& perturbed_ac() const noexcept { return perturbed_; }
  const PlantParams& params() const noexcept { return params_; }

 private:
  PlantParams params_;
  ACParams perturbed_;
};

// Free-function form of one plant step; constructs nothing beyond the
// perturbed parameters held by `plant`.
ACState plant_step(const SurrogatePlant& plant, const ACState& state,
                   const ControlInput& u, const ExogenousSample& ex);

}  // namespace ceco
