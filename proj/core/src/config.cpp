#include "ceco/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ceco {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& file, int line,
                 const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ParseError("cannot parse value '" + v + "' for key " + key, file, line);
  }
}

std::uint64_t to_u64(const std::string& v, const std::string& file, int line,
                     const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return u;
  } catch (const std::exception&) {
    throw ParseError("cannot parse value '" + v + "' for key " + key, file, line);
  }
}

int to_int(const std::string& v, const std::string& file, int line,
           const std::string& key) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ParseError("cannot parse value '" + v + "' for key " + key, file, line);
  }
}

std::vector<std::pair<double, double>> to_knots(const std::string& v,
                                                const std::string& file,
                                                int line,
                                                const std::string& key) {
  std::vector<std::pair<double, double>> knots;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ParseError("knot '" + item + "' must be speed:multiplier for key " + key,
                       file, line);
    }
    knots.emplace_back(to_double(trim(item.substr(0, colon)), file, line, key),
                       to_double(trim(item.substr(colon + 1)), file, line, key));
  }
  if (knots.empty()) {
    throw ParseError("empty knot list for key " + key, file, line);
  }
  return knots;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> out;
  auto absorb = [&out](const char* section, std::vector<std::string> problems) {
    for (auto& p : problems) out.push_back(std::string(section) + ": " + p);
  };
  absorb("ac", plant.ac.validate());
  {
    // Plant problems minus the embedded ac ones, which are reported above.
    auto all = plant.validate();
    const auto ac_count = plant.ac.validate().size();
    all.erase(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(ac_count));
    absorb("plant", std::move(all));
  }
  absorb("occupant", occupant.validate());
  absorb("bounds", bounds.validate());
  absorb("mpc", mpc.validate());
  absorb("solver", solver.validate());
  if (cycle_path.empty()) out.push_back("scenario: cycle must be nonempty");
  if (output_dir.empty()) out.push_back("scenario: output_dir must be nonempty");
  return out;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file", path, 0);
  }
  return parse_config(in, path);
}

ScenarioConfig parse_config(std::istream& in, const std::string& name) {
  ScenarioConfig cfg;
  bool scenario_seed_set = false;

  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("unterminated section header", name, lineno);
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "ac" && section != "plant" && section != "occupant" &&
          section != "bounds" && section != "mpc" && section != "solver" &&
          section != "scenario") {
        throw ParseError("unknown section [" + section + "]", name, lineno);
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key = value", name, lineno);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ParseError("key '" + key + "' appears before any section", name, lineno);
    }

    auto num = [&] { return to_double(value, name, lineno, key); };

    if (section == "ac") {
      ACParams& ac = cfg.plant.ac;
      if (key == "gamma1") ac.gamma1 = num();
      else if (key == "gamma2") ac.gamma2 = num();
      else if (key == "gamma3") ac.gamma3 = num();
      else if (key == "gamma4") ac.gamma4 = num();
      else if (key == "gamma5") ac.gamma5 = num();
      else if (key == "gamma6") ac.gamma6 = num();
      else if (key == "gamma7") ac.gamma7 = num();
      else if (key == "tau1") ac.tau1 = num();
      else if (key == "tau2") ac.tau2 = num();
      else if (key == "tau3") ac.tau3 = num();
      else if (key == "sample_time") ac.sample_time = num();
      else if (key == "blower_power_coeff") ac.blower_power_coeff = num();
      else if (key == "cop_base") ac.cop_base = num();
      else if (key == "air_cp") ac.air_cp = num();
      else if (key == "eta_speed_knots") ac.eta_speed_knots = to_knots(value, name, lineno, key);
      else throw ParseError("unknown key '" + key + "' in [ac]", name, lineno);
    } else if (section == "plant") {
      if (key == "int_gain_cab") cfg.plant.int_gain_cab = num();
      else if (key == "int_gain_rad") cfg.plant.int_gain_rad = num();
      else if (key == "shell_gain_amb") cfg.plant.shell_gain_amb = num();
      else if (key == "shell_gain_speed") cfg.plant.shell_gain_speed = num();
      else if (key == "perturbation_seed") cfg.plant.perturbation_seed = to_u64(value, name, lineno, key);
      else if (key == "perturbation_fraction") cfg.plant.perturbation_fraction = num();
      else throw ParseError("unknown key '" + key + "' in [plant]", name, lineno);
    } else if (section == "occupant") {
      if (key == "metabolic_rate") cfg.occupant.metabolic_rate = num();
      else if (key == "mech_power") cfg.occupant.mech_power = num();
      else if (key == "clothing_insulation") cfg.occupant.clothing_insulation = num();
      else if (key == "vapor_pressure") cfg.occupant.vapor_pressure = num();
      else if (key == "alpha1") cfg.occupant.alpha1 = num();
      else if (key == "alpha2") cfg.occupant.alpha2 = num();
      else if (key == "vent_velocity_gain") cfg.occupant.vent_velocity_gain = num();
      else if (key == "solar_fraction") cfg.occupant.solar_fraction = num();
      else throw ParseError("unknown key '" + key + "' in [occupant]", name, lineno);
    } else if (section == "bounds") {
      if (key == "lb_const") cfg.bounds.lb_const = num();
      else if (key == "ub_final") cfg.bounds.ub_final = num();
      else if (key == "ub_initial") cfg.bounds.ub_initial = num();
      else if (key == "ub_decay_tau") cfg.bounds.ub_decay_tau = num();
      else throw ParseError("unknown key '" + key + "' in [bounds]", name, lineno);
    } else if (section == "mpc") {
      if (key == "np") cfg.mpc.np = to_int(value, name, lineno, key);
      else if (key == "ts") cfg.mpc.ts = num();
      else if (key == "comfort_weight") cfg.mpc.comfort_weight = num();
      else if (key == "ioch_beta") cfg.mpc.ioch_beta = num();
      else if (key == "ioch_xi") cfg.mpc.ioch_xi = num();
      else if (key == "ioch_eps_ub") cfg.mpc.ioch_eps_ub = num();
      else if (key == "pmv_soft_weight") cfg.mpc.pmv_soft_weight = num();
      else if (key == "t_evap_lb") cfg.mpc.t_evap_lb = num();
      else if (key == "t_evap_ub") cfg.mpc.t_evap_ub = num();
      else if (key == "m_bl_min") cfg.mpc.m_bl_min = num();
      else if (key == "m_bl_max") cfg.mpc.m_bl_max = num();
      else if (key == "t_evap_sp_min") cfg.mpc.t_evap_sp_min = num();
      else if (key == "t_evap_sp_max") cfg.mpc.t_evap_sp_max = num();
      else throw ParseError("unknown key '" + key + "' in [mpc]", name, lineno);
    } else if (section == "solver") {
      if (key == "tol") cfg.solver.tol = num();
      else if (key == "feas_tol") cfg.solver.feas_tol = num();
      else if (key == "max_iter") cfg.solver.max_iter = to_int(value, name, lineno, key);
      else if (key == "penalty_initial") cfg.solver.penalty_initial = num();
      else if (key == "penalty_growth") cfg.solver.penalty_growth = num();
      else if (key == "fd_step") cfg.solver.fd_step = num();
      else throw ParseError("unknown key '" + key + "' in [solver]", name, lineno);
    } else {  // scenario
      if (key == "cycle") cfg.cycle_path = value;
      else if (key == "output_dir") cfg.output_dir = value;
      else if (key == "seed") {
        cfg.seed = to_u64(value, name, lineno, key);
        scenario_seed_set = true;
      } else {
        throw ParseError("unknown key '" + key + "' in [scenario]", name, lineno);
      }
    }
  }

  if (scenario_seed_set) {
    cfg.plant.perturbation_seed = cfg.seed;
  } else {
    cfg.seed = cfg.plant.perturbation_seed;
  }
  return cfg;
}

void dump_config(std::ostream& out, const ScenarioConfig& cfg) {
  const ACParams& ac = cfg.plant.ac;
  out << "# A/C energy-and-comfort simulation scenario\n";
  out << "\n[ac]\n";
  out << "gamma1 = " << format_double(ac.gamma1) << '\n';
  out << "gamma2 = " << format_double(ac.gamma2) << '\n';
  out << "gamma3 = " << format_double(ac.gamma3) << '\n';
  out << "gamma4 = " << format_double(ac.gamma4) << '\n';
  out << "gamma5 = " << format_double(ac.gamma5) << '\n';
  out << "gamma6 = " << format_double(ac.gamma6) << '\n';
  out << "gamma7 = " << format_double(ac.gamma7) << '\n';
  out << "tau1 = " << format_double(ac.tau1) << '\n';
  out << "tau2 = " << format_double(ac.tau2) << '\n';
  out << "tau3 = " << format_double(ac.tau3) << '\n';
  out << "sample_time = " << format_double(ac.sample_time) << '\n';
  out << "blower_power_coeff = " << format_double(ac.blower_power_coeff) << '\n';
  out << "cop_base = " << format_double(ac.cop_base) << '\n';
  out << "air_cp = " << format_double(ac.air_cp) << '\n';
  out << "eta_speed_knots = ";
  for (std::size_t i = 0; i < ac.eta_speed_knots.size(); ++i) {
    if (i) out << ", ";
    out << format_double(ac.eta_speed_knots[i].first) << ':'
        << format_double(ac.eta_speed_knots[i].second);
  }
  out << '\n';

  out << "\n[plant]\n";
  out << "int_gain_cab = " << format_double(cfg.plant.int_gain_cab) << '\n';
  out << "int_gain_rad = " << format_double(cfg.plant.int_gain_rad) << '\n';
  out << "shell_gain_amb = " << format_double(cfg.plant.shell_gain_amb) << '\n';
  out << "shell_gain_speed = " << format_double(cfg.plant.shell_gain_speed) << '\n';
  out << "perturbation_seed = " << cfg.plant.perturbation_seed << '\n';
  out << "perturbation_fraction = " << format_double(cfg.plant.perturbation_fraction) << '\n';

  out << "\n[occupant]\n";
  out << "metabolic_rate = " << format_double(cfg.occupant.metabolic_rate) << '\n';
  out << "mech_power = " << format_double(cfg.occupant.mech_power) << '\n';
  out << "clothing_insulation = " << format_double(cfg.occupant.clothing_insulation) << '\n';
  out << "vapor_pressure = " << format_double(cfg.occupant.vapor_pressure) << '\n';
  out << "alpha1 = " << format_double(cfg.occupant.alpha1) << '\n';
  out << "alpha2 = " << format_double(cfg.occupant.alpha2) << '\n';
  out << "vent_velocity_gain = " << format_double(cfg.occupant.vent_velocity_gain) << '\n';
  out << "solar_fraction = " << format_double(cfg.occupant.solar_fraction) << '\n';

  out << "\n[bounds]\n";
  out << "lb_const = " << format_double(cfg.bounds.lb_const) << '\n';
  out << "ub_final = " << format_double(cfg.bounds.ub_final) << '\n';
  out << "ub_initial = " << format_double(cfg.bounds.ub_initial) << '\n';
  out << "ub_decay_tau = " << format_double(cfg.bounds.ub_decay_tau) << '\n';

  out << "\n[mpc]\n";
  out << "np = " << cfg.mpc.np << '\n';
  out << "ts = " << format_double(cfg.mpc.ts) << '\n';
  out << "comfort_weight = " << format_double(cfg.mpc.comfort_weight) << '\n';
  out << "ioch_beta = " << format_double(cfg.mpc.ioch_beta) << '\n';
  out << "ioch_xi = " << format_double(cfg.mpc.ioch_xi) << '\n';
  out << "ioch_eps_ub = " << format_double(cfg.mpc.ioch_eps_ub) << '\n';
  out << "pmv_soft_weight = " << format_double(cfg.mpc.pmv_soft_weight) << '\n';
  out << "t_evap_lb = " << format_double(cfg.mpc.t_evap_lb) << '\n';
  out << "t_evap_ub = " << format_double(cfg.mpc.t_evap_ub) << '\n';
  out << "m_bl_min = " << format_double(cfg.mpc.m_bl_min) << '\n';
  out << "m_bl_max = " << format_double(cfg.mpc.m_bl_max) << '\n';
  out << "t_evap_sp_min = " << format_double(cfg.mpc.t_evap_sp_min) << '\n';
  out << "t_evap_sp_max = " << format_double(cfg.mpc.t_evap_sp_max) << '\n';

  out << "\n[solver]\n";
  out << "tol = " << format_double(cfg.solver.tol) << '\n';
  out << "feas_tol = " << format_double(cfg.solver.feas_tol) << '\n';
  out << "max_iter = " << cfg.solver.max_iter << '\n';
  out << "penalty_initial = " << format_double(cfg.solver.penalty_initial) << '\n';
  out << "penalty_growth = " << format_double(cfg.solver.penalty_growth) << '\n';
  out << "fd_step = " << format_double(cfg.solver.fd_step) << '\n';

  out << "\n[scenario]\n";
  out << "cycle = " << cfg.cycle_path << '\n';
  out << "output_dir = " << cfg.output_dir << '\n';
  out << "seed = " << cfg.seed << '\n';
}

}  // namespace ceco
