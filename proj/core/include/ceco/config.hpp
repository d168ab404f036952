#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ceco/cabin_model.hpp"
#include "ceco/comfort.hpp"
#include "ceco/mpc.hpp"
#include "ceco/nlp_solver.hpp"

namespace ceco {

// Scenario configuration: a flat sectioned key = value text file holding one
// section per parameter struct plus the run scenario (cycle path, output
// directory, seed). '#' starts a comment; keys are exactly the struct field
// names. eta_speed_knots is a comma-separated list of speed:multiplier pairs.

struct ScenarioConfig {
  PlantParams plant;  // [ac] fills plant.ac, [plant] the rest
  OccupantParams occupant;
  ComfortBoundsSpec bounds;
  MpcConfig mpc;
  SolverOptions solver;
  std::string cycle_path = "data/sc03_like_600s.csv";
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // Controller-facing view of the scenario (nominal model only).
  MpcModel mpc_model() const { return {plant.ac, occupant, mpc, solver}; }

  // All invariant violations across every section, prefixed by section name;
  // empty means the scenario is runnable.
  std::vector<std::string> validate() const;
};

// Parses a config file. Unknown sections or keys and unparsable values are
// reported as ParseError with line numbers; invariants are NOT checked here
// (call validate()).
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(std::istream& in, const std::string& name);

// Writes a config that parses back to exactly the given scenario.
void dump_config(std::ostream& out, const ScenarioConfig& config);

}  // namespace ceco
