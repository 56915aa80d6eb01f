#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "suplab/mode.hpp"
#include "suplab/simulator.hpp"

namespace suplab {

// Simulation config file. Every field is optional; absent ones fall back to
// the command line or the library defaults.
//
//   {
//     "seed": 42,
//     "intensity": "medium",
//     "tuning": {"alphaSigma": 0.2, "betaSigma": 0.2, "gamma": 40, "smootherWindow": 5},
//     "appliances": [{"name": "dryer", "turnOnPdf": [24 weights], "intensity": "high"}]
//   }
struct ApplianceEntry {
  std::string name;
  std::optional<TurnOnDistribution> turn_on;
  std::optional<Intensity> intensity;
};

struct SimulationConfig {
  std::optional<std::uint64_t> seed;
  std::optional<Intensity> intensity;
  SimTuning tuning;
  std::vector<ApplianceEntry> appliances;
};

// Strict: unknown fields and malformed values raise Error(Validation) naming
// the offending path; malformed JSON raises Error(Parse).
SimulationConfig parse_simulation_config(std::string_view text);
SimulationConfig load_simulation_config(const std::filesystem::path& path);

// Appliance setups for a run: the config's appliances (all of the library's
// when the config lists none), each with its own intensity if given and
// `fallback` otherwise.
std::vector<ApplianceSetup> resolve_appliances(const SimulationConfig& config, const SuproLibrary& library,
                                               Intensity fallback);

}  // namespace suplab
