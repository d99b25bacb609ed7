#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tidecoh/scenario.hpp"
#include "tidecoh/screen.hpp"

namespace tidecoh {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct DynamicsConfig {
  double gamma = 10.0;
  double t_max = 2.0;
  std::size_t n_grid = 50;
  std::size_t n_traj = 100000;
  std::uint64_t seed = 0;
};

/// Everything a subcommand needs. Missing keys take the defaults below,
/// which describe the balanced d = sqrt(0.8) two-slit scenario.
struct ScenarioConfig {
  Scenario scenario = reference_scenario();
  DynamicsConfig dynamics;
  ScreenGeometry screen;
  std::uint64_t n_hits = 100000;
  std::size_t random_sweep = 0;
  bool seed_from_config = false;

  // Canonical JSON rendering of the effective configuration.
  std::string canonical() const;
  // FNV-1a 64 of canonical(), as 16 hex digits.
  std::string hash() const;
};

// Parses the JSON config text. Throws ConfigError naming the line/column of a
// syntax error, or the offending field and violated constraint.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Seed precedence: explicit flag, then config file, then the environment
// variable TIDECOH_SEED, then 0.
std::uint64_t resolve_seed(const ScenarioConfig& cfg, std::optional<std::uint64_t> flag);

}  // namespace tidecoh
