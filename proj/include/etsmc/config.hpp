#pragma once

#include <optional>
#include <string>

#include "etsmc/sim_engine.hpp"

namespace etsmc {

/// Fully validated parameter set. Input is a TOML subset: [section] headers,
/// `key = value` lines with numbers, booleans or double-quoted strings, and
/// `#` comments. Sections: limb, sea, gains, trigger, trajectory, sim.
struct Config {
  Model model;
  SimConfig sim;
  std::optional<std::string> trajectory_file;
  /// Require rho >= g0 d0 + eta (advisory by default).
  bool check_rho_bound = false;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);
/// Defaults with full validation applied.
Config default_config();

/// Effective configuration with every key spelled out; parse_config of the
/// result reproduces the same parameter set.
std::string dump_config(const Config& cfg);

/// Range and cross-field checks; throws ConfigError naming the key.
void validate_config(const Config& cfg);

}  // namespace etsmc
