#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "streamnav/fleet_simulator.hpp"
#include "streamnav/geometry.hpp"

namespace streamnav {

/// Settings for the pre-flight safety checks that are not part of the run.
struct CheckSettings {
  std::optional<Box> lambda_domain;  ///< default: agents' bounding box padded by 5 a_p
  double grid_step = 0.01;           ///< m

  friend bool operator==(const CheckSettings&, const CheckSettings&) = default;
};

/// A scenario document as stored on disk (JSON).
///
/// Top-level keys: name, seed, duration [s], preroll, margins {delta, epsilon}
/// [m], navigator {dt [s], k_passes, v_des [m/s]}, solver {iterations,
/// noise_sigma [m], saddle_det_threshold}, vehicle {mode, k_p [1/s],
/// disturbance_amplitude [m], disturbance_frequency [Hz]}, agents [{id,
/// position [m, m], altitude [m]}], failures [{agent, time [s]}], safety
/// {lambda_domain [x_min, x_max, y_min, y_max], grid_step [m]}. Unknown keys
/// are rejected; every key except agents is optional and defaults to the
/// six-agent values.
struct ConfigFile {
  Scenario scenario;
  CheckSettings check;

  friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

/// Throws ConfigParseError on malformed JSON, unknown keys or wrong types.
ConfigFile parse_config(const std::string& text);

/// Reads and parses; throws ConfigParseError if the file cannot be read.
ConfigFile load_config(const std::filesystem::path& path);

/// Serializes every field, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const ConfigFile& config);

/// Applies STREAMNAV_SEED from the environment, if set, to the scenario seed.
void apply_seed_override(ConfigFile& config);

/// Default lambda domain for a scenario: bounding box of all agent positions
/// padded by 5 a_p on every side.
Box default_lambda_domain(const Scenario& s);

}  // namespace streamnav
