#pragma once

// Experiment configuration files: a small TOML subset with one [section]
// per experiment. Supported values are strings, booleans, integers
// (underscores allowed), floats and flat arrays of numbers. Keys placed
// before the first section are defaults for every experiment.
//
//   seed = 2018
//   [parity_k3]
//   kind = "parity-break"
//   k = 3
//   grid_start = 0.0
//   grid_stop = 1.0
//   grid_points = 101

#include "csege/sweep.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace csege {

using ConfigValue = std::variant<bool, std::int64_t, double, std::string, std::vector<double>>;

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  int line = 0;
};

struct ConfigSection {
  std::string name;  // empty for the leading default block
  std::vector<ConfigEntry> entries;
};

struct ConfigDocument {
  std::vector<ConfigSection> sections;
};

/// Throws ConfigError with the line number on malformed input.
ConfigDocument parse_config(std::string_view text);

/// One ExperimentSpec per named section, with defaults merged in. Unknown
/// keys and type mismatches are errors naming the section and field.
std::vector<ExperimentSpec> experiments_from_config(const ConfigDocument& doc);
std::vector<ExperimentSpec> load_experiments(std::string_view text);

/// Section text that parses back to an identical ExperimentSpec. The grid is
/// always written out explicitly.
std::string experiment_to_config(const ExperimentSpec& spec);
std::string experiments_to_config(const std::vector<ExperimentSpec>& specs);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double x);

}  // namespace csege
