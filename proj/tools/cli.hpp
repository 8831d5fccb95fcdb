#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace csege::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kNumericalFailure = 2,
  kIoFailure = 3,
};

/// Parsed command line. Override fields are empty unless given.
struct RunConfig {
  std::string subcommand;
  std::string config_path;
  std::string output_dir;
  unsigned threads = 0;
  int verbosity = 0;

  // Single-realization subcommands.
  int levels = 6;
  int particles = 5;
  int rank = 3;
  std::string ensemble = "ege";
  std::string construction = "projection";
  double emin = -15.0;
  double emax = 15.0;
  int points = 2000;

  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<double> eta;
  std::optional<double> nu;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::optional<int> grid_points;
  std::optional<std::string> grid_scale;
  std::optional<std::string> construction_override;
  std::vector<std::string> only;
  bool full_scale = false;
};

/// Entry point shared by the executable and the tests. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace csege::cli
