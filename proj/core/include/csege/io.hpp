#pragma once

// Output formats: plain-text matrices, transmission curves, sweep CSVs with
// their key-value sidecars, and atomic file replacement.

#include "csege/many_body_matrix.hpp"
#include "csege/negf.hpp"
#include "csege/sweep.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace csege {

/// Writes `content` to a temporary file next to `path`, then renames it
/// over `path`. Throws IoError.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// One row per line, entries separated by single spaces, 17 significant
/// digits. The parser skips lines starting with '#'.
std::string format_matrix_text(const Eigen::MatrixXd& m);
Eigen::MatrixXd parse_matrix_text(std::string_view text);

/// Header "# E,T,eta=<eta>,seed=<seed>" (plus ",nu=<nu>" when given), then
/// one "E,T" row per grid point.
std::string format_transmission_csv(const TransmissionCurve& curve, double eta,
                                    std::uint64_t seed, std::optional<double> nu = std::nullopt);

/// "#"-prefixed experiment echo (config syntax), then
/// "param,mean_I,stderr,count,failures" and one row per grid point. Contains
/// nothing run-dependent, so equal specs give byte-identical files.
std::string format_sweep_csv(const SweepResult& result);

/// "key = value" metadata including version and timestamp.
std::string format_sweep_sidecar(const SweepResult& result);

/// Recovers the ExperimentSpec echoed in a sweep CSV header.
ExperimentSpec spec_from_sweep_csv(std::string_view csv);

/// Data rows of a sweep CSV.
std::vector<SweepPoint> points_from_sweep_csv(std::string_view csv);

}  // namespace csege
