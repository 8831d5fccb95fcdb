#pragma once

// Ensemble experiments over parameter grids with counter-based seeding,
// parallel realizations and order-independent statistics.

#include "csege/ensembles.hpp"
#include "csege/fock.hpp"
#include "csege/quadrature.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csege {

enum class ExperimentKind {
  kMixCsVsEge,       // sqrt(1-eps) csEGE(k) + sqrt(eps) EGE(k')
  kMixSameEnsemble,  // both terms from `ensemble`, ranks k and k'
  kParityBreak,      // sqrt(1-eps) csEGE(k) + sqrt(eps) H_B
  kCsBreak,          // sqrt(1-eps) csEGE(k) + sqrt(eps) H_D
  kEtaSweep,         // `ensemble`(k), grid over contact strength eta
  kDephasingSweep,   // `ensemble`(k), grid over probe strength nu
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view s);

/// Number of realizations used by the full-scale reproduction.
inline constexpr int kFullScaleRealizations = 10000;

struct ExperimentSpec {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::kMixCsVsEge;
  BasisSpec basis{6, 5};
  int k = 3;
  int k_prime = 3;
  EnsembleKind ensemble = EnsembleKind::kCsege;
  CsConstruction construction = CsConstruction::kProjection;
  std::vector<double> grid;
  int realizations = 500;
  std::uint64_t master_seed = 1;
  /// Contact strength; ignored by kEtaSweep, whose grid is eta.
  double eta = 0.5;
  /// Background dephasing; ignored by kDephasingSweep, whose grid is nu.
  double nu = 0.0;
  QuadratureSpec quad;

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// The (left, right) ensembles of the mixing kinds.
  EnsembleDescriptor left() const;
  EnsembleDescriptor right() const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

std::vector<double> linear_grid(double start, double stop, std::size_t points);
std::vector<double> log_grid(double start, double stop, std::size_t points);

/// {0, 0.01, ..., 1}.
std::vector<double> default_eps_grid();
/// Linear {0.1 .. 3} (25 points) merged with log {1e-2 .. 1e1} (25 points).
std::vector<double> default_eta_grid();
/// {0} followed by log {1e-3 .. 50} (25 points).
std::vector<double> default_nu_grid();
std::vector<double> default_grid(ExperimentKind kind);

struct SweepPoint {
  double param = 0.0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
  std::size_t failures = 0;
};

struct SweepResult {
  ExperimentSpec spec;
  std::vector<SweepPoint> points;
  /// realizations x grid; NaN marks a failed realization.
  Eigen::MatrixXd samples;
  std::string version;
  std::string timestamp;
};

struct SweepOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Abort when more than this fraction of realizations fails at a grid point.
  double failure_budget = 0.01;
};

/// Deterministic pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Mean and standard error (sample stddev / sqrt(count)) of the finite
/// entries, accumulated in index order.
SweepPoint summarize(double param, std::span<const double> samples);

SweepResult run_mix_experiment(const ExperimentSpec& spec, const SweepOptions& options = {});
SweepResult run_parity_break(const ExperimentSpec& spec, const SweepOptions& options = {});
SweepResult run_cs_break(const ExperimentSpec& spec, const SweepOptions& options = {});
SweepResult run_eta_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});
SweepResult run_dephasing_sweep(const ExperimentSpec& spec, const SweepOptions& options = {});

/// Dispatches on spec.kind.
SweepResult run_experiment(const ExperimentSpec& spec, const SweepOptions& options = {});

}  // namespace csege
