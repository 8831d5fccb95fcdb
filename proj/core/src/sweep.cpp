#include "csege/sweep.hpp"

#include "csege/dephasing.hpp"
#include "csege/error.hpp"
#include "csege/negf.hpp"
#include "csege/rng.hpp"
#include "csege/version.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

namespace csege {

namespace {

constexpr std::uint64_t kLeftStream = 0;
constexpr std::uint64_t kRightStream = 1;

bool is_mixing(ExperimentKind kind) {
  return kind == ExperimentKind::kMixCsVsEge || kind == ExperimentKind::kMixSameEnsemble ||
         kind == ExperimentKind::kParityBreak || kind == ExperimentKind::kCsBreak;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", tm);
}

// Per-realization kernel: fills one row of currents (NaN = failed point).
using RealizationKernel = std::function<void(int realization, std::span<double> row)>;

SweepResult run_realizations(const ExperimentSpec& spec, const SweepOptions& options,
                             const RealizationKernel& kernel) {
  const int count = spec.realizations;
  const auto grid_size = static_cast<Eigen::Index>(spec.grid.size());
  // Row-major so each realization owns a contiguous row.
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor samples = RowMajor::Constant(count, grid_size, std::numeric_limits<double>::quiet_NaN());

  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::mutex fatal_mutex;
  std::exception_ptr fatal;

  auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= count || stop.load()) return;
      std::span<double> row(samples.row(r).data(), static_cast<std::size_t>(grid_size));
      try {
        kernel(r, row);
      } catch (const NumericalError&) {
        // Sampling itself failed: the whole row stays NaN.
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  SweepResult result;
  result.spec = spec;
  result.samples = samples;
  result.version = kVersion;
  result.timestamp = utc_timestamp();
  for (Eigen::Index g = 0; g < grid_size; ++g) {
    const Eigen::VectorXd column = result.samples.col(g);
    result.points.push_back(summarize(spec.grid[static_cast<std::size_t>(g)],
                                      std::span<const double>(column.data(), column.size())));
    const SweepPoint& p = result.points.back();
    if (static_cast<double>(p.failures) > options.failure_budget * count) {
      throw FailureBudgetError(fmt::format(
          "experiment '{}': {} of {} realizations failed at grid value {} (budget {:.0f}%)",
          spec.name, p.failures, count, p.param, 100.0 * options.failure_budget));
    }
  }
  return result;
}

template <typename Fn>
void fill_point(std::span<double> row, std::size_t g, Fn&& fn) {
  try {
    row[g] = fn();
  } catch (const NumericalError&) {
    row[g] = std::numeric_limits<double>::quiet_NaN();
  }
}

void require_kind(const ExperimentSpec& spec, std::initializer_list<ExperimentKind> allowed,
                  std::string_view runner) {
  if (std::find(allowed.begin(), allowed.end(), spec.kind) == allowed.end()) {
    throw ConfigError(fmt::format("{} cannot run experiment kind '{}'", runner,
                                  to_string(spec.kind)));
  }
}

SweepResult run_mixing(const ExperimentSpec& spec, const SweepOptions& options) {
  spec.validate();
  const Basis basis = enumerate_basis(spec.basis);
  const ContactPair contacts = transport_contacts(basis, spec.eta);
  const DephasingSpec deph{spec.nu};
  const EnsembleDescriptor left = spec.left();
  const EnsembleDescriptor right = spec.right();
  return run_realizations(spec, options, [&](int r, std::span<double> row) {
    const auto ur = static_cast<std::uint64_t>(r);
    // One (left, right) pair per realization, reused across the eps grid.
    const ManyBodyMatrix a = left.sample(basis, derive_seed(spec.master_seed, ur, kLeftStream));
    const ManyBodyMatrix b = right.sample(basis, derive_seed(spec.master_seed, ur, kRightStream));
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      fill_point(row, g, [&] {
        return dephased_current(mix(spec.grid[g], a, b), contacts, deph, spec.quad).value;
      });
    }
  });
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kMixCsVsEge: return "mix-cs-vs-ege";
    case ExperimentKind::kMixSameEnsemble: return "mix-same-ensemble";
    case ExperimentKind::kParityBreak: return "parity-break";
    case ExperimentKind::kCsBreak: return "cs-break";
    case ExperimentKind::kEtaSweep: return "eta-sweep";
    case ExperimentKind::kDephasingSweep: return "dephasing-sweep";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view s) {
  for (auto kind : {ExperimentKind::kMixCsVsEge, ExperimentKind::kMixSameEnsemble,
                    ExperimentKind::kParityBreak, ExperimentKind::kCsBreak,
                    ExperimentKind::kEtaSweep, ExperimentKind::kDephasingSweep}) {
    if (s == to_string(kind)) return kind;
  }
  throw ConfigError(fmt::format(
      "unknown experiment kind '{}' (expected mix-cs-vs-ege, mix-same-ensemble, parity-break, "
      "cs-break, eta-sweep or dephasing-sweep)", s));
}

void ExperimentSpec::validate() const {
  auto fail = [this](std::string_view field, const std::string& msg) {
    throw ConfigError(fmt::format("experiment '{}': {}: {}", name, field, msg));
  };
  try {
    basis.validate();
  } catch (const ConfigError& e) {
    fail("l/n", e.what());
  }
  if (basis.dimension() > kDefaultDimensionCap) {
    fail("l/n", fmt::format("basis dimension {} exceeds {}", basis.dimension(),
                            kDefaultDimensionCap));
  }
  if (k < 1 || k > basis.particles) fail("k", fmt::format("must be in [1, {}], got {}", basis.particles, k));
  if (kind == ExperimentKind::kMixCsVsEge || kind == ExperimentKind::kMixSameEnsemble) {
    if (k_prime < 1 || k_prime > basis.particles) {
      fail("k_prime", fmt::format("must be in [1, {}], got {}", basis.particles, k_prime));
    }
  }
  if (!is_mixing(kind) || kind == ExperimentKind::kMixSameEnsemble) {
    if (ensemble != EnsembleKind::kEge && ensemble != EnsembleKind::kCsege) {
      fail("ensemble", fmt::format("must be ege or csege, got {}", to_string(ensemble)));
    }
  }
  if (kind == ExperimentKind::kParityBreak || kind == ExperimentKind::kCsBreak) {
    const Basis b = enumerate_basis(basis);
    if (b.size() % 2 != 0 || (kind == ExperimentKind::kParityBreak && !b.fixed_point_free())) {
      fail("l/n", fmt::format("{} needs an even basis without self-conjugate states",
                              to_string(kind)));
    }
  }
  if (grid.empty()) fail("grid", "must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) fail("grid", "entries must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1])) fail("grid", "must be strictly increasing");
  }
  if (is_mixing(kind) && (grid.front() < 0.0 || grid.back() > 1.0)) {
    fail("grid", "eps values must lie in [0, 1]");
  }
  if (kind == ExperimentKind::kEtaSweep && !(grid.front() > 0.0)) {
    fail("grid", "eta values must be positive");
  }
  if (kind == ExperimentKind::kDephasingSweep && grid.front() < 0.0) {
    fail("grid", "nu values must be nonnegative");
  }
  if (realizations < 1) fail("realizations", fmt::format("must be >= 1, got {}", realizations));
  // Config files store the seed as a signed 64-bit integer.
  if (master_seed > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    fail("seed", fmt::format("must be < 2^63, got {}", master_seed));
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) fail("eta", fmt::format("must be positive, got {}", eta));
  if (!(nu >= 0.0) || !std::isfinite(nu)) fail("nu", fmt::format("must be >= 0, got {}", nu));
  try {
    quad.validate();
  } catch (const ConfigError& e) {
    fail("quadrature", e.what());
  }
}

EnsembleDescriptor ExperimentSpec::left() const {
  switch (kind) {
    case ExperimentKind::kMixCsVsEge:
    case ExperimentKind::kParityBreak:
    case ExperimentKind::kCsBreak:
      return {EnsembleKind::kCsege, k, construction};
    default:
      return {ensemble, k, construction};
  }
}

EnsembleDescriptor ExperimentSpec::right() const {
  switch (kind) {
    case ExperimentKind::kMixCsVsEge: return {EnsembleKind::kEge, k_prime, construction};
    case ExperimentKind::kMixSameEnsemble: return {ensemble, k_prime, construction};
    case ExperimentKind::kParityBreak: return {EnsembleKind::kParityBreaker, k, construction};
    case ExperimentKind::kCsBreak: return {EnsembleKind::kCsBreaker, k, construction};
    default: return left();
  }
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
  if (points == 1) return {start};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  g.back() = stop;
  return g;
}

std::vector<double> log_grid(double start, double stop, std::size_t points) {
  if (!(start > 0.0) || !(stop > 0.0)) throw ConfigError("log grid bounds must be positive");
  if (points == 1) return {start};
  std::vector<double> g(points);
  const double ratio = std::log(stop / start);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = start * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  g.front() = start;
  g.back() = stop;
  return g;
}

std::vector<double> default_eps_grid() {
  std::vector<double> g(101);
  for (int i = 0; i <= 100; ++i) g[static_cast<std::size_t>(i)] = i / 100.0;
  return g;
}

std::vector<double> default_eta_grid() {
  std::vector<double> g = linear_grid(0.1, 3.0, 25);
  const std::vector<double> logs = log_grid(1e-2, 1e1, 25);
  g.insert(g.end(), logs.begin(), logs.end());
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<double> default_nu_grid() {
  std::vector<double> g{0.0};
  const std::vector<double> logs = log_grid(1e-3, 50.0, 25);
  g.insert(g.end(), logs.begin(), logs.end());
  return g;
}

std::vector<double> default_grid(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kEtaSweep: return default_eta_grid();
    case ExperimentKind::kDephasingSweep: return default_nu_grid();
    default: return default_eps_grid();
  }
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SweepPoint summarize(double param, std::span<const double> samples) {
  std::vector<double> ok;
  ok.reserve(samples.size());
  for (double x : samples) {
    if (std::isfinite(x)) ok.push_back(x);
  }
  SweepPoint p;
  p.param = param;
  p.count = ok.size();
  p.failures = samples.size() - ok.size();
  if (ok.empty()) {
    p.mean = std::numeric_limits<double>::quiet_NaN();
    return p;
  }
  const auto n = static_cast<double>(ok.size());
  p.mean = pairwise_sum(ok) / n;
  if (ok.size() > 1) {
    std::vector<double> sq(ok.size());
    for (std::size_t i = 0; i < ok.size(); ++i) sq[i] = (ok[i] - p.mean) * (ok[i] - p.mean);
    p.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0)) / std::sqrt(n);
  }
  return p;
}

SweepResult run_mix_experiment(const ExperimentSpec& spec, const SweepOptions& options) {
  require_kind(spec, {ExperimentKind::kMixCsVsEge, ExperimentKind::kMixSameEnsemble},
               "run_mix_experiment");
  return run_mixing(spec, options);
}

SweepResult run_parity_break(const ExperimentSpec& spec, const SweepOptions& options) {
  require_kind(spec, {ExperimentKind::kParityBreak}, "run_parity_break");
  return run_mixing(spec, options);
}

SweepResult run_cs_break(const ExperimentSpec& spec, const SweepOptions& options) {
  require_kind(spec, {ExperimentKind::kCsBreak}, "run_cs_break");
  return run_mixing(spec, options);
}

SweepResult run_eta_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
  require_kind(spec, {ExperimentKind::kEtaSweep}, "run_eta_sweep");
  spec.validate();
  const Basis basis = enumerate_basis(spec.basis);
  const DephasingSpec deph{spec.nu};
  const EnsembleDescriptor ensemble = spec.left();
  return run_realizations(spec, options, [&](int r, std::span<double> row) {
    const ManyBodyMatrix h = ensemble.sample(
        basis, derive_seed(spec.master_seed, static_cast<std::uint64_t>(r), kLeftStream));
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      fill_point(row, g, [&] {
        return dephased_current(h, transport_contacts(basis, spec.grid[g]), deph, spec.quad).value;
      });
    }
  });
}

SweepResult run_dephasing_sweep(const ExperimentSpec& spec, const SweepOptions& options) {
  require_kind(spec, {ExperimentKind::kDephasingSweep}, "run_dephasing_sweep");
  spec.validate();
  const Basis basis = enumerate_basis(spec.basis);
  const ContactPair contacts = transport_contacts(basis, spec.eta);
  const EnsembleDescriptor ensemble = spec.left();
  return run_realizations(spec, options, [&](int r, std::span<double> row) {
    const ManyBodyMatrix h = ensemble.sample(
        basis, derive_seed(spec.master_seed, static_cast<std::uint64_t>(r), kLeftStream));
    for (std::size_t g = 0; g < spec.grid.size(); ++g) {
      fill_point(row, g, [&] {
        return dephased_current(h, contacts, DephasingSpec{spec.grid[g]}, spec.quad).value;
      });
    }
  });
}

SweepResult run_experiment(const ExperimentSpec& spec, const SweepOptions& options) {
  switch (spec.kind) {
    case ExperimentKind::kMixCsVsEge:
    case ExperimentKind::kMixSameEnsemble: return run_mix_experiment(spec, options);
    case ExperimentKind::kParityBreak: return run_parity_break(spec, options);
    case ExperimentKind::kCsBreak: return run_cs_break(spec, options);
    case ExperimentKind::kEtaSweep: return run_eta_sweep(spec, options);
    case ExperimentKind::kDephasingSweep: return run_dephasing_sweep(spec, options);
  }
  throw std::logic_error("unreachable");
}

}  // namespace csege
