#include "cli.hpp"

#include "csege/config.hpp"
#include "csege/dephasing.hpp"
#include "csege/ensembles.hpp"
#include "csege/error.hpp"
#include "csege/io.hpp"
#include "csege/negf.hpp"
#include "csege/sweep.hpp"
#include "csege/version.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <ostream>

namespace csege::cli {

namespace {

namespace fs = std::filesystem;

void add_sample_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--l", cfg.levels, "Number of single-particle levels")->capture_default_str();
  cmd.add_option("--n", cfg.particles, "Number of fermions")->capture_default_str();
  cmd.add_option("--k", cfg.rank, "Interaction rank")->capture_default_str();
  cmd.add_flag_callback("--cs", [&cfg] { cfg.ensemble = "csege"; },
                        "Draw from the centrosymmetric ensemble (same as --ensemble csege)");
  cmd.add_option("--ensemble", cfg.ensemble, "ege | csege | parity-breaker | cs-breaker")
      ->capture_default_str();
  cmd.add_option("--construction", cfg.construction, "csEGE construction: projection | coupling-orbit")
      ->capture_default_str();
  cmd.add_option("--seed", cfg.seed, "Random seed (default 1)");
}

void add_common_options(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--out", cfg.output_dir, "Output directory (default: stdout where applicable)");
  cmd.add_flag("-v,--verbose", cfg.verbosity, "Print progress to stderr");
}

unsigned default_threads() {
  if (const char* env = std::getenv("CSEGE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || n < 1 || n > 4096) {
      throw ConfigError(fmt::format("CSEGE_THREADS must be a positive integer, got '{}'", env));
    }
    return static_cast<unsigned>(n);
  }
  return 0;
}

fs::path prepare_output_dir(const std::string& dir) {
  const fs::path path = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec || !fs::is_directory(path)) {
    throw IoError(fmt::format("cannot create output directory '{}'", path.string()));
  }
  return path;
}

struct Sample {
  Basis basis;
  EnsembleDescriptor descriptor;
  std::uint64_t seed;
  ManyBodyMatrix matrix;
};

Sample draw(const RunConfig& cfg) {
  Basis basis = enumerate_basis(BasisSpec{cfg.levels, cfg.particles});
  EnsembleDescriptor d{parse_ensemble_kind(cfg.ensemble), cfg.rank,
                       parse_cs_construction(cfg.construction)};
  const std::uint64_t seed = cfg.seed.value_or(1);
  ManyBodyMatrix m = d.sample(basis, seed);
  return Sample{std::move(basis), d, seed, std::move(m)};
}

std::string provenance(const RunConfig& cfg, const Sample& s) {
  return fmt::format("l={},n={},k={},ensemble={},construction={},seed={},version={}",
                     cfg.levels, cfg.particles, cfg.rank, to_string(s.descriptor.kind),
                     to_string(s.descriptor.construction), s.seed, kVersion);
}

std::string file_stem(const RunConfig& cfg, const Sample& s) {
  return fmt::format("{}_{}_k{}_seed{}", s.basis.tag(), to_string(s.descriptor.kind), cfg.rank,
                     s.seed);
}

void emit(const RunConfig& cfg, const std::string& filename, const std::string& content,
          std::ostream& out) {
  if (cfg.output_dir.empty()) {
    out << content;
    return;
  }
  const fs::path path = prepare_output_dir(cfg.output_dir) / filename;
  atomic_write(path, content);
  out << fmt::format("wrote {}\n", path.string());
}

int run_generate(const RunConfig& cfg, std::ostream& out) {
  const Sample s = draw(cfg);
  std::string content = fmt::format("# csege generate {}\n", provenance(cfg, s));
  content += format_matrix_text(s.matrix.values());
  emit(cfg, fmt::format("matrix_{}.txt", file_stem(cfg, s)), content, out);
  return kOk;
}

int run_transmission(const RunConfig& cfg, std::ostream& out) {
  const Sample s = draw(cfg);
  const double eta = cfg.eta.value_or(0.5);
  const DephasingSpec deph{cfg.nu.value_or(0.0)};
  deph.validate();
  const ContactPair contacts = transport_contacts(s.basis, eta);
  const auto energies = energy_grid(cfg.emin, cfg.emax, static_cast<std::size_t>(cfg.points));
  const TransmissionCurve curve = effective_transmission_curve(s.matrix, contacts, deph, energies);
  std::string content = format_transmission_csv(curve, eta, s.seed, cfg.nu);
  // Second comment line: everything else needed to redraw the realization.
  content.insert(content.find('\n') + 1, fmt::format("# {}\n", provenance(cfg, s)));
  emit(cfg, fmt::format("transmission_{}.csv", file_stem(cfg, s)), content, out);
  return kOk;
}

int run_current(const RunConfig& cfg, std::ostream& out) {
  const Sample s = draw(cfg);
  const double eta = cfg.eta.value_or(0.5);
  const DephasingSpec deph{cfg.nu.value_or(0.0)};
  deph.validate();
  const CurrentResult r = dephased_current(s.matrix, transport_contacts(s.basis, eta), deph);
  std::string content = fmt::format("# {}\n", provenance(cfg, s));
  content += fmt::format("eta = {}\nnu = {}\n", format_double(eta), format_double(deph.nu));
  content += fmt::format("current = {:.17g}\nabs_error_estimate = {:.17g}\nevaluations = {}\n"
                         "window = {:.17g}\n",
                         r.value, r.abs_error_estimate, r.evaluations, r.window);
  emit(cfg, fmt::format("current_{}.txt", file_stem(cfg, s)), content, out);
  return kOk;
}

void apply_overrides(const RunConfig& cfg, ExperimentSpec& spec) {
  if (cfg.full_scale && cfg.realizations) {
    throw ConfigError("--full-scale and --realizations are mutually exclusive");
  }
  if (cfg.seed) spec.master_seed = *cfg.seed;
  if (cfg.realizations) spec.realizations = *cfg.realizations;
  if (cfg.full_scale) spec.realizations = kFullScaleRealizations;
  if (cfg.eta) spec.eta = *cfg.eta;
  if (cfg.nu) spec.nu = *cfg.nu;
  if (cfg.construction_override) {
    spec.construction = parse_cs_construction(*cfg.construction_override);
  }
  if (cfg.grid_min || cfg.grid_max || cfg.grid_points || cfg.grid_scale) {
    const double lo = cfg.grid_min.value_or(spec.grid.front());
    const double hi = cfg.grid_max.value_or(spec.grid.back());
    const int points = cfg.grid_points.value_or(static_cast<int>(spec.grid.size()));
    if (points < 1) throw ConfigError("--grid-points must be >= 1");
    const std::string scale = cfg.grid_scale.value_or("linear");
    if (scale == "linear") {
      spec.grid = linear_grid(lo, hi, static_cast<std::size_t>(points));
    } else if (scale == "log") {
      spec.grid = log_grid(lo, hi, static_cast<std::size_t>(points));
    } else {
      throw ConfigError(fmt::format("--grid-scale must be linear or log, got '{}'", scale));
    }
  }
}

void print_summary(const SweepResult& r, std::ostream& out) {
  const ExperimentSpec& s = r.spec;
  out << fmt::format("experiment {} ({}, l={} n={} k={} k'={}, eta={}, {} realizations)\n",
                     s.name, to_string(s.kind), s.basis.levels, s.basis.particles, s.k, s.k_prime,
                     format_double(s.eta), s.realizations);
  out << fmt::format("{:>14} {:>14} {:>12} {:>7} {:>8}\n", "param", "<I>", "stderr", "count",
                     "failures");
  for (const SweepPoint& p : r.points) {
    out << fmt::format("{:>14.6g} {:>14.8g} {:>12.4g} {:>7} {:>8}\n", p.param, p.mean,
                       p.std_error, p.count, p.failures);
  }
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.config_path.empty()) throw ConfigError("sweep requires --config <file>");
  std::vector<ExperimentSpec> specs = load_experiments(read_file(cfg.config_path));
  if (!cfg.only.empty()) {
    std::erase_if(specs, [&](const ExperimentSpec& s) {
      return std::find(cfg.only.begin(), cfg.only.end(), s.name) == cfg.only.end();
    });
    if (specs.empty()) throw ConfigError("--only matched no experiment in the config");
  }
  for (ExperimentSpec& spec : specs) {
    apply_overrides(cfg, spec);
    spec.validate();
  }
  const fs::path dir = prepare_output_dir(cfg.output_dir);
  SweepOptions options;
  options.threads = cfg.threads != 0 ? cfg.threads : default_threads();

  for (const ExperimentSpec& spec : specs) {
    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_experiment(spec, options);
    atomic_write(dir / (spec.name + ".csv"), format_sweep_csv(result));
    atomic_write(dir / (spec.name + ".meta"), format_sweep_sidecar(result));
    print_summary(result, out);
    out << '\n';
    if (cfg.verbosity > 0) {
      const double seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      err << fmt::format("[{}] {:.1f} s, wrote {}\n", spec.name, seconds,
                         (dir / (spec.name + ".csv")).string());
    }
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Embedded Gaussian ensemble transport simulator", "csege"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads,
                 "Worker threads for sweeps (default: $CSEGE_THREADS or all cores)");

  CLI::App* generate = app.add_subcommand("generate", "Draw one Hamiltonian and print it");
  add_sample_options(*generate, cfg);
  add_common_options(*generate, cfg);

  CLI::App* transmission = app.add_subcommand("transmission", "Transmission T(E) of one realization");
  add_sample_options(*transmission, cfg);
  add_common_options(*transmission, cfg);
  transmission->add_option("--eta", cfg.eta, "Contact strength (default 0.5)");
  transmission->add_option("--nu", cfg.nu, "Dephasing probe strength (default 0)");
  transmission->add_option("--emin", cfg.emin, "Lowest energy")->capture_default_str();
  transmission->add_option("--emax", cfg.emax, "Highest energy")->capture_default_str();
  transmission->add_option("--points", cfg.points, "Number of energies")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000000));

  CLI::App* current = app.add_subcommand("current", "Total current of one realization");
  add_sample_options(*current, cfg);
  add_common_options(*current, cfg);
  current->add_option("--eta", cfg.eta, "Contact strength (default 0.5)");
  current->add_option("--nu", cfg.nu, "Dephasing probe strength (default 0)");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the experiments of a config file");
  add_common_options(*sweep, cfg);
  sweep->add_option("--config", cfg.config_path, "Experiment config file")->required();
  sweep->add_option("--only", cfg.only, "Run only the named experiment sections");
  sweep->add_option("--seed", cfg.seed, "Override the master seed");
  sweep->add_option("--realizations", cfg.realizations, "Override the ensemble size");
  sweep->add_flag("--full-scale", cfg.full_scale, "Use 10^4 realizations");
  sweep->add_option("--eta", cfg.eta, "Override the contact strength");
  sweep->add_option("--nu", cfg.nu, "Override the background dephasing strength");
  sweep->add_option("--grid-min", cfg.grid_min, "Regenerate the grid from this value");
  sweep->add_option("--grid-max", cfg.grid_max, "Regenerate the grid up to this value");
  sweep->add_option("--grid-points", cfg.grid_points, "Number of regenerated grid points");
  sweep->add_option("--grid-scale", cfg.grid_scale, "linear | log");
  sweep->add_option("--construction", cfg.construction_override,
                    "Override the csEGE construction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "csege: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (generate->parsed()) return run_generate(cfg, out);
    if (transmission->parsed()) return run_transmission(cfg, out);
    if (current->parsed()) return run_current(cfg, out);
    return run_sweep(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "csege: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const FailureBudgetError& e) {
    err << "csege: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const NumericalError& e) {
    err << "csege: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const IoError& e) {
    err << "csege: I/O error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "csege: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace csege::cli
