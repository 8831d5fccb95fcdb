#include "csege/config.hpp"
#include "csege/error.hpp"
#include "csege/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace csege;
namespace fs = std::filesystem;

namespace {

std::string error_of(std::string_view text) {
  try {
    load_experiments(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("csege_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("parse a config with defaults, comments and arrays") {
  const auto specs = load_experiments(R"(
# shared settings
seed = 2_018
realizations = 40
eta = 0.75

[first]
kind = "parity-break"   # trailing comment
k = 1
grid = [0, 0.25,
        0.5, 1]

[second]
kind = "eta-sweep"
ensemble = "ege"
seed = 5
grid_start = 0.01
grid_stop = 10
grid_points = 4
grid_scale = "log"

[third]
kind = "dephasing-sweep"
construction = "coupling-orbit"
grid_start = 1e-3
grid_stop = 50
grid_points = 3
grid_scale = "log"
grid_prepend_zero = true
)");
  REQUIRE(specs.size() == 3);
  CHECK(specs[0].name == "first");
  CHECK(specs[0].kind == ExperimentKind::kParityBreak);
  CHECK(specs[0].master_seed == 2018);
  CHECK(specs[0].realizations == 40);
  CHECK(specs[0].eta == 0.75);
  CHECK(specs[0].k == 1);
  CHECK(specs[0].grid == std::vector<double>{0, 0.25, 0.5, 1});
  CHECK(specs[1].master_seed == 5);
  CHECK(specs[1].ensemble == EnsembleKind::kEge);
  REQUIRE(specs[1].grid.size() == 4);
  CHECK(specs[1].grid[1] == doctest::Approx(0.1));
  CHECK(specs[2].construction == CsConstruction::kCouplingOrbit);
  CHECK(specs[2].grid.front() == 0.0);
  CHECK(specs[2].grid.size() == 4);
}

TEST_CASE("missing grid falls back to the kind's default") {
  const auto specs = load_experiments("[a]\nkind = \"mix-cs-vs-ege\"\n[b]\nkind = \"dephasing-sweep\"\n");
  CHECK(specs[0].grid == default_eps_grid());
  CHECK(specs[1].grid == default_nu_grid());
}

TEST_CASE("config errors name the offending field") {
  CHECK(error_of("[a]\nk = 3\n").find("kind") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"mix\"\n").find("[a].kind") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\nk = \"three\"\n").find("[a].k ") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\nbogus = 1\n").find("[a].bogus") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\nrealizations = -1\n").find("realizations") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\ngrid = [0, 1]\ngrid_points = 3\n").find("grid") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\ngrid_start = 0\n").find("grid_points") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"eta-sweep\"\ngrid_start = 1\ngrid_stop = 2\ngrid_points = 2\ngrid_scale = \"cubic\"\n")
            .find("grid_scale") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\nk = 1\nk = 2\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\n[a]\nkind = \"cs-break\"\n").find("duplicate") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\ngrid = [0, \"x\"]\n").find("line 3") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\ngrid = [0, 1\n").find("unterminated") != std::string::npos);
  CHECK(error_of("[a\nkind = 1\n").find("line 1") != std::string::npos);
  CHECK(error_of("seed = 1\n").find("no experiments") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\nname\n").find("line 3") != std::string::npos);
  CHECK(error_of("[a]\nkind = \"parity-break\"\nseed = 99999999999999999999\n").find("out of range") != std::string::npos);
}

TEST_CASE("config round-trip") {
  ExperimentSpec s;
  s.name = "round";
  s.kind = ExperimentKind::kDephasingSweep;
  s.basis = {7, 3};
  s.k = 2;
  s.k_prime = 1;
  s.ensemble = EnsembleKind::kEge;
  s.construction = CsConstruction::kCouplingOrbit;
  s.grid = default_nu_grid();
  s.realizations = 123;
  s.master_seed = 9223372036854775807ULL;
  s.eta = 0.1 + 0.2;
  s.nu = 1.0 / 3.0;
  s.quad.atol = 3e-9;
  s.quad.rtol = 1.5e-7;
  s.quad.max_depth = 33;
  s.quad.initial_panels = 100;
  const auto back = load_experiments(experiment_to_config(s));
  REQUIRE(back.size() == 1);
  CHECK(back[0] == s);
  // Serializing again gives the same text.
  CHECK(experiment_to_config(back[0]) == experiment_to_config(s));

  std::vector<ExperimentSpec> two{s, s};
  two[1].name = "other";
  two[1].kind = ExperimentKind::kMixCsVsEge;
  two[1].grid = default_eps_grid();
  CHECK(load_experiments(experiments_to_config(two)) == two);
}

TEST_CASE("shipped configs parse and validate") {
  const fs::path dir = fs::path(CSEGE_SOURCE_DIR) / "tools" / "configs";
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".toml") continue;
    ++files;
    const auto specs = load_experiments(read_file(entry.path()));
    CHECK(!specs.empty());
    for (const auto& s : specs) CHECK_NOTHROW(s.validate());
  }
  CHECK(files == 7);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.0, 0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, 50.0}) {
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.25) == "0.25");
}

TEST_CASE("matrix text round-trip") {
  Eigen::MatrixXd m(2, 3);
  m << 1.0 / 3.0, -2e-17, 5.0, 1e300, 0.0, -0.1;
  const std::string text = format_matrix_text(m);
  CHECK(text.find("\n") != std::string::npos);
  CHECK(parse_matrix_text(text) == m);
  CHECK(parse_matrix_text("# header\n" + text) == m);
  CHECK_THROWS_AS(parse_matrix_text("1 2\n3\n"), ConfigError);
}

TEST_CASE("transmission CSV") {
  TransmissionCurve c{{-1.0, 0.0, 1.0}, {0.1, 1.0, 0.25}};
  const std::string csv = format_transmission_csv(c, 0.5, 7);
  CHECK(csv.rfind("# E,T,eta=0.5,seed=7\n", 0) == 0);
  CHECK(csv.find("-1,0.10000000000000001\n") != std::string::npos);
  CHECK(format_transmission_csv(c, 0.5, 7, 0.25).rfind("# E,T,eta=0.5,seed=7,nu=0.25\n", 0) == 0);
}

TEST_CASE("sweep CSV and sidecar") {
  SweepResult r;
  r.spec.name = "demo";
  r.spec.kind = ExperimentKind::kCsBreak;
  r.spec.grid = {0.0, 1.0};
  r.spec.master_seed = 77;
  r.points = {{0.0, 2.5, 0.1, 10, 0}, {1.0, 1.25, 0.05, 9, 1}};
  r.version = "0.1.0";
  r.timestamp = "2026-01-01T00:00:00Z";
  const std::string csv = format_sweep_csv(r);
  CHECK(csv.rfind("# csege_version = \"0.1.0\"\n# [demo]\n", 0) == 0);
  CHECK(csv.find("\nparam,mean_I,stderr,count,failures\n0,2.5,0.10000000000000001,10,0\n") != std::string::npos);
  CHECK(csv.find("2026") == std::string::npos);
  CHECK(spec_from_sweep_csv(csv) == r.spec);
  const auto points = points_from_sweep_csv(csv);
  REQUIRE(points.size() == 2);
  CHECK(points[1].mean == 1.25);
  CHECK(points[1].failures == 1);

  const std::string meta = format_sweep_sidecar(r);
  CHECK(meta.find("timestamp = \"2026-01-01T00:00:00Z\"") != std::string::npos);
  CHECK(meta.find("parameter = \"eps\"") != std::string::npos);
  CHECK(meta.find("total_failures = 1") != std::string::npos);
  CHECK(meta.find("seed = 77") != std::string::npos);
  CHECK_THROWS_AS(points_from_sweep_csv("no header\n"), ConfigError);
}

TEST_CASE("atomic write") {
  const fs::path dir = scratch_dir("atomic");
  const fs::path file = dir / "out.txt";
  atomic_write(file, "first");
  atomic_write(file, "second");
  CHECK(read_file(file) == "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(atomic_write(dir / "missing" / "x.txt", "x"), IoError);
  CHECK_THROWS_AS(read_file(dir / "missing.txt"), IoError);
  fs::remove_all(dir);
}
