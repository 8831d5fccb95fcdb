#include "oracles.hpp"

#include "csege/dephasing.hpp"
#include "csege/ensembles.hpp"
#include "csege/error.hpp"
#include "csege/rng.hpp"

#include <doctest.h>

#include <random>

using namespace csege;

TEST_CASE("dephasing spec validation") {
  CHECK_NOTHROW(DephasingSpec{0.0}.validate());
  CHECK_NOTHROW(DephasingSpec{50.0}.validate());
  CHECK_THROWS_AS(DephasingSpec{-1e-3}.validate(), ConfigError);
  CHECK_THROWS_AS(DephasingSpec{std::nan("")}.validate(), ConfigError);
  CHECK_THROWS_AS(DephasingSpec{INFINITY}.validate(), ConfigError);
}

TEST_CASE("nu = 0 reduces to coherent transport bit-identically") {
  const Basis basis = enumerate_basis({6, 5});
  const ContactPair c = transport_contacts(basis, 0.5);
  for (std::uint64_t r = 0; r < 10; ++r) {
    const ManyBodyMatrix h = sample_csege(basis, 3, r);
    for (double e : {-3.0, 0.0, 0.77}) {
      CHECK(effective_transmission(e, h, c, DephasingSpec{0.0}) ==
            transmission(e, h, c.in, c.out, c.terminals()));
    }
    CHECK(dephased_current(h, c, DephasingSpec{0.0}).value == total_current(h, c).value);
  }
}

TEST_CASE("probe transmission table") {
  const Basis basis = enumerate_basis({6, 3});
  const ContactPair c = transport_contacts(basis, 0.5);
  const ManyBodyMatrix h = sample_ege(basis, 2, 3);
  const ProbeTransmissionTable t = probe_transmissions(0.3, h, c, 0.2);
  CHECK(t.in_probe.size() == 20);
  CHECK(t.probe_out.size() == 20);
  CHECK(t.in_out >= 0.0);
  CHECK(t.in_probe.minCoeff() >= 0.0);
  CHECK(t.probe_out.minCoeff() >= 0.0);
  CHECK(t.probe_probe.minCoeff() >= 0.0);
  CHECK(t.probe_probe.diagonal().isZero(0.0));
  CHECK((t.probe_probe - t.probe_probe.transpose()).cwiseAbs().maxCoeff() <= 1e-15);

  const Eigen::MatrixXd w = probe_conductance(t);
  for (Eigen::Index i = 0; i < 20; ++i) {
    const double others = t.probe_probe.row(i).sum() + t.in_probe(i) + t.probe_out(i);
    CHECK(w(i, i) == doctest::Approx(others).epsilon(1e-14));
  }
  CHECK(dephasing_terminals(c, 20, 0.2).size() == 22);
}

TEST_CASE("D'Amato-Pastawski formula equals the Kirchhoff oracle on 100 instances") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const BasisSpec shapes[] = {{6, 5}, {6, 4}, {6, 3}, {5, 2}, {4, 2}, {5, 3}};
  int instances = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const BasisSpec shape = shapes[trial % 6];
    const Basis basis = enumerate_basis(shape);
    REQUIRE(basis.size() <= 20);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(shape.particles));
    const ManyBodyMatrix h = trial % 2 ? sample_csege(basis, k, rng()) : sample_ege(basis, k, rng());
    const double eta = 0.05 + 2.0 * unit(rng);
    const double nu = std::pow(10.0, -3.0 + 4.0 * unit(rng));
    const double e = -6.0 + 12.0 * unit(rng);
    const ContactPair c = transport_contacts(basis, eta);
    const double dp = effective_transmission(e, h, c, DephasingSpec{nu});
    const double kirchhoff = oracle::kirchhoff_transmission(
        e, h.values(), static_cast<Eigen::Index>(c.in.site), static_cast<Eigen::Index>(c.out.site), eta, nu);
    CHECK(std::abs(dp - kirchhoff) <= 1e-10);
    ++instances;
  }
  CHECK(instances == 100);
}

TEST_CASE("a disconnected probe makes the probe system singular") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 1) = m(1, 0) = 1.0;
  m(1, 3) = m(3, 1) = 0.7;
  // Site 2 couples to nothing.
  const ManyBodyMatrix h(m, "iso");
  const ContactPair c{Terminal{0, 0.5, TerminalKind::kContact}, Terminal{3, 0.5, TerminalKind::kContact}};
  CHECK_THROWS_AS(effective_transmission(0.1, h, c, DephasingSpec{0.3}), SingularMatrixError);
  CHECK_NOTHROW(effective_transmission(0.1, h, c, DephasingSpec{0.0}));
}

TEST_CASE("decoherence lowers perfect-transmission resonances") {
  const Basis basis = enumerate_basis({6, 5});
  const ContactPair c = transport_contacts(basis, 0.5);
  int tested = 0;
  for (std::uint64_t r = 0; r < 40 && tested < 10; ++r) {
    const ManyBodyMatrix h = sample_csege(basis, 3, derive_seed(8, r));
    // Locate the highest peak at nu = 0.
    const auto grid = energy_grid(-15.0, 15.0, 30001);
    const TransmissionCurve coarse = transmission_curve(h, c, grid);
    const auto best = std::max_element(coarse.values.begin(), coarse.values.end()) - coarse.values.begin();
    const double centre = grid[static_cast<std::size_t>(best)];
    const auto local = energy_grid(centre - 0.05, centre + 0.05, 2001);
    auto peak = [&](double nu) {
      const TransmissionCurve curve = effective_transmission_curve(h, c, DephasingSpec{nu}, local);
      return *std::max_element(curve.values.begin(), curve.values.end());
    };
    const double p0 = peak(0.0);
    if (p0 < 0.999) continue;
    ++tested;
    double previous = p0;
    for (double nu : {1e-3, 1e-2, 0.1, 1.0, 10.0}) {
      const double p = peak(nu);
      CHECK(p <= previous + 1e-9);
      previous = p;
    }
  }
  CHECK(tested == 10);
}

TEST_CASE("dephased transmission stays within [0, 1]") {
  const Basis basis = enumerate_basis({6, 5});
  const ContactPair c = transport_contacts(basis, 0.5);
  const ManyBodyMatrix h = sample_ege(basis, 3, 1);
  for (double nu : {1e-3, 0.5, 50.0}) {
    const TransmissionCurve curve =
        effective_transmission_curve(h, c, DephasingSpec{nu}, energy_grid(-20.0, 20.0, 401));
    for (double t : curve.values) {
      CHECK(t >= 0.0);
      CHECK(t <= 1.0 + 1e-9);
    }
  }
}
