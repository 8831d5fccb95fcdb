#include "csege/dephasing.hpp"

#include "csege/error.hpp"
#include "csege/linalg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace csege {

namespace {
constexpr double kProbePivotFloor = 1e-14;
}

void DephasingSpec::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw ConfigError(fmt::format("dephasing strength nu must be finite and >= 0, got {}", nu));
  }
}

TerminalSet dephasing_terminals(const ContactPair& contacts, Eigen::Index dim, double nu) {
  TerminalSet all{contacts.in, contacts.out};
  all.reserve(static_cast<std::size_t>(dim) + 2);
  for (Eigen::Index i = 0; i < dim; ++i) {
    all.push_back(Terminal{static_cast<std::size_t>(i), nu, TerminalKind::kProbe});
  }
  return all;
}

ProbeTransmissionTable probe_transmissions(double energy, const ManyBodyMatrix& h,
                                           const ContactPair& contacts, double nu) {
  const Eigen::Index n = h.dim();
  const TerminalSet all = dephasing_terminals(contacts, n, nu);
  const Eigen::MatrixXcd g = LuFactorization(inverse_green(energy, h, all)).inverse();
  const auto in = static_cast<Eigen::Index>(contacts.in.site);
  const auto out = static_cast<Eigen::Index>(contacts.out.site);
  const double eta_in = contacts.in.strength;
  const double eta_out = contacts.out.strength;

  ProbeTransmissionTable t;
  t.in_out = 4.0 * eta_in * eta_out * std::norm(g(out, in));
  t.in_probe.resize(n);
  t.probe_out.resize(n);
  t.probe_probe.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.in_probe(i) = 4.0 * eta_in * nu * std::norm(g(i, in));
    t.probe_out(i) = 4.0 * nu * eta_out * std::norm(g(out, i));
    for (Eigen::Index j = 0; j < n; ++j) {
      t.probe_probe(i, j) = i == j ? 0.0 : 4.0 * nu * nu * std::norm(g(j, i));
    }
  }
  return t;
}

Eigen::MatrixXd probe_conductance(const ProbeTransmissionTable& table) {
  Eigen::MatrixXd w = -table.probe_probe;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    // T_{i,in} = T_{in,i} for symmetric H and the same coupling.
    w(i, i) = table.in_probe(i) + table.probe_out(i) + table.probe_probe.row(i).sum();
  }
  return w;
}

double effective_transmission(double energy, const ManyBodyMatrix& h,
                              const ContactPair& contacts, const DephasingSpec& deph) {
  deph.validate();
  if (deph.nu == 0.0) {
    const TerminalSet two = contacts.terminals();
    return transmission(energy, h, contacts.in, contacts.out, two);
  }
  const ProbeTransmissionTable t = probe_transmissions(energy, h, contacts, deph.nu);
  const Eigen::VectorXd x = lu_solve(probe_conductance(t), t.probe_out, kProbePivotFloor);
  return t.in_out + t.in_probe.dot(x);
}

TransmissionCurve effective_transmission_curve(const ManyBodyMatrix& h,
                                               const ContactPair& contacts,
                                               const DephasingSpec& deph,
                                               std::span<const double> energies) {
  TransmissionCurve curve;
  curve.energies.assign(energies.begin(), energies.end());
  curve.values.reserve(energies.size());
  for (double e : energies) curve.values.push_back(effective_transmission(e, h, contacts, deph));
  return curve;
}

CurrentResult dephased_current(const ManyBodyMatrix& h, const ContactPair& contacts,
                               const DephasingSpec& deph, const QuadratureSpec& quad) {
  deph.validate();
  if (deph.nu == 0.0) return total_current(h, contacts, quad);
  if (contacts.in.site == contacts.out.site) {
    throw ConfigError("dephased_current: in and out terminals must be distinct");
  }
  contacts.in.validate(h.dim());
  contacts.out.validate(h.dim());
  const double max_strength = std::max({contacts.in.strength, contacts.out.strength, deph.nu});
  const double radius = h.gershgorin_bound();
  const double window = integration_window(h, max_strength);
  auto integrand = [&](double e) { return effective_transmission(e, h, contacts, deph); };
  const QuadratureResult q = adaptive_simpson(integrand, -window, window, quad);
  CurrentResult r;
  r.value = q.value;
  // T_eff is bounded by the total transmission out of `in` into all other
  // reservoirs.
  r.abs_error_estimate =
      q.error_estimate +
      tail_bound(radius, window, contacts.in.strength, std::max(contacts.out.strength, deph.nu));
  r.evaluations = q.evaluations;
  r.window = window;
  return r;
}

}  // namespace csege
