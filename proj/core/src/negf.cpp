#include "csege/negf.hpp"

#include "csege/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace csege {

void Terminal::validate(Eigen::Index dim) const {
  if (!(strength > 0.0) || !std::isfinite(strength)) {
    throw ConfigError(fmt::format("terminal strength must be positive and finite, got {}",
                                  strength));
  }
  if (site >= static_cast<std::size_t>(dim)) {
    throw ConfigError(fmt::format("terminal site {} outside basis of dimension {}", site + 1, dim));
  }
}

ContactPair transport_contacts(const Basis& basis, double eta) {
  ContactPair c{Terminal{basis.in_index(), eta, TerminalKind::kContact},
                Terminal{basis.out_index(), eta, TerminalKind::kContact}};
  c.in.validate(static_cast<Eigen::Index>(basis.size()));
  return c;
}

Eigen::MatrixXcd inverse_green(double energy, const ManyBodyMatrix& h,
                               std::span<const Terminal> terminals) {
  const Eigen::Index n = h.dim();
  Eigen::MatrixXcd a = (-h.values()).cast<Complex>();
  a.diagonal().array() += energy;
  for (const Terminal& t : terminals) {
    const auto s = static_cast<Eigen::Index>(t.site);
    if (s >= n) throw ConfigError(fmt::format("terminal site {} outside dimension {}", s + 1, n));
    a(s, s) += Complex(0.0, t.strength);
  }
  return a;
}

Eigen::MatrixXcd green(double energy, const ManyBodyMatrix& h,
                       std::span<const Terminal> terminals) {
  if (terminals.empty()) throw ConfigError("green: at least one terminal is required");
  return LuFactorization(inverse_green(energy, h, terminals)).inverse();
}

double transmission(double energy, const ManyBodyMatrix& h, const Terminal& from,
                    const Terminal& to, std::span<const Terminal> all) {
  const LuFactorization lu(inverse_green(energy, h, all));
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(h.dim());
  unit(static_cast<Eigen::Index>(from.site)) = 1.0;
  const Complex g = lu.solve(unit)(static_cast<Eigen::Index>(to.site));
  const double t = 4.0 * from.strength * to.strength * std::norm(g);
#ifdef CSEGE_CHECK_TRANSMISSION
  const double reference = transmission_trace(energy, h, from, to, all);
  if (std::abs(t - reference) > 1e-12 * std::max(1.0, std::abs(reference))) {
    throw NumericalError(fmt::format("transmission mismatch at E = {}: {} vs trace {}", energy, t,
                                     reference));
  }
#endif
  return t;
}

double transmission_trace(double energy, const ManyBodyMatrix& h, const Terminal& from,
                          const Terminal& to, std::span<const Terminal> all) {
  const Eigen::MatrixXcd g = green(energy, h, all);
  const Eigen::Index n = h.dim();
  Eigen::MatrixXcd im_from = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd im_to = Eigen::MatrixXcd::Zero(n, n);
  // Im(Sigma) = -strength on the terminal site.
  im_from(static_cast<Eigen::Index>(from.site), static_cast<Eigen::Index>(from.site)) =
      -from.strength;
  im_to(static_cast<Eigen::Index>(to.site), static_cast<Eigen::Index>(to.site)) = -to.strength;
  return 4.0 * (im_from * g * im_to * g.adjoint()).trace().real();
}

std::vector<double> energy_grid(double emin, double emax, std::size_t points) {
  if (points < 2 || !(emax > emin)) {
    throw ConfigError(fmt::format("energy grid needs emax > emin and >= 2 points (got [{}, {}], {})",
                                  emin, emax, points));
  }
  std::vector<double> e(points);
  const double step = (emax - emin) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) e[i] = emin + step * static_cast<double>(i);
  e.back() = emax;
  return e;
}

TransmissionCurve transmission_curve(const ManyBodyMatrix& h, const ContactPair& contacts,
                                     std::span<const double> energies) {
  const TerminalSet all = contacts.terminals();
  TransmissionCurve curve;
  curve.energies.assign(energies.begin(), energies.end());
  curve.values.reserve(energies.size());
  for (double e : energies) curve.values.push_back(transmission(e, h, contacts.in, contacts.out, all));
  return curve;
}

double integration_window(const ManyBodyMatrix& h, double max_strength) {
  return h.gershgorin_bound() + 10.0 * max_strength + 10.0;
}

double tail_bound(double gershgorin, double window, double source, double max_sink) {
  // T(E) <= 4 s_in s_max / (|E| - R)^2 on both tails.
  return 8.0 * source * max_sink / (window - gershgorin);
}

CurrentResult total_current(const ManyBodyMatrix& h, const ContactPair& contacts,
                            const QuadratureSpec& quad) {
  if (contacts.in.site == contacts.out.site) {
    throw ConfigError("total_current: in and out terminals must be distinct");
  }
  contacts.in.validate(h.dim());
  contacts.out.validate(h.dim());
  const TerminalSet all = contacts.terminals();
  const double radius = h.gershgorin_bound();
  const double window =
      integration_window(h, std::max(contacts.in.strength, contacts.out.strength));
  auto integrand = [&](double e) { return transmission(e, h, contacts.in, contacts.out, all); };
  const QuadratureResult q = adaptive_simpson(integrand, -window, window, quad);
  CurrentResult r;
  r.value = q.value;
  r.abs_error_estimate =
      q.error_estimate + tail_bound(radius, window, contacts.in.strength, contacts.out.strength);
  r.evaluations = q.evaluations;
  r.window = window;
  return r;
}

}  // namespace csege
