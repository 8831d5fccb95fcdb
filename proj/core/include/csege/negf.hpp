#pragma once

// Retarded Green's function with wide-band (energy-independent) terminals,
// Caroli transmission and the energy-integrated total current.

#include "csege/fock.hpp"
#include "csege/linalg.hpp"
#include "csege/many_body_matrix.hpp"
#include "csege/quadrature.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace csege {

enum class TerminalKind { kContact, kProbe };

/// A reservoir attached to one basis state through the self-energy
/// -i * strength on that diagonal element. Sites are 0-based.
struct Terminal {
  std::size_t site = 0;
  double strength = 0.0;
  TerminalKind kind = TerminalKind::kContact;

  void validate(Eigen::Index dim) const;
};

using TerminalSet = std::vector<Terminal>;

/// Contacts with strength eta on |1..10..0> (in) and its mirror image (out).
struct ContactPair {
  Terminal in;
  Terminal out;

  TerminalSet terminals() const { return {in, out}; }
};
ContactPair transport_contacts(const Basis& basis, double eta);

/// E - H - Sigma, i.e. E - H + i * strength on every terminal site.
Eigen::MatrixXcd inverse_green(double energy, const ManyBodyMatrix& h,
                               std::span<const Terminal> terminals);

/// G(E) = (E - H - Sigma)^{-1} by LU with partial pivoting.
Eigen::MatrixXcd green(double energy, const ManyBodyMatrix& h,
                       std::span<const Terminal> terminals);

/// 4 * s_from * s_to * |G_{to, from}|^2 with every terminal in `all`
/// (probes included) entering G.
double transmission(double energy, const ManyBodyMatrix& h, const Terminal& from,
                    const Terminal& to, std::span<const Terminal> all);

/// 4 Tr[Im(Sigma_from) G Im(Sigma_to) G^+] evaluated with dense matrices.
/// Slow; kept as a cross-check of transmission().
double transmission_trace(double energy, const ManyBodyMatrix& h, const Terminal& from,
                          const Terminal& to, std::span<const Terminal> all);

struct TransmissionCurve {
  std::vector<double> energies;
  std::vector<double> values;
};

/// Uniform grid of `points` energies on [emin, emax] (both ends included).
std::vector<double> energy_grid(double emin, double emax, std::size_t points);

TransmissionCurve transmission_curve(const ManyBodyMatrix& h, const ContactPair& contacts,
                                     std::span<const double> energies);

struct CurrentResult {
  double value = 0.0;
  /// Quadrature error estimate plus the analytic bound on the neglected
  /// tails outside [-window, window].
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  double window = 0.0;
};

/// Half-width of the integration window: Gershgorin bound of H plus
/// 10 * max strength plus 10.
double integration_window(const ManyBodyMatrix& h, double max_strength);

/// Upper bound on the integral of T outside [-window, window] for
/// transmissions out of a terminal with strength `source` into reservoirs
/// of strength at most `max_sink`, using ||G(E)|| <= 1 / (|E| - R).
double tail_bound(double gershgorin, double window, double source, double max_sink);

/// Integral of the coherent transmission in -> out over the window.
CurrentResult total_current(const ManyBodyMatrix& h, const ContactPair& contacts,
                            const QuadratureSpec& quad = {});

}  // namespace csege
