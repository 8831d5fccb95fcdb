#pragma once

// Buettiker-probe decoherence: a fictitious reservoir of strength nu on every
// basis state, eliminated under zero net probe current (D'Amato-Pastawski).

#include "csege/many_body_matrix.hpp"
#include "csege/negf.hpp"

#include <Eigen/Dense>

namespace csege {

struct DephasingSpec {
  double nu = 0.0;

  void validate() const;
};

/// Pairwise transmissions among in, out and the N probes at one energy.
struct ProbeTransmissionTable {
  double in_out = 0.0;
  Eigen::VectorXd in_probe;     // T_{in,i}
  Eigen::VectorXd probe_out;    // T_{i,out}
  Eigen::MatrixXd probe_probe;  // T_{ij}, zero diagonal
};

/// Terminal set {in, out, probe_0 .. probe_{N-1}}.
TerminalSet dephasing_terminals(const ContactPair& contacts, Eigen::Index dim, double nu);

/// One LU of E - H - Sigma (all N + 2 reservoirs), then every pairwise
/// transmission by the single-element reduction.
ProbeTransmissionTable probe_transmissions(double energy, const ManyBodyMatrix& h,
                                           const ContactPair& contacts, double nu);

/// Conductance matrix over probes: W_ii = sum over every other reservoir
/// (in and out included) of T_ik, W_ij = -T_ij.
Eigen::MatrixXd probe_conductance(const ProbeTransmissionTable& table);

/// T_eff = T_in,out + t_in,probe^T W^{-1} t_probe,out, via a pivoted solve.
/// At nu == 0 this is exactly transmission() with the two contacts.
/// Throws SingularMatrixError if a pivot of W falls below 1e-14.
double effective_transmission(double energy, const ManyBodyMatrix& h,
                              const ContactPair& contacts, const DephasingSpec& deph);

TransmissionCurve effective_transmission_curve(const ManyBodyMatrix& h,
                                               const ContactPair& contacts,
                                               const DephasingSpec& deph,
                                               std::span<const double> energies);

/// Energy integral of effective_transmission(); bit-identical to
/// total_current() at nu == 0.
CurrentResult dephased_current(const ManyBodyMatrix& h, const ContactPair& contacts,
                               const DephasingSpec& deph, const QuadratureSpec& quad = {});

}  // namespace csege
