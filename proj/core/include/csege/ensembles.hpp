#pragma once

// Random Hamiltonians: the k-body embedded Gaussian ensemble (EGE), its
// centrosymmetric variant (csEGE), the block perturbations that break parity
// (H_B) or centrosymmetry (H_D), and sqrt-weighted mixtures of two matrices.
//
// Every sampler is a pure function of (basis, parameters, seed).

#include "csege/fock.hpp"
#include "csege/many_body_matrix.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace csege {

using Rng = std::mt19937_64;

/// Gaussian k-body couplings v_{alpha,gamma}, indexed by positions in
/// `configurations` (lexicographic k-particle patterns). Always symmetric.
struct CouplingTensor {
  int levels = 0;
  int rank = 0;
  std::vector<Pattern> configurations;
  Eigen::MatrixXd entries;
};

/// i.i.d. standard normal entries for alpha <= gamma, mirrored below the
/// diagonal.
CouplingTensor sample_couplings(int levels, int rank, Rng& rng);

/// One standard normal per orbit of (alpha, gamma) under transposition and
/// level reversal, so that v_{alpha,gamma} = v_{rev alpha, rev gamma}.
CouplingTensor sample_centrosymmetric_couplings(int levels, int rank, Rng& rng);

/// The same tensor with every configuration level-reversed.
CouplingTensor reversed(const CouplingTensor& v);

/// <nu| sum v_{alpha,gamma} Psi+_alpha Psi_gamma |mu> in the given basis.
ManyBodyMatrix assemble_k_body(const Basis& basis, const CouplingTensor& v);

/// How csEGE realizations are drawn.
enum class CsConstruction {
  /// EGE draw projected onto the commutant of J, (H + JHJ)/2, with
  /// elements outside the mirror-fixed positions rescaled by sqrt(2).
  kProjection,
  /// Couplings tied across level reversal at the k-body level.
  kCouplingOrbit,
};

std::string_view to_string(CsConstruction c);
CsConstruction parse_cs_construction(std::string_view s);

ManyBodyMatrix sample_ege(const Basis& basis, int rank, std::uint64_t seed);

ManyBodyMatrix sample_csege(const Basis& basis, int rank, std::uint64_t seed,
                            CsConstruction construction = CsConstruction::kProjection);

/// Projection step of the kProjection construction, exposed for testing.
ManyBodyMatrix centrosymmetrize(const Basis& basis, const ManyBodyMatrix& h);

/// diag(B, -J B J) for a GOE block B of dimension N/2 (diagonal variance 2,
/// off-diagonal variance 1). Requires N even and no self-conjugate states.
ManyBodyMatrix sample_parity_breaker(const Basis& basis, std::uint64_t seed);
ManyBodyMatrix parity_breaker_from_block(const Basis& basis, const Eigen::MatrixXd& b);

/// [[0, D], [D^T, 0]] with D an (N/2)x(N/2) matrix of i.i.d. standard normals.
ManyBodyMatrix sample_cs_breaker(const Basis& basis, std::uint64_t seed);
ManyBodyMatrix cs_breaker_from_block(const Basis& basis, const Eigen::MatrixXd& d);

/// The orthogonal transform O = [[1, -J], [1, J]] / sqrt(2) that brings a
/// centrosymmetric matrix into block-diagonal form.
Eigen::MatrixXd parity_transform(const Basis& basis);

/// sqrt(1 - eps) * left + sqrt(eps) * right.
ManyBodyMatrix mix(double eps, const ManyBodyMatrix& left, const ManyBodyMatrix& right);

enum class EnsembleKind { kEge, kCsege, kParityBreaker, kCsBreaker };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view s);

/// A recipe for drawing one matrix: kind plus rank (ignored by the block
/// perturbations) plus the csEGE construction.
struct EnsembleDescriptor {
  EnsembleKind kind = EnsembleKind::kEge;
  int rank = 1;
  CsConstruction construction = CsConstruction::kProjection;

  ManyBodyMatrix sample(const Basis& basis, std::uint64_t seed) const;
  std::string describe() const;
};

struct MixSpec {
  double eps = 0.0;
  EnsembleDescriptor left;
  EnsembleDescriptor right;

  void validate() const;
};

}  // namespace csege
