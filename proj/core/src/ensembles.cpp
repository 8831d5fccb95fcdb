#include "csege/ensembles.hpp"

#include "csege/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace csege {

namespace {

CouplingTensor empty_tensor(int levels, int rank) {
  CouplingTensor v;
  v.levels = levels;
  v.rank = rank;
  v.configurations = lexicographic_configurations(levels, rank);
  const auto m = static_cast<Eigen::Index>(v.configurations.size());
  v.entries = Eigen::MatrixXd::Zero(m, m);
  return v;
}

void check_rank(const Basis& basis, int rank) {
  if (rank < 1 || rank > basis.spec().particles) {
    throw ConfigError(fmt::format("interaction rank k must satisfy 1 <= k <= n = {}, got {}",
                                  basis.spec().particles, rank));
  }
}

void check_even_fixed_point_free(const Basis& basis, std::string_view what) {
  if (basis.size() % 2 != 0 || !basis.fixed_point_free()) {
    throw ConfigError(fmt::format(
        "{} requires an even basis dimension without self-conjugate states; basis {} has N = {} "
        "and {} self-conjugate states",
        what, basis.tag(), basis.size(), basis.self_conjugate_count()));
  }
}

Eigen::MatrixXd symmetric_part(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = 0.5 * (m + m.transpose());
  return s;
}

Eigen::MatrixXd half_exchange(Eigen::Index half) {
  return Eigen::MatrixXd::Identity(half, half).rowwise().reverse();
}

}  // namespace

CouplingTensor sample_couplings(int levels, int rank, Rng& rng) {
  CouplingTensor v = empty_tensor(levels, rank);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index m = v.entries.rows();
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index c = a; c < m; ++c) {
      const double x = normal(rng);
      v.entries(a, c) = x;
      v.entries(c, a) = x;
    }
  }
  return v;
}

CouplingTensor sample_centrosymmetric_couplings(int levels, int rank, Rng& rng) {
  CouplingTensor v = empty_tensor(levels, rank);
  const Eigen::Index m = v.entries.rows();
  std::unordered_map<Pattern, Eigen::Index> index;
  for (Eigen::Index a = 0; a < m; ++a) index.emplace(v.configurations[a], a);
  std::vector<Eigen::Index> bar(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    bar[a] = index.at(reverse_levels(v.configurations[a], levels));
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXi assigned = Eigen::MatrixXi::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index c = a; c < m; ++c) {
      if (assigned(a, c)) continue;
      const double x = normal(rng);
      for (auto [p, q] : {std::pair{a, c}, std::pair{c, a}, std::pair{bar[a], bar[c]},
                          std::pair{bar[c], bar[a]}}) {
        v.entries(p, q) = x;
        assigned(p, q) = 1;
      }
    }
  }
  return v;
}

CouplingTensor reversed(const CouplingTensor& v) {
  CouplingTensor r = v;
  const Eigen::Index m = v.entries.rows();
  std::unordered_map<Pattern, Eigen::Index> index;
  for (Eigen::Index a = 0; a < m; ++a) index.emplace(v.configurations[a], a);
  for (Eigen::Index a = 0; a < m; ++a) {
    const Eigen::Index ra = index.at(reverse_levels(v.configurations[a], v.levels));
    for (Eigen::Index c = 0; c < m; ++c) {
      const Eigen::Index rc = index.at(reverse_levels(v.configurations[c], v.levels));
      r.entries(ra, rc) = v.entries(a, c);
    }
  }
  return r;
}

ManyBodyMatrix assemble_k_body(const Basis& basis, const CouplingTensor& v) {
  if (v.levels != basis.spec().levels) {
    throw ConfigError(fmt::format("coupling tensor has l = {} but basis {} has l = {}", v.levels,
                                  basis.tag(), basis.spec().levels));
  }
  check_rank(basis, v.rank);
  const auto n = static_cast<Eigen::Index>(basis.size());
  const auto m = static_cast<Eigen::Index>(v.configurations.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    const Pattern ket = basis.state(static_cast<std::size_t>(mu));
    for (Eigen::Index c = 0; c < m; ++c) {
      const Pattern gamma = v.configurations[c];
      if ((ket & gamma) != gamma) continue;
      const Pattern hole = ket & ~gamma;
      for (Eigen::Index a = 0; a < m; ++a) {
        const Pattern alpha = v.configurations[a];
        if ((hole & alpha) != 0) continue;
        const auto result = apply_k_body(ket, gamma, alpha);
        if (!result) continue;
        const auto nu = static_cast<Eigen::Index>(basis.index_of(result->pattern));
        h(nu, mu) += v.entries(a, c) * result->sign;
      }
    }
  }
  return ManyBodyMatrix(symmetric_part(h), basis.tag());
}

std::string_view to_string(CsConstruction c) {
  switch (c) {
    case CsConstruction::kProjection: return "projection";
    case CsConstruction::kCouplingOrbit: return "coupling-orbit";
  }
  return "?";
}

CsConstruction parse_cs_construction(std::string_view s) {
  if (s == "projection") return CsConstruction::kProjection;
  if (s == "coupling-orbit") return CsConstruction::kCouplingOrbit;
  throw ConfigError(fmt::format("unknown csEGE construction '{}' (expected projection or "
                                "coupling-orbit)", s));
}

ManyBodyMatrix sample_ege(const Basis& basis, int rank, std::uint64_t seed) {
  check_rank(basis, rank);
  Rng rng(seed);
  return assemble_k_body(basis, sample_couplings(basis.spec().levels, rank, rng));
}

ManyBodyMatrix centrosymmetrize(const Basis& basis, const ManyBodyMatrix& h) {
  const Eigen::Index n = h.dim();
  const Eigen::MatrixXd& a = h.values();
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto si = static_cast<Eigen::Index>(basis.mirror(static_cast<std::size_t>(i)));
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto sj = static_cast<Eigen::Index>(basis.mirror(static_cast<std::size_t>(j)));
      double x = 0.5 * (a(i, j) + a(si, sj));
      // Averaging two distinct elements halves the variance; restore it.
      // Positions mapped onto themselves ({si, sj} == {i, j}) are untouched.
      const bool fixed = (si == i && sj == j) || (si == j && sj == i);
      if (!fixed) x *= std::numbers::sqrt2;
      out(i, j) = x;
    }
  }
  return ManyBodyMatrix(std::move(out), h.basis_tag());
}

ManyBodyMatrix sample_csege(const Basis& basis, int rank, std::uint64_t seed,
                            CsConstruction construction) {
  check_rank(basis, rank);
  switch (construction) {
    case CsConstruction::kProjection:
      return centrosymmetrize(basis, sample_ege(basis, rank, seed));
    case CsConstruction::kCouplingOrbit: {
      Rng rng(seed);
      return assemble_k_body(
          basis, sample_centrosymmetric_couplings(basis.spec().levels, rank, rng));
    }
  }
  throw std::logic_error("unreachable");
}

ManyBodyMatrix parity_breaker_from_block(const Basis& basis, const Eigen::MatrixXd& b) {
  check_even_fixed_point_free(basis, "parity breaking");
  const auto half = static_cast<Eigen::Index>(basis.size() / 2);
  if (b.rows() != half || b.cols() != half) {
    throw ConfigError(fmt::format("parity-breaking block must be {0}x{0}", half));
  }
  const Eigen::MatrixXd j = half_exchange(half);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * half, 2 * half);
  h.topLeftCorner(half, half) = b;
  h.bottomRightCorner(half, half) = -(j * b * j);
  return ManyBodyMatrix(std::move(h), basis.tag());
}

ManyBodyMatrix sample_parity_breaker(const Basis& basis, std::uint64_t seed) {
  check_even_fixed_point_free(basis, "parity breaking");
  const auto half = static_cast<Eigen::Index>(basis.size() / 2);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(half, half);
  for (Eigen::Index i = 0; i < half; ++i) {
    b(i, i) = std::numbers::sqrt2 * normal(rng);
    for (Eigen::Index j = i + 1; j < half; ++j) {
      b(i, j) = normal(rng);
      b(j, i) = b(i, j);
    }
  }
  return parity_breaker_from_block(basis, b);
}

ManyBodyMatrix cs_breaker_from_block(const Basis& basis, const Eigen::MatrixXd& d) {
  if (basis.size() % 2 != 0) {
    throw ConfigError(fmt::format("centrosymmetry breaking requires even N; basis {} has N = {}",
                                  basis.tag(), basis.size()));
  }
  const auto half = static_cast<Eigen::Index>(basis.size() / 2);
  if (d.rows() != half || d.cols() != half) {
    throw ConfigError(fmt::format("centrosymmetry-breaking block must be {0}x{0}", half));
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * half, 2 * half);
  h.topRightCorner(half, half) = d;
  h.bottomLeftCorner(half, half) = d.transpose();
  return ManyBodyMatrix(std::move(h), basis.tag());
}

ManyBodyMatrix sample_cs_breaker(const Basis& basis, std::uint64_t seed) {
  if (basis.size() % 2 != 0) {
    throw ConfigError(fmt::format("centrosymmetry breaking requires even N; basis {} has N = {}",
                                  basis.tag(), basis.size()));
  }
  const auto half = static_cast<Eigen::Index>(basis.size() / 2);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd d(half, half);
  for (Eigen::Index i = 0; i < half; ++i) {
    for (Eigen::Index j = 0; j < half; ++j) d(i, j) = normal(rng);
  }
  return cs_breaker_from_block(basis, d);
}

Eigen::MatrixXd parity_transform(const Basis& basis) {
  check_even_fixed_point_free(basis, "the parity transform");
  const auto half = static_cast<Eigen::Index>(basis.size() / 2);
  const Eigen::MatrixXd j = half_exchange(half);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(half, half);
  Eigen::MatrixXd o(2 * half, 2 * half);
  o << id, -j, id, j;
  return o / std::numbers::sqrt2;
}

ManyBodyMatrix mix(double eps, const ManyBodyMatrix& left, const ManyBodyMatrix& right) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw ConfigError(fmt::format("mixing parameter eps must lie in [0, 1], got {}", eps));
  }
  if (left.dim() != right.dim() || left.basis_tag() != right.basis_tag()) {
    throw ConfigError(fmt::format("cannot mix matrices of dimension {} ({}) and {} ({})",
                                  left.dim(), left.basis_tag(), right.dim(), right.basis_tag()));
  }
  if (eps == 0.0) return left;
  if (eps == 1.0) return right;
  Eigen::MatrixXd h = std::sqrt(1.0 - eps) * left.values() + std::sqrt(eps) * right.values();
  return ManyBodyMatrix(std::move(h), left.basis_tag());
}

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kEge: return "ege";
    case EnsembleKind::kCsege: return "csege";
    case EnsembleKind::kParityBreaker: return "parity-breaker";
    case EnsembleKind::kCsBreaker: return "cs-breaker";
  }
  return "?";
}

EnsembleKind parse_ensemble_kind(std::string_view s) {
  if (s == "ege") return EnsembleKind::kEge;
  if (s == "csege") return EnsembleKind::kCsege;
  if (s == "parity-breaker") return EnsembleKind::kParityBreaker;
  if (s == "cs-breaker") return EnsembleKind::kCsBreaker;
  throw ConfigError(fmt::format(
      "unknown ensemble '{}' (expected ege, csege, parity-breaker or cs-breaker)", s));
}

ManyBodyMatrix EnsembleDescriptor::sample(const Basis& basis, std::uint64_t seed) const {
  switch (kind) {
    case EnsembleKind::kEge: return sample_ege(basis, rank, seed);
    case EnsembleKind::kCsege: return sample_csege(basis, rank, seed, construction);
    case EnsembleKind::kParityBreaker: return sample_parity_breaker(basis, seed);
    case EnsembleKind::kCsBreaker: return sample_cs_breaker(basis, seed);
  }
  throw std::logic_error("unreachable");
}

std::string EnsembleDescriptor::describe() const {
  switch (kind) {
    case EnsembleKind::kEge: return fmt::format("ege(k={})", rank);
    case EnsembleKind::kCsege: return fmt::format("csege(k={},{})", rank, to_string(construction));
    default: return std::string(to_string(kind));
  }
}

void MixSpec::validate() const {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw ConfigError(fmt::format("mixing parameter eps must lie in [0, 1], got {}", eps));
  }
}

}  // namespace csege
