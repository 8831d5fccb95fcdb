#pragma once

// Fermionic occupation-number basis for n particles in l single-particle
// levels, k-body operator action with anticommutation signs, and the
// level-reversal (exchange) involution.
//
// Patterns are machine words: bit (j-1) set <=> level j occupied, so level 1
// is the least significant bit. A state is written |n_1,...,n_l> and is
// defined as (a+_1)^{n_1} ... (a+_l)^{n_l} |0>.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace csege {

using Pattern = std::uint64_t;

inline constexpr int kMaxLevels = 63;
inline constexpr std::size_t kDefaultDimensionCap = 20000;

/// Exact binomial coefficient; saturates at UINT64_MAX on overflow.
std::uint64_t binomial(int n, int k);

struct BasisSpec {
  int levels = 0;
  int particles = 0;

  /// Throws ConfigError unless 1 <= particles <= levels <= kMaxLevels.
  void validate() const;
  std::uint64_t dimension() const { return binomial(levels, particles); }

  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

/// Mirror image of a pattern under level reversal j <-> l+1-j.
Pattern reverse_levels(Pattern p, int levels);

/// Pattern with the given 1-based levels occupied.
Pattern pattern_from_levels(std::initializer_list<int> levels);

/// "|1,0,1,0,0,0>"
std::string format_pattern(Pattern p, int levels);

/// All patterns with k set bits among `levels` bits, ordered by descending
/// occupation tuple (n_1, ..., n_l): |1,1,0,...> comes before |0,...,1,1>.
std::vector<Pattern> lexicographic_configurations(int levels, int k);

/// Occupation basis with mirror ordering: state(mirror(i)) is the
/// level-reversed state(i). When no pattern is its own mirror image the
/// ordering satisfies mirror(i) == size()-1-i.
class Basis {
 public:
  const BasisSpec& spec() const { return spec_; }
  std::size_t size() const { return states_.size(); }
  Pattern state(std::size_t i) const { return states_[i]; }
  std::span<const Pattern> states() const { return states_; }
  std::size_t mirror(std::size_t i) const { return mirror_[i]; }

  std::optional<std::size_t> find(Pattern p) const;
  /// Throws std::out_of_range if the pattern is not in the basis.
  std::size_t index_of(Pattern p) const;

  /// Number of patterns equal to their own level reversal; they occupy a
  /// contiguous block at the center of the ordering.
  std::size_t self_conjugate_count() const { return self_conjugate_; }
  bool fixed_point_free() const { return self_conjugate_ == 0; }

  /// |1,...,1,0,...,0> and |0,...,0,1,...,1>.
  std::size_t in_index() const;
  std::size_t out_index() const;

  /// Identifier used to check that two matrices live in the same basis.
  std::string tag() const;

  friend Basis enumerate_basis(BasisSpec spec, std::size_t dimension_cap);

 private:
  Basis() = default;

  BasisSpec spec_;
  std::vector<Pattern> states_;
  std::vector<std::size_t> mirror_;
  std::vector<std::pair<Pattern, std::size_t>> lookup_;  // sorted by pattern
  std::size_t self_conjugate_ = 0;
};

/// Throws ConfigError for invalid (l, n) or when binomial(l, n) exceeds
/// `dimension_cap`.
Basis enumerate_basis(BasisSpec spec,
                      std::size_t dimension_cap = kDefaultDimensionCap);

struct KBodyResult {
  Pattern pattern;
  int sign;

  friend bool operator==(const KBodyResult&, const KBodyResult&) = default;
};

/// Applies Psi+_create Psi_annihilate to |state>, where
///   Psi+_create    = a+_{c1} a+_{c2} ... a+_{ck}   (c1 < c2 < ... < ck)
///   Psi_annihilate = (Psi+_annihilate)^+ = a_{gk} ... a_{g2} a_{g1}
/// and the rightmost operator acts first, so Psi+_a Psi_a is a product of
/// number operators. Returns nullopt when the product annihilates the state.
std::optional<KBodyResult> apply_k_body(Pattern state, Pattern annihilate,
                                        Pattern create);

/// Permutation matrix of the basis mirror map. The global fermionic sign
/// (-1)^{n(n-1)/2} of the many-body reversal operator is dropped.
Eigen::MatrixXd exchange_matrix(const Basis& basis);

}  // namespace csege
