#include "csege/fock.hpp"

#include "csege/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace csege {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n-k+i) / i is exact; divide by the common factor first.
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i) / (static_cast<std::uint64_t>(i) / g);
    const std::uint64_t base = result / g;
    if (base > std::numeric_limits<std::uint64_t>::max() / factor) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = base * factor;
  }
  return result;
}

void BasisSpec::validate() const {
  if (levels < 1 || levels > kMaxLevels) {
    throw ConfigError(fmt::format("l must be in [1, {}], got {}", kMaxLevels, levels));
  }
  if (particles < 1 || particles > levels) {
    throw ConfigError(
        fmt::format("n must satisfy 1 <= n <= l (l = {}), got {}", levels, particles));
  }
}

Pattern reverse_levels(Pattern p, int levels) {
  Pattern r = 0;
  for (int j = 0; j < levels; ++j) {
    if (p & (Pattern{1} << j)) r |= Pattern{1} << (levels - 1 - j);
  }
  return r;
}

Pattern pattern_from_levels(std::initializer_list<int> levels) {
  Pattern p = 0;
  for (int level : levels) p |= Pattern{1} << (level - 1);
  return p;
}

std::string format_pattern(Pattern p, int levels) {
  std::string s = "|";
  for (int j = 0; j < levels; ++j) {
    if (j > 0) s += ',';
    s += (p >> j) & 1 ? '1' : '0';
  }
  s += '>';
  return s;
}

std::vector<Pattern> lexicographic_configurations(int levels, int k) {
  std::vector<Pattern> out;
  if (k < 0 || k > levels) return out;
  out.reserve(binomial(levels, k));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack enumerates increasing integers with k bits set.
  const Pattern limit = levels == 64 ? 0 : Pattern{1} << levels;
  Pattern p = (Pattern{1} << k) - 1;
  while (p < limit) {
    out.push_back(p);
    const Pattern c = p & -p;
    const Pattern r = p + c;
    p = (((r ^ p) >> 2) / c) | r;
  }
  // Level 1 is the leading digit of the occupation tuple, i.e. the most
  // significant digit of the reversed word.
  std::sort(out.begin(), out.end(), [levels](Pattern a, Pattern b) {
    return reverse_levels(a, levels) > reverse_levels(b, levels);
  });
  return out;
}

Basis enumerate_basis(BasisSpec spec, std::size_t dimension_cap) {
  spec.validate();
  const std::uint64_t dim = spec.dimension();
  if (dim > dimension_cap) {
    throw ConfigError(fmt::format(
        "basis dimension binomial({}, {}) = {} exceeds the cap of {}", spec.levels,
        spec.particles, dim, dimension_cap));
  }

  const auto lex = lexicographic_configurations(spec.levels, spec.particles);
  const std::size_t n = lex.size();

  Basis basis;
  basis.spec_ = spec;
  basis.states_.assign(n, 0);

  std::vector<Pattern> self_conjugate;
  std::vector<Pattern> sorted = lex;
  std::sort(sorted.begin(), sorted.end());
  std::vector<bool> placed(n, false);
  auto slot = [&](Pattern p) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), p) -
                                    sorted.begin());
  };

  std::size_t front = 0;
  std::size_t back = n;  // one past the last free slot
  for (Pattern p : lex) {
    if (placed[slot(p)]) continue;
    const Pattern r = reverse_levels(p, spec.levels);
    placed[slot(p)] = true;
    if (r == p) {
      self_conjugate.push_back(p);
      continue;
    }
    placed[slot(r)] = true;
    basis.states_[front++] = p;
    basis.states_[--back] = r;
  }
  for (Pattern p : self_conjugate) basis.states_[front++] = p;
  if (front != back) throw std::logic_error("mirror ordering did not fill the basis");
  basis.self_conjugate_ = self_conjugate.size();

  basis.lookup_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) basis.lookup_.emplace_back(basis.states_[i], i);
  std::sort(basis.lookup_.begin(), basis.lookup_.end());

  basis.mirror_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    basis.mirror_[i] = basis.index_of(reverse_levels(basis.states_[i], spec.levels));
  }
  return basis;
}

std::optional<std::size_t> Basis::find(Pattern p) const {
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::pair<Pattern, std::size_t>{p, 0});
  if (it == lookup_.end() || it->first != p) return std::nullopt;
  return it->second;
}

std::size_t Basis::index_of(Pattern p) const {
  if (auto i = find(p)) return *i;
  throw std::out_of_range(fmt::format("pattern {} not in basis {}",
                                      format_pattern(p, spec_.levels), tag()));
}

std::size_t Basis::in_index() const {
  return index_of((Pattern{1} << spec_.particles) - 1);
}

std::size_t Basis::out_index() const {
  const Pattern low = (Pattern{1} << spec_.particles) - 1;
  return index_of(low << (spec_.levels - spec_.particles));
}

std::string Basis::tag() const {
  return fmt::format("l{}n{}", spec_.levels, spec_.particles);
}

namespace {

// Parity of the number of occupied levels strictly below bit `bit`.
int jordan_wigner_sign(Pattern state, int bit) {
  const Pattern below = (Pattern{1} << bit) - 1;
  return std::popcount(state & below) % 2 == 0 ? 1 : -1;
}

}  // namespace

std::optional<KBodyResult> apply_k_body(Pattern state, Pattern annihilate,
                                        Pattern create) {
  if ((state & annihilate) != annihilate) return std::nullopt;
  int sign = 1;
  // a_{gk} ... a_{g1}: lowest index acts first.
  for (Pattern rest = annihilate; rest != 0;) {
    const int bit = std::countr_zero(rest);
    sign *= jordan_wigner_sign(state, bit);
    state &= ~(Pattern{1} << bit);
    rest &= rest - 1;
  }
  if ((state & create) != 0) return std::nullopt;
  for (Pattern rest = create; rest != 0;) {
    const int bit = std::bit_width(rest) - 1;
    sign *= jordan_wigner_sign(state, bit);
    state |= Pattern{1} << bit;
    rest &= ~(Pattern{1} << bit);
  }
  return KBodyResult{state, sign};
}

Eigen::MatrixXd exchange_matrix(const Basis& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    j(i, static_cast<Eigen::Index>(basis.mirror(static_cast<std::size_t>(i)))) = 1.0;
  }
  return j;
}

}  // namespace csege
