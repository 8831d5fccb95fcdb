#pragma once

#include "csege/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstddef>
#include <algorithm>
#include <type_traits>
#include <vector>

namespace csege {

struct QuadratureSpec {
  double atol = 1e-8;
  double rtol = 1e-6;
  int max_depth = 40;
  /// Uniform panels laid down before adaptive refinement starts. Narrow
  /// resonances falling between the first samples of a panel are otherwise
  /// invisible to the error estimator.
  int initial_panels = 512;

  void validate() const;

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

template <typename F>
struct SimpsonState {
  F& f;
  int max_depth;
  std::size_t evaluations = 0;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  // Whole-interval Simpson estimate `whole` over [a, b] with f(a), f(m), f(b).
  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      throw NonConvergenceError(fmt::format(
          "adaptive Simpson exceeded depth {} on [{:.17g}, {:.17g}]", max_depth, a, b));
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b]. The requested accuracy is
/// max(atol, rtol * |I|) for the whole interval, distributed over panels in
/// proportion to their width. Panels are processed left to right, so the
/// result is a deterministic function of f.
template <typename F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  if (!(b > a)) throw ConfigError(fmt::format("empty integration window [{}, {}]", a, b));
  detail::SimpsonState<std::remove_reference_t<F>> state{f, spec.max_depth};

  const int panels = spec.initial_panels;
  const double h = (b - a) / panels;
  // Nodes at a + i*h/2; even nodes are panel edges, odd nodes midpoints.
  std::vector<double> node(2 * static_cast<std::size_t>(panels) + 1);
  std::vector<double> value(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    node[i] = i + 1 == node.size() ? b : a + 0.5 * h * static_cast<double>(i);
    value[i] = state.eval(node[i]);
  }
  std::vector<double> coarse(static_cast<std::size_t>(panels));
  double coarse_total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const auto i = 2 * static_cast<std::size_t>(p);
    coarse[p] = (node[i + 2] - node[i]) / 6.0 * (value[i] + 4.0 * value[i + 1] + value[i + 2]);
    coarse_total += coarse[p];
  }
  const double tol = std::max(spec.atol, spec.rtol * std::abs(coarse_total));

  QuadratureResult result;
  for (int p = 0; p < panels; ++p) {
    const auto i = 2 * static_cast<std::size_t>(p);
    const double width = node[i + 2] - node[i];
    result.value += state.refine(node[i], node[i + 2], value[i], value[i + 1], value[i + 2],
                                 coarse[p], tol * width / (b - a), 0);
  }
  result.error_estimate = state.error;
  result.evaluations = state.evaluations;
  return result;
}

inline void QuadratureSpec::validate() const {
  if (!(atol > 0.0) || !(rtol > 0.0)) {
    throw ConfigError(fmt::format("quadrature tolerances must be positive (atol = {}, rtol = {})",
                                  atol, rtol));
  }
  if (max_depth < 1 || max_depth > 60) {
    throw ConfigError(fmt::format("quadrature max_depth must be in [1, 60], got {}", max_depth));
  }
  if (initial_panels < 1) {
    throw ConfigError(fmt::format("quadrature initial_panels must be >= 1, got {}",
                                  initial_panels));
  }
}

}  // namespace csege
