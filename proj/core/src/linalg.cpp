#include "csege/linalg.hpp"

#include "csege/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <utility>

namespace csege {

namespace {

// Doolittle elimination with row pivoting on a generic dense matrix.
template <typename Matrix>
void factorize(Matrix& lu, Eigen::VectorXi& perm, double pivot_floor) {
  const Eigen::Index n = lu.rows();
  perm.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) perm(i) = static_cast<int>(i);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    double best = std::abs(lu(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double m = std::abs(lu(i, k));
      if (m > best) {
        best = m;
        p = i;
      }
    }
    if (best == 0.0 || best < pivot_floor) {
      throw SingularMatrixError(
          fmt::format("LU breakdown at column {} of {} (pivot modulus {:.3e})", k, n, best));
    }
    if (p != k) {
      lu.row(k).swap(lu.row(p));
      std::swap(perm(k), perm(p));
    }
    const auto pivot = lu(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const auto factor = lu(i, k) / pivot;
      lu(i, k) = factor;
      if (factor == decltype(factor){}) continue;
      for (Eigen::Index j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
}

template <typename Matrix, typename Vector>
void substitute(const Matrix& lu, Vector& x) {
  const Eigen::Index n = lu.rows();
  for (Eigen::Index i = 1; i < n; ++i) {
    auto s = x(i);
    for (Eigen::Index j = 0; j < i; ++j) s -= lu(i, j) * x(j);
    x(i) = s;
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    auto s = x(i);
    for (Eigen::Index j = i + 1; j < n; ++j) s -= lu(i, j) * x(j);
    x(i) = s / lu(i, i);
  }
}

}  // namespace

LuFactorization::LuFactorization(Eigen::MatrixXcd a, double pivot_floor) : lu_(std::move(a)) {
  if (lu_.rows() != lu_.cols()) throw std::invalid_argument("LU requires a square matrix");
  factorize(lu_, perm_, pivot_floor);
}

void LuFactorization::forward_back(Eigen::Ref<Eigen::VectorXcd> x) const {
  Eigen::VectorXcd pb(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) pb(i) = x(perm_(i));
  substitute(lu_, pb);
  x = pb;
}

Eigen::VectorXcd LuFactorization::solve(const Eigen::VectorXcd& b) const {
  Eigen::VectorXcd x = b;
  forward_back(x);
  return x;
}

Eigen::MatrixXcd LuFactorization::solve(const Eigen::MatrixXcd& b) const {
  Eigen::MatrixXcd x = b;
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::VectorXcd col = x.col(c);
    forward_back(col);
    x.col(c) = col;
  }
  return x;
}

Eigen::MatrixXcd LuFactorization::inverse() const {
  return solve(Eigen::MatrixXcd::Identity(size(), size()).eval());
}

double LuFactorization::min_pivot() const { return lu_.diagonal().cwiseAbs().minCoeff(); }

Eigen::VectorXd lu_solve(Eigen::MatrixXd a, Eigen::VectorXd b, double pivot_floor) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw std::invalid_argument("lu_solve: dimension mismatch");
  }
  Eigen::VectorXi perm;
  factorize(a, perm, pivot_floor);
  Eigen::VectorXd x(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) x(i) = b(perm(i));
  substitute(a, x);
  return x;
}

}  // namespace csege
