#pragma once

#include <Eigen/Dense>

#include <complex>

namespace csege {

using Complex = std::complex<double>;

/// In-place LU factorization with partial (row) pivoting, PA = LU, for
/// dense complex matrices. Throws SingularMatrixError when a pivot column is
/// exactly zero or, if `pivot_floor` > 0, when the largest available pivot
/// has modulus below it.
class LuFactorization {
 public:
  explicit LuFactorization(Eigen::MatrixXcd a, double pivot_floor = 0.0);

  Eigen::Index size() const { return lu_.rows(); }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& b) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& b) const;
  Eigen::MatrixXcd inverse() const;

  /// Smallest |U_ii|.
  double min_pivot() const;

 private:
  void forward_back(Eigen::Ref<Eigen::VectorXcd> x) const;

  Eigen::MatrixXcd lu_;
  Eigen::VectorXi perm_;  // row i of PA is row perm_(i) of A
};

/// Real counterpart used for the probe conductance system.
Eigen::VectorXd lu_solve(Eigen::MatrixXd a, Eigen::VectorXd b, double pivot_floor);

}  // namespace csege
