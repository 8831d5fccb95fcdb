#pragma once

#include <Eigen/Dense>

#include <string>

namespace csege {

/// Dense real symmetric Hamiltonian expressed in a named occupation basis.
/// Construction rejects non-square, non-finite or asymmetric input; symmetry
/// is checked exactly.
class ManyBodyMatrix {
 public:
  ManyBodyMatrix(Eigen::MatrixXd values, std::string basis_tag);

  Eigen::Index dim() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }
  const std::string& basis_tag() const { return basis_tag_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

  /// max_i sum_j |H_ij|; the spectrum lies in [-bound, bound].
  double gershgorin_bound() const;

 private:
  Eigen::MatrixXd values_;
  std::string basis_tag_;
};

}  // namespace csege
