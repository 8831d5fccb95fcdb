#include "csege/many_body_matrix.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace csege {

ManyBodyMatrix::ManyBodyMatrix(Eigen::MatrixXd values, std::string basis_tag)
    : values_(std::move(values)), basis_tag_(std::move(basis_tag)) {
  if (values_.rows() != values_.cols() || values_.rows() == 0) {
    throw std::invalid_argument(
        fmt::format("many-body matrix must be square and nonempty, got {}x{}",
                    values_.rows(), values_.cols()));
  }
  if (!values_.allFinite()) throw std::invalid_argument("many-body matrix has non-finite entries");
  for (Eigen::Index i = 0; i < values_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < values_.cols(); ++j) {
      if (values_(i, j) != values_(j, i)) {
        throw std::invalid_argument(
            fmt::format("many-body matrix is not symmetric at ({}, {})", i, j));
      }
    }
  }
}

double ManyBodyMatrix::gershgorin_bound() const {
  return values_.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace csege
