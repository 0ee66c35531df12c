#pragma once

#include <complex>

#include <Eigen/Dense>

namespace mpsdfe {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using Index = Eigen::Index;

}  // namespace mpsdfe

#include <vector>

namespace mpsdfe {

/// Tensor product of single-qubit operators, one 2x2 factor per site.
struct ProductOperator {
  std::vector<Matrix2> factors;

  std::size_t size() const noexcept { return factors.size(); }
};

}  // namespace mpsdfe

namespace mpsdfe {

/// Dense state vector / operator on 2^n amplitudes. Site 1 is the most
/// significant bit of the basis index.
using DenseState = Vector;
using DenseOperator = Matrix;

}  // namespace mpsdfe
