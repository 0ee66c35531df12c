#pragma once

// Contraction kernels shared by the MPS, sampler, grouping and MPO modules.

#include <array>
#include <vector>

#include "mpsdfe/errors.hpp"
#include "mpsdfe/mps.hpp"

namespace mpsdfe::detail {

/// Left boundary update env' = sum_{e,f} F(f,e) A^{(e)T} env conj(A^{(f)}).
/// env[a,a'] pairs the ket bond a with the bra bond a'.
inline Matrix left_transfer(const Matrix& env, const MpsSite& a, const Matrix2& f) {
  const Matrix y0 = a[0].transpose() * env;
  const Matrix y1 = a[1].transpose() * env;
  const Matrix c0 = f(0, 0) * y0 + f(0, 1) * y1;
  const Matrix c1 = f(1, 0) * y0 + f(1, 1) * y1;
  Matrix out = c0 * a[0].conjugate();
  out.noalias() += c1 * a[1].conjugate();
  return out;
}

/// Right boundary update env' = sum_{e,f} F(f,e) A^{(e)} env A^{(f)dagger}.
inline Matrix right_transfer(const Matrix& env, const MpsSite& a, const Matrix2& f) {
  const Matrix z0 = a[0] * env;
  const Matrix z1 = a[1] * env;
  const Matrix c0 = f(0, 0) * z0 + f(0, 1) * z1;
  const Matrix c1 = f(1, 0) * z0 + f(1, 1) * z1;
  Matrix out = c0 * a[0].adjoint();
  out.noalias() += c1 * a[1].adjoint();
  return out;
}

/// Left updates for all four Pauli labels at once, indexed by Pauli code.
/// Shares the four products A^{(e)T} env conj(A^{(f)}).
inline std::array<Matrix, 4> pauli_transfers(const Matrix& env, const MpsSite& a) {
  const Complex i(0.0, 1.0);
  const Matrix y0 = a[0].transpose() * env;
  const Matrix y1 = a[1].transpose() * env;
  const Matrix m00 = y0 * a[0].conjugate();
  const Matrix m01 = y0 * a[1].conjugate();
  const Matrix m10 = y1 * a[0].conjugate();
  const Matrix m11 = y1 * a[1].conjugate();
  return {m00 + m11, m01 + m10, i * m01 - i * m10, m00 - m11};
}

/// Right-to-left orthonormalization of a chain with D physical slices per
/// site. Afterwards sum_b S_i^{(b)} S_i^{(b)dagger} = I for every i >= 1
/// (0-based), and the first site carries the norm. Bond dimensions may shrink
/// when a bond exceeds the rank available from its right.
template <std::size_t D>
void orthonormalize_right(std::vector<std::array<Matrix, D>>& sites, OrthoMethod method,
                          std::vector<Eigen::VectorXd>* spectra) {
  const std::size_t n = sites.size();
  if (spectra) spectra->assign(n, Eigen::VectorXd());
  for (std::size_t i = n; i-- > 1;) {
    auto& site = sites[i];
    const Index rows = site[0].rows();
    const Index cols = site[0].cols();
    Matrix flat(rows, static_cast<Index>(D) * cols);
    for (std::size_t b = 0; b < D; ++b) flat.middleCols(static_cast<Index>(b) * cols, cols) = site[b];

    const Index k = std::min(rows, flat.cols());
    Matrix left;      // rows x k, absorbed into the previous site
    Matrix orthonormal;  // k x (D cols), orthonormal rows
    if (method == OrthoMethod::Qr) {
      Eigen::HouseholderQR<Matrix> qr(flat.adjoint());
      const Matrix q = qr.householderQ() * Matrix::Identity(flat.cols(), k);
      const Matrix r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
      orthonormal = q.adjoint();
      left = r.adjoint();
    } else {
      Eigen::BDCSVD<Matrix> svd(flat, Eigen::ComputeThinU | Eigen::ComputeThinV);
      orthonormal = svd.matrixV().leftCols(k).adjoint();
      left = svd.matrixU().leftCols(k) * svd.singularValues().head(k).asDiagonal();
      if (spectra) (*spectra)[i] = svd.singularValues().head(k);
    }
    for (std::size_t b = 0; b < D; ++b) {
      site[b] = orthonormal.middleCols(static_cast<Index>(b) * cols, cols);
      sites[i - 1][b] = sites[i - 1][b] * left;
    }
  }
  double norm2 = 0.0;
  for (const auto& s : sites.front()) norm2 += s.squaredNorm();
  if (!(norm2 > 1e-300)) throw NumericalError("canonicalize: zero-norm state");
}

/// max over sites i >= 1 (0-based) of |sum_b S S^dagger - I|_max.
template <std::size_t D>
double right_residual(const std::vector<std::array<Matrix, D>>& sites) {
  double worst = 0.0;
  for (std::size_t i = 1; i < sites.size(); ++i) {
    Matrix acc = Matrix::Zero(sites[i][0].rows(), sites[i][0].rows());
    for (const auto& s : sites[i]) acc.noalias() += s * s.adjoint();
    acc -= Matrix::Identity(acc.rows(), acc.cols());
    worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace mpsdfe::detail
