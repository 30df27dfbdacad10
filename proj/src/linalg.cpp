#include "qbm/linalg.hpp"

#include <lapacke.h>

#include <stdexcept>

namespace qbm {

EigenDecomposition sym_eigen(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigen: matrix not square");
  EigenDecomposition out;
  out.vectors = m;
  const lapack_int n = static_cast<lapack_int>(m.rows());
  out.values.resize(n);
  if (n == 0) return out;
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                   out.vectors.data(), n, out.values.data());
  if (info != 0) throw std::runtime_error("sym_eigen: dsyevd failed, info=" + std::to_string(info));
  return out;
}

EigenDecomposition sym_tridiag_eigen(const Eigen::VectorXd& diag,
                                     const Eigen::VectorXd& subdiag) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  if (subdiag.size() != n - 1 && !(n == 0 && subdiag.size() == 0))
    throw std::invalid_argument("sym_tridiag_eigen: size mismatch");
  EigenDecomposition out;
  out.values = diag;
  out.vectors.setZero(n, n);
  if (n == 0) return out;
  Eigen::VectorXd e = subdiag;
  lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, out.values.data(),
                                  e.data(), out.vectors.data(), n);
  if (info != 0) throw std::runtime_error("sym_tridiag_eigen: dstev failed, info=" + std::to_string(info));
  return out;
}

}  // namespace qbm
