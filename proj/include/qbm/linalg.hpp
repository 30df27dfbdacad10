#ifndef QBM_LINALG_HPP
#define QBM_LINALG_HPP

#include <Eigen/Dense>

namespace qbm {

struct EigenDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k belongs to values[k]
};

// Dense symmetric eigendecomposition (LAPACK dsyevd). Throws std::runtime_error
// if the backend fails to converge.
EigenDecomposition sym_eigen(const Eigen::MatrixXd& m);

// Eigenvalues/-vectors of a symmetric tridiagonal matrix given by its
// diagonal and sub-diagonal (LAPACK dstev). Used for Golub-Welsch quadrature.
EigenDecomposition sym_tridiag_eigen(const Eigen::VectorXd& diag,
                                     const Eigen::VectorXd& subdiag);

}  // namespace qbm

#endif
