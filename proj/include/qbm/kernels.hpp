#ifndef QBM_KERNELS_HPP
#define QBM_KERNELS_HPP

#include <cstddef>

// Data-parallel inner loops used by the Thomas-Fermi convolution and the
// classical cluster minimizer. Each kernel has a scalar reference
// implementation and an AVX2 variant; the active one is chosen at runtime
// from CPU features (override with QBM_FORCE_SCALAR=1 or force_scalar()).

namespace qbm::kernels {

// Dot product sum_i a[i]*b[i].
double dot(const double* a, const double* b, std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);

// Trap + pairwise-Coulomb energy of N points in d dimensions (d = 1 or 2),
// positions stored per-coordinate (SoA: x[0..N), then y[0..N) when d = 2).
// Writes the gradient in the same layout and returns the energy.
double coulomb_cluster_energy_gradient(const double* pos, int N, int d,
                                       double lambda, double* grad);
double coulomb_cluster_energy_gradient_scalar(const double* pos, int N, int d,
                                              double lambda, double* grad);
double coulomb_cluster_energy_gradient_avx2(const double* pos, int N, int d,
                                            double lambda, double* grad);

bool avx2_active();
void force_scalar(bool on);

}  // namespace qbm::kernels

#endif
