// AVX2/FMA kernel variants. Compiled with -mavx2 -mfma; callers dispatch at
// runtime, so nothing here may run on a CPU without AVX2.

#include "qbm/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace qbm::kernels {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc0);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

namespace {

// Accumulates, for fixed i, the pair terms over j in [i+1, N):
// energy sum lambda/r_ij and the force lambda*(r_i-r_j)/r^3 acting on i
// (the reaction on j is written back through gx/gy).
inline double pair_row_2d(int i, int N, const double* x, const double* y,
                          double lambda, double* gx, double* gy) {
  const __m256d xi = _mm256_set1_pd(x[i]);
  const __m256d yi = _mm256_set1_pd(y[i]);
  const __m256d lam = _mm256_set1_pd(lambda);
  __m256d e_acc = _mm256_setzero_pd();
  __m256d fx_acc = _mm256_setzero_pd();
  __m256d fy_acc = _mm256_setzero_pd();
  int j = i + 1;
  for (; j + 4 <= N; j += 4) {
    const __m256d dx = _mm256_sub_pd(xi, _mm256_loadu_pd(x + j));
    const __m256d dy = _mm256_sub_pd(yi, _mm256_loadu_pd(y + j));
    const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d inv_r = _mm256_div_pd(lam, _mm256_sqrt_pd(r2));  // lambda/r
    e_acc = _mm256_add_pd(e_acc, inv_r);
    const __m256d f = _mm256_div_pd(inv_r, r2);  // lambda/r^3
    const __m256d fx = _mm256_mul_pd(f, dx);
    const __m256d fy = _mm256_mul_pd(f, dy);
    fx_acc = _mm256_add_pd(fx_acc, fx);
    fy_acc = _mm256_add_pd(fy_acc, fy);
    alignas(32) double fxl[4], fyl[4];
    _mm256_store_pd(fxl, fx);
    _mm256_store_pd(fyl, fy);
    for (int k = 0; k < 4; ++k) {
      gx[j + k] += fxl[k];
      gy[j + k] += fyl[k];
    }
  }
  alignas(32) double el[4], fxl[4], fyl[4];
  _mm256_store_pd(el, e_acc);
  _mm256_store_pd(fxl, fx_acc);
  _mm256_store_pd(fyl, fy_acc);
  double e = el[0] + el[1] + el[2] + el[3];
  double fx_i = fxl[0] + fxl[1] + fxl[2] + fxl[3];
  double fy_i = fyl[0] + fyl[1] + fyl[2] + fyl[3];
  for (; j < N; ++j) {
    const double dx = x[i] - x[j];
    const double dy = y[i] - y[j];
    const double r2 = dx * dx + dy * dy;
    const double lr = lambda / std::sqrt(r2);
    e += lr;
    const double f = lr / r2;
    fx_i += f * dx;
    fy_i += f * dy;
    gx[j] += f * dx;
    gy[j] += f * dy;
  }
  gx[i] -= fx_i;
  gy[i] -= fy_i;
  return e;
}

}  // namespace

double coulomb_cluster_energy_gradient_avx2(const double* pos, int N, int d,
                                            double lambda, double* grad) {
  if (d != 2) {
    // 1D rows are short in practice; the scalar path is fine there.
    return coulomb_cluster_energy_gradient_scalar(pos, N, d, lambda, grad);
  }
  const double* x = pos;
  const double* y = pos + N;
  double* gx = grad;
  double* gy = grad + N;
  for (int i = 0; i < 2 * N; ++i) grad[i] = 0.0;

  double e = 0.0;
  for (int i = 0; i < N; ++i) {
    e += 0.5 * (x[i] * x[i] + y[i] * y[i]);
    gx[i] += x[i];
    gy[i] += y[i];
    e += pair_row_2d(i, N, x, y, lambda, gx, gy);
  }
  return e;
}

}  // namespace qbm::kernels
