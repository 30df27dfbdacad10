#include "qbm/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace qbm::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool use_avx2() {
  static const bool cpu_ok = [] {
    const char* env = std::getenv("QBM_FORCE_SCALAR");
    if (env && env[0] == '1') return false;
    return cpu_has_avx2();
  }();
  return cpu_ok && !g_force_scalar.load(std::memory_order_relaxed);
}

}  // namespace

bool avx2_active() { return use_avx2(); }
void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  return use_avx2() ? dot_avx2(a, b, n) : dot_scalar(a, b, n);
}

double coulomb_cluster_energy_gradient_scalar(const double* pos, int N, int d,
                                              double lambda, double* grad) {
  const double* x = pos;
  const double* y = (d == 2) ? pos + N : nullptr;
  double* gx = grad;
  double* gy = (d == 2) ? grad + N : nullptr;
  for (int i = 0; i < N * d; ++i) grad[i] = 0.0;

  double e = 0.0;
  for (int i = 0; i < N; ++i) {
    const double xi = x[i];
    const double yi = y ? y[i] : 0.0;
    e += 0.5 * (xi * xi + yi * yi);
    gx[i] += xi;
    if (gy) gy[i] += yi;
    for (int j = i + 1; j < N; ++j) {
      const double dx = xi - x[j];
      const double dy = y ? yi - y[j] : 0.0;
      const double r2 = dx * dx + dy * dy;
      const double inv_r = 1.0 / std::sqrt(r2);
      e += lambda * inv_r;
      const double f = lambda * inv_r / r2;  // lambda / r^3
      gx[i] -= f * dx;
      gx[j] += f * dx;
      if (gy) {
        gy[i] -= f * dy;
        gy[j] += f * dy;
      }
    }
  }
  return e;
}

double coulomb_cluster_energy_gradient(const double* pos, int N, int d,
                                       double lambda, double* grad) {
  return use_avx2() ? coulomb_cluster_energy_gradient_avx2(pos, N, d, lambda, grad)
                    : coulomb_cluster_energy_gradient_scalar(pos, N, d, lambda, grad);
}

}  // namespace qbm::kernels
