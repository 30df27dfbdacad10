#ifndef QBM_TF_HPP
#define QBM_TF_HPP

#include <vector>

#include "qbm/model.hpp"

// Thomas-Fermi engines. 1D: self-consistent solution of
//   (pi^2/2) n^2 + gamma r^2/2 + lambda (w_kappa * n) = mu
// on a uniform grid with mu-bisection and damped density mixing, warm-started
// by lambda-continuation. 2D: closed-form three-term energy of the parabolic
// density ansatz, minimized over its single shape parameter gamma_TF.

namespace qbm {

struct TfDensity1D {
  std::vector<double> grid;     // uniform, symmetric about 0
  std::vector<double> density;  // n(r) >= 0
  double mu = 0.0;
  EnergyBreakdown breakdown;
  double lambda = 0.0;
  int particles = 0;
  double kappa = 0.1;
  double gamma = 1.0;
  double residual = 0.0;  // sup-norm TF-equation residual on the support
  // Virial form of the interaction energy, (lambda/2) iint n n' d^2/(d^2+kappa^2)^{3/2}.
  // The regularized kernel satisfies 2T - 2V + W_virial = 0 instead of the
  // bare-Coulomb identity; the gap W - W_virial ~ lambda int n^2 is physical.
  double interaction_virial = 0.0;
};

struct Tf1dOptions {
  int grid_points = 2000;
  double mixing = 0.2;
  double density_tol = 1e-10;  // sup-norm density change per iteration
  int max_iter = 20000;
  double half_width = 0.0;     // 0 -> 1.5 sqrt(2 N (1 + lambda))
};

// Ideal (lambda = 0) spin-polarized profile n(r) = (1/pi) sqrt(2N - r^2)_+.
std::vector<double> ideal_density_1d(int N, const std::vector<double>& grid);

// Direct solve from a caller-supplied normalized initial density.
TfDensity1D tf1d_solve(const SystemSpec& spec, const std::vector<double>& grid,
                       const std::vector<double>& initial, const Tf1dOptions& opts = {});

// Warm-started chain along an ascending lambda schedule starting at <= 1e-2.
std::vector<TfDensity1D> tf1d_continuation(const SystemSpec& spec,
                                           const std::vector<double>& lambda_schedule,
                                           const Tf1dOptions& opts = {});

// Full engine entry point: builds the grid, runs the continuation internally,
// and packages energies, <r^2>, and the gamma derivative for m_-1.
GroundStateResult tf1d_ground_state(const SystemSpec& spec, const Tf1dOptions& opts = {},
                                    bool gamma_derivative = true);

struct Tf2dResult {
  double gamma_shape = 1.0;  // variational parameter gamma_TF
  double r0 = 0.0;           // cloud radius, r0^2 = 2 sqrt(gamma_TF N)
  EnergyBreakdown breakdown;
};

// Three-term energy breakdown of the parabolic ansatz at fixed gamma_TF.
EnergyBreakdown tf2d_energy(double gamma_shape, int N, double lambda,
                            double trap_scale = 1.0);

// Minimize over log gamma_TF to |dE/dgamma| <= 1e-10 E.
Tf2dResult tf2d_minimize(int N, double lambda, double trap_scale = 1.0);

GroundStateResult tf2d_ground_state(const SystemSpec& spec, bool gamma_derivative = true);

}  // namespace qbm

#endif
