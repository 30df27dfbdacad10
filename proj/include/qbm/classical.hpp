#ifndef QBM_CLASSICAL_HPP
#define QBM_CLASSICAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qbm/model.hpp"

// Classical trapped-Coulomb-cluster minimizer: E = sum r_i^2/2 + lambda
// sum_{i<j} 1/r_ij, best local minimum over randomized restarts, refined by
// damped gradient descent with backtracking. Strong-coupling reference for
// the quantum engines.

namespace qbm {

struct ClassicalConfiguration {
  std::vector<double> positions;  // SoA: x[0..N), then y[0..N) when d = 2
  int dimension = 2;
  int particles = 0;
  double lambda = 0.0;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int restarts_used = 0;
  bool metastable = false;  // restarts disagreed by > 1e-6 relative
};

struct ClassicalOptions {
  int n_restarts = 0;  // 0 -> 25 for N <= 50, 100 otherwise
  std::uint64_t seed = 1234;
  double grad_tol_scale = 1e-9;  // accept at |g| <= scale * max(1, E)
  int max_descent_steps = 200000;
};

ClassicalConfiguration minimize_classical(int d, int N, double lambda,
                                          const ClassicalOptions& opts = {});

// sr(3,1) in the classical limit (T = 0); verifies the classical virial
// 2V = W first and throws on non-stationary input.
double classical_breathing_check(const ClassicalConfiguration& cfg);

GroundStateResult classical_ground_state(const SystemSpec& spec,
                                         const ClassicalOptions& opts = {});

void dump_configuration(const ClassicalConfiguration& cfg, const std::string& path);

}  // namespace qbm

#endif
