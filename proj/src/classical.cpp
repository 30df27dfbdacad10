#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "qbm/classical.hpp"
#include "qbm/kernels.hpp"
#include "qbm/sumrules.hpp"

namespace qbm {

namespace {

struct Refined {
  std::vector<double> pos;
  double energy;
  double grad_norm;
};

double grad_norm(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

// Damped gradient descent with Armijo backtracking; the step grows after
// accepted moves so the schedule self-tunes across the lambda range.
Refined refine(std::vector<double> pos, int n, int d, double lambda, double tol,
               int max_steps) {
  std::vector<double> grad(pos.size()), trial(pos.size()), gtrial(pos.size());
  double e = kernels::coulomb_cluster_energy_gradient(pos.data(), n, d, lambda, grad.data());
  double step = 0.1;
  for (int it = 0; it < max_steps; ++it) {
    const double gn = grad_norm(grad);
    if (gn <= tol) return {std::move(pos), e, gn};
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < pos.size(); ++i) trial[i] = pos[i] - step * grad[i];
      const double et =
          kernels::coulomb_cluster_energy_gradient(trial.data(), n, d, lambda, gtrial.data());
      if (std::isfinite(et) && et <= e - 1e-4 * step * gn * gn) {
        pos.swap(trial);
        grad.swap(gtrial);
        e = et;
        step *= 1.5;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {std::move(pos), e, grad_norm(grad)};
  }
  return {std::move(pos), e, grad_norm(grad)};
}

// Newton polish: gradient descent converges only linearly near the minimum
// and stalls around |g| ~ 1e-6 E in double precision, while the acceptance
// tolerance asks for much sharper stationarity. The analytic Hessian of
// sum r^2/2 + lambda sum 1/r_ij closes the gap quadratically.
Refined newton_polish(Refined cur, int n, int d, double lambda, double tol) {
  const int dim = n * d;
  std::vector<double> grad(dim);
  Eigen::MatrixXd h(dim, dim);
  for (int it = 0; it < 50 && cur.grad_norm > tol; ++it) {
    double e = kernels::coulomb_cluster_energy_gradient(cur.pos.data(), n, d, lambda, grad.data());
    h.setIdentity();  // trap block
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double u[2] = {cur.pos[i] - cur.pos[j], d == 2 ? cur.pos[n + i] - cur.pos[n + j] : 0.0};
        const double r2 = u[0] * u[0] + u[1] * u[1];
        const double inv_r3 = 1.0 / (r2 * std::sqrt(r2));
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            const double t = lambda * (3.0 * u[a] * u[b] / r2 - (a == b ? 1.0 : 0.0)) * inv_r3;
            h(a * n + i, b * n + i) += t;
            h(a * n + j, b * n + j) += t;
            h(a * n + i, b * n + j) -= t;
            h(a * n + j, b * n + i) -= t;
          }
      }
    if (d == 2) {
      // The energy is rotation invariant, so the Hessian has an exact zero
      // mode along the rotation generator; penalize it to keep the Newton
      // system well conditioned (the gradient has no component there).
      Eigen::VectorXd v(dim);
      for (int i = 0; i < n; ++i) {
        v(i) = -cur.pos[n + i];
        v(n + i) = cur.pos[i];
      }
      const double nv = v.norm();
      if (nv > 0.0) {
        v /= nv;
        h += v * v.transpose();
      }
    }
    Eigen::Map<Eigen::VectorXd> g(grad.data(), dim);
    Eigen::VectorXd step = h.ldlt().solve(g);
    if (!step.allFinite()) break;
    std::vector<double> trial(cur.pos);
    for (int k = 0; k < dim; ++k) trial[k] -= step(k);
    std::vector<double> gtrial(dim);
    const double et =
        kernels::coulomb_cluster_energy_gradient(trial.data(), n, d, lambda, gtrial.data());
    const double gn_new = grad_norm(gtrial);
    if (!std::isfinite(et) || gn_new >= cur.grad_norm) break;
    cur.pos.swap(trial);
    cur.energy = et;
    cur.grad_norm = gn_new;
    (void)e;
  }
  return cur;
}

}  // namespace

ClassicalConfiguration minimize_classical(int d, int N, double lambda,
                                          const ClassicalOptions& opts) {
  if (d != 1 && d != 2) throw std::invalid_argument("minimize_classical: d must be 1 or 2");
  if (N < 2) throw std::invalid_argument("minimize_classical: N >= 2");
  if (lambda <= 0.0) throw std::invalid_argument("minimize_classical: lambda > 0");

  const int restarts = opts.n_restarts > 0 ? opts.n_restarts : (N <= 50 ? 25 : 100);
  const double radius = 2.0 * std::cbrt(2.0 * lambda * N);

  Refined best;
  best.energy = std::numeric_limits<double>::infinity();
  double worst_accepted = -std::numeric_limits<double>::infinity();
  double best_accepted = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r) * 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<double> pos(N * d);
    if (d == 1) {
      for (double& p : pos) p = u(rng);
    } else {
      for (int i = 0; i < N; ++i) {  // uniform in the disc by rejection
        double x, y;
        do {
          x = u(rng);
          y = u(rng);
        } while (x * x + y * y > radius * radius);
        pos[i] = x;
        pos[N + i] = y;
      }
    }
    // Center the cloud; the CM coordinate decouples and only slows descent.
    for (int c = 0; c < d; ++c) {
      double cm = 0.0;
      for (int i = 0; i < N; ++i) cm += pos[c * N + i];
      cm /= N;
      for (int i = 0; i < N; ++i) pos[c * N + i] -= cm;
    }

    // Descent tolerance tracks the decreasing energy: re-refine until the
    // gradient is moderately small relative to the current energy, then hand
    // the basin over to the Newton polish for full stationarity.
    Refined cur = refine(std::move(pos), N, d, lambda, 0.0, 0);
    double coarse = 1e-6 * std::max(1.0, std::abs(cur.energy));
    for (int pass = 0; pass < 8; ++pass) {
      cur = refine(std::move(cur.pos), N, d, lambda, coarse, opts.max_descent_steps);
      const double t2 = 1e-6 * std::max(1.0, std::abs(cur.energy));
      const bool done = cur.grad_norm <= t2;
      coarse = t2;
      if (done) break;
    }
    const double tol = opts.grad_tol_scale * std::max(1.0, std::abs(cur.energy));
    cur = newton_polish(std::move(cur), N, d, lambda, tol);
    if (cur.grad_norm > tol) continue;  // non-converged restart, skip
    best_accepted = std::min(best_accepted, cur.energy);
    worst_accepted = std::max(worst_accepted, cur.energy);
    if (cur.energy < best.energy) best = std::move(cur);
  }
  if (!std::isfinite(best.energy))
    throw std::runtime_error("minimize_classical: no restart converged");

  ClassicalConfiguration cfg;
  cfg.positions = std::move(best.pos);
  cfg.dimension = d;
  cfg.particles = N;
  cfg.lambda = lambda;
  cfg.energy = best.energy;
  cfg.gradient_norm = best.grad_norm;
  cfg.restarts_used = restarts;
  cfg.metastable =
      (worst_accepted - best_accepted) > 1e-6 * std::max(1.0, std::abs(best_accepted));
  return cfg;
}

namespace {

void trap_interaction(const ClassicalConfiguration& cfg, double& v, double& w) {
  const int n = cfg.particles, d = cfg.dimension;
  const double* x = cfg.positions.data();
  const double* y = d == 2 ? x + n : nullptr;
  v = w = 0.0;
  for (int i = 0; i < n; ++i) {
    v += 0.5 * (x[i] * x[i] + (y ? y[i] * y[i] : 0.0));
    for (int j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y ? y[i] - y[j] : 0.0;
      w += cfg.lambda / std::sqrt(dx * dx + dy * dy);
    }
  }
}

}  // namespace

double classical_breathing_check(const ClassicalConfiguration& cfg) {
  double v, w;
  trap_interaction(cfg, v, w);
  const double e = v + w;
  if (std::abs(2.0 * v - w) / std::max(e, 1.0) > 1e-6)
    throw std::invalid_argument("classical_breathing_check: configuration not stationary");
  return sr31_from_energies(EnergyBreakdown::from_parts(0.0, v, w), 1);
}

GroundStateResult classical_ground_state(const SystemSpec& spec,
                                         const ClassicalOptions& opts) {
  spec.validate();
  if (spec.alpha != 1)
    throw std::invalid_argument("classical_ground_state: Coulomb clusters only");
  ClassicalConfiguration cfg =
      minimize_classical(spec.dimension, spec.particles, spec.lambda, opts);
  double v, w;
  trap_interaction(cfg, v, w);
  GroundStateResult gs;
  gs.engine = Engine::Classical;
  gs.energies = EnergyBreakdown::from_parts(0.0, v, w);
  gs.r2 = 2.0 * v;
  // Classical positions scale as gamma^{-1/3}, so <r^2>(gamma) =
  // gamma^{-2/3} <r^2>(1): the derivative is available in closed form.
  gs.r2_dgamma = -2.0 / 3.0 * gs.r2;
  return gs;
}

void dump_configuration(const ClassicalConfiguration& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_configuration: cannot open " + path);
  out << "index,x,y\n";
  for (int i = 0; i < cfg.particles; ++i) {
    const double y = cfg.dimension == 2 ? cfg.positions[cfg.particles + i] : 0.0;
    out << i << ',' << cfg.positions[i] << ',' << y << '\n';
  }
}

}  // namespace qbm
