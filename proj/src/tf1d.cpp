#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/kernels.hpp"
#include "qbm/sumrules.hpp"
#include "qbm/tf.hpp"

namespace qbm {

namespace {

constexpr double kPi = std::numbers::pi;

// Cell-averaged regularized Coulomb kernel on the doubled lattice:
// K[m] = (1/dx) int over one cell of 1/sqrt(x^2 + kappa^2), centered at
// (m - (G-1)) dx. Cell averaging keeps the cusp region integrated exactly
// even when dx > kappa. The row starting at G-1-i is the kernel seen from
// grid point i, contiguous for the dot-product kernel.
std::vector<double> extended_kernel(int g, double dx, double kappa) {
  std::vector<double> k(2 * g - 1);
  auto prim = [&](double x) { return std::asinh(x / kappa); };
  for (int m = 0; m < 2 * g - 1; ++m) {
    const double x = (m - (g - 1)) * dx;
    k[m] = (prim(x + 0.5 * dx) - prim(x - 0.5 * dx)) / dx;
  }
  return k;
}

// Cell-averaged virial kernel d^2/(d^2 + kappa^2)^{3/2} = -d w_kappa/d log s;
// antiderivative asinh(x/kappa) - x/sqrt(x^2 + kappa^2).
std::vector<double> extended_virial_kernel(int g, double dx, double kappa) {
  std::vector<double> k(2 * g - 1);
  auto prim = [&](double x) {
    return std::asinh(x / kappa) - x / std::sqrt(x * x + kappa * kappa);
  };
  for (int m = 0; m < 2 * g - 1; ++m) {
    const double x = (m - (g - 1)) * dx;
    k[m] = (prim(x + 0.5 * dx) - prim(x - 0.5 * dx)) / dx;
  }
  return k;
}

void convolve(const std::vector<double>& kext, const std::vector<double>& n, double dx,
              std::vector<double>& out) {
  const int g = static_cast<int>(n.size());
  out.resize(g);
  for (int i = 0; i < g; ++i)
    out[i] = dx * kernels::dot(kext.data() + (g - 1 - i), n.data(), g);
}

double integrate(const std::vector<double>& f, double dx) {
  double s = 0.0;
  for (double v : f) s += v;
  return s * dx;
}

// Chemical potential restoring the normalization for the given effective
// potential; the particle count is strictly increasing in mu.
double solve_mu(const std::vector<double>& veff, double dx, int n_target) {
  auto count = [&](double mu) {
    double s = 0.0;
    for (double v : veff) {
      const double gap = mu - v;
      if (gap > 0.0) s += std::sqrt(2.0 * gap) / kPi;
    }
    return s * dx;
  };
  double lo = *std::min_element(veff.begin(), veff.end());
  double step = 1.0;
  double hi = lo + step;
  while (count(hi) < n_target) {
    step *= 2.0;
    hi = lo + step;
    if (step > 1e12) throw std::runtime_error("tf1d: mu bracket expansion failed");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count(mid) < n_target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> ideal_density_1d(int N, const std::vector<double>& grid) {
  if (N < 1) throw std::invalid_argument("ideal_density_1d: N >= 1");
  const double r2max = 2.0 * N;
  std::vector<double> n(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double gap = r2max - grid[i] * grid[i];
    n[i] = gap > 0.0 ? std::sqrt(gap) / kPi : 0.0;
  }
  return n;
}

TfDensity1D tf1d_solve(const SystemSpec& spec, const std::vector<double>& grid,
                       const std::vector<double>& initial, const Tf1dOptions& opts) {
  spec.validate();
  if (spec.dimension != 1 || spec.alpha != 1)
    throw std::invalid_argument("tf1d_solve: 1D Coulomb only");
  if (grid.size() != initial.size() || grid.size() < 16)
    throw std::invalid_argument("tf1d_solve: bad grid/initial sizes");
  const int g = static_cast<int>(grid.size());
  const double dx = grid[1] - grid[0];
  const int n_target = spec.particles;
  if (std::abs(integrate(initial, dx) - n_target) > 1e-6 * n_target)
    throw std::invalid_argument("tf1d_solve: initial density not normalized to N");

  const std::vector<double> kext = extended_kernel(g, dx, spec.kappa);
  std::vector<double> n = initial, conv, veff(g), nnew(g);
  double mu = 0.0;
  bool converged = false;
  for (int it = 0; it < opts.max_iter; ++it) {
    convolve(kext, n, dx, conv);
    for (int i = 0; i < g; ++i)
      veff[i] = 0.5 * spec.trap_scale * grid[i] * grid[i] + spec.lambda * conv[i];
    mu = solve_mu(veff, dx, n_target);
    double delta = 0.0;
    for (int i = 0; i < g; ++i) {
      const double gap = mu - veff[i];
      nnew[i] = gap > 0.0 ? std::sqrt(2.0 * gap) / kPi : 0.0;
      delta = std::max(delta, std::abs(nnew[i] - n[i]));
    }
    const double beta = spec.lambda == 0.0 ? 1.0 : opts.mixing;
    for (int i = 0; i < g; ++i) n[i] += beta * (nnew[i] - n[i]);
    if (delta < opts.density_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("tf1d_solve: SCF did not converge (continuation needed)");

  TfDensity1D out;
  out.grid = grid;
  out.density = n;
  out.mu = mu;
  out.lambda = spec.lambda;
  out.particles = n_target;
  out.kappa = spec.kappa;
  out.gamma = spec.trap_scale;

  convolve(kext, n, dx, conv);
  double t = 0.0, v = 0.0, w = 0.0, res = 0.0;
  for (int i = 0; i < g; ++i) {
    t += n[i] * n[i] * n[i];
    v += grid[i] * grid[i] * n[i];
    w += n[i] * conv[i];
    const double vi = 0.5 * spec.trap_scale * grid[i] * grid[i] + spec.lambda * conv[i];
    if (vi < mu)  // TF support
      res = std::max(res, std::abs(0.5 * kPi * kPi * n[i] * n[i] + vi - mu));
  }
  out.breakdown = EnergyBreakdown::from_parts(kPi * kPi / 6.0 * t * dx,
                                              0.5 * spec.trap_scale * v * dx,
                                              0.5 * spec.lambda * w * dx);
  out.residual = res;

  const std::vector<double> kvir = extended_virial_kernel(g, dx, spec.kappa);
  std::vector<double> conv_v;
  convolve(kvir, n, dx, conv_v);
  double wv = 0.0;
  for (int i = 0; i < g; ++i) wv += n[i] * conv_v[i];
  out.interaction_virial = 0.5 * spec.lambda * wv * dx;
  return out;
}

std::vector<TfDensity1D> tf1d_continuation(const SystemSpec& spec,
                                           const std::vector<double>& lambda_schedule,
                                           const Tf1dOptions& opts) {
  if (lambda_schedule.empty())
    throw std::invalid_argument("tf1d_continuation: empty schedule");
  if (lambda_schedule.front() > 1e-2)
    throw std::invalid_argument("tf1d_continuation: schedule must start at lambda <= 1e-2");
  for (std::size_t i = 1; i < lambda_schedule.size(); ++i)
    if (lambda_schedule[i] <= lambda_schedule[i - 1])
      throw std::invalid_argument("tf1d_continuation: schedule must be ascending");

  const double lam_max = lambda_schedule.back();
  const double half_width = opts.half_width > 0.0
                                ? opts.half_width
                                : 1.5 * std::sqrt(2.0 * spec.particles * (1.0 + lam_max));
  const int g = opts.grid_points;
  std::vector<double> grid(g);
  for (int i = 0; i < g; ++i) grid[i] = -half_width + 2.0 * half_width * i / (g - 1);

  std::vector<double> n = ideal_density_1d(spec.particles, grid);
  // Exact quadrature-level renormalization of the analytic profile.
  const double dx = grid[1] - grid[0];
  double norm = 0.0;
  for (double v : n) norm += v * dx;
  for (double& v : n) v *= spec.particles / norm;

  std::vector<TfDensity1D> chain;
  chain.reserve(lambda_schedule.size());
  for (double lam : lambda_schedule) {
    SystemSpec s = spec;
    s.lambda = lam;
    try {
      chain.push_back(tf1d_solve(s, grid, n, opts));
    } catch (const std::exception& e) {
      throw std::runtime_error("tf1d_continuation: link at lambda = " + std::to_string(lam) +
                               " failed: " + e.what());
    }
    n = chain.back().density;
  }
  return chain;
}

namespace {

std::vector<double> default_schedule(double lambda) {
  std::vector<double> s;
  if (lambda <= 1e-2) {
    s.push_back(lambda);
    return s;
  }
  for (double l = 1e-2; l < lambda; l *= 2.0) s.push_back(l);
  s.push_back(lambda);
  return s;
}

TfDensity1D tf1d_converged(const SystemSpec& spec, const Tf1dOptions& opts) {
  return tf1d_continuation(spec, default_schedule(spec.lambda), opts).back();
}

}  // namespace

GroundStateResult tf1d_ground_state(const SystemSpec& spec, const Tf1dOptions& opts,
                                    bool gamma_derivative) {
  TfDensity1D sol = tf1d_converged(spec, opts);
  GroundStateResult gs;
  gs.engine = Engine::ThomasFermi;
  gs.energies = sol.breakdown;
  gs.r2 = 2.0 * sol.breakdown.trap / spec.trap_scale;
  const int g = static_cast<int>(sol.grid.size());
  gs.density.reserve(g);
  for (int i = 0; i < g; ++i) gs.density.emplace_back(sol.grid[i], sol.density[i]);

  if (gamma_derivative) {
    // Warm-started re-solves at the scaled trap. The grid is rescaled by the
    // ideal cloud-size factor gamma^{-1/4} so the square-root cloud edge sits
    // at the same fractional grid position for every gamma; otherwise the
    // O(dx^{3/2}) edge quadrature error is non-smooth in gamma and pollutes
    // the finite difference.
    Tf1dOptions o = opts;
    auto r2_of = [&](double gamma) {
      SystemSpec s = spec;
      s.trap_scale = gamma;
      const double scale = std::pow(gamma, -0.25);
      std::vector<double> grid_g(sol.grid.size()), init_g(sol.density.size());
      for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        grid_g[i] = scale * sol.grid[i];
        init_g[i] = sol.density[i] / scale;  // preserves the normalization
      }
      TfDensity1D p = tf1d_solve(s, grid_g, init_g, o);
      return 2.0 * p.breakdown.trap / gamma;
    };
    gs.r2_dgamma = r2_gamma_derivative(r2_of).value;
  }
  return gs;
}

}  // namespace qbm
