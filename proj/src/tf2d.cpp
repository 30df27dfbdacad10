#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/sumrules.hpp"
#include "qbm/tf.hpp"

namespace qbm {

namespace {

// Interaction coefficient of the parabolic ansatz: (512/315) sqrt(2)/pi.
const double kInteraction = 512.0 / 315.0 * std::numbers::sqrt2 / std::numbers::pi;

double total_energy(double gamma_shape, int n, double lambda, double trap_scale) {
  const double n32 = std::pow(static_cast<double>(n), 1.5);
  return n32 / 3.0 / std::sqrt(gamma_shape) + trap_scale * n32 * std::sqrt(gamma_shape) / 3.0 +
         lambda * kInteraction * std::pow(gamma_shape, -0.25) * std::pow(n, 1.75);
}

}  // namespace

EnergyBreakdown tf2d_energy(double gamma_shape, int N, double lambda, double trap_scale) {
  if (gamma_shape <= 0.0) throw std::invalid_argument("tf2d_energy: gamma_TF must be > 0");
  if (N < 1) throw std::invalid_argument("tf2d_energy: N >= 1");
  const double n32 = std::pow(static_cast<double>(N), 1.5);
  return EnergyBreakdown::from_parts(
      n32 / 3.0 / std::sqrt(gamma_shape), trap_scale * n32 * std::sqrt(gamma_shape) / 3.0,
      lambda * kInteraction * std::pow(gamma_shape, -0.25) * std::pow(N, 1.75));
}

Tf2dResult tf2d_minimize(int N, double lambda, double trap_scale) {
  if (N < 1) throw std::invalid_argument("tf2d_minimize: N >= 1");
  if (lambda < 0.0) throw std::invalid_argument("tf2d_minimize: lambda >= 0");

  // Golden-section on log gamma; the objective is unimodal. Interaction
  // pushes the minimizer above 1, never below the ideal value 1/trap_scale.
  auto f = [&](double lg) { return total_energy(std::exp(lg), N, lambda, trap_scale); };
  double lo = std::log(0.1 / trap_scale);
  double hi = std::log(1.0 / trap_scale) + 1.0;
  while (f(hi) < f(hi - 1e-3)) hi += 1.0;  // expand until ascending at the right end
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-13) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  Tf2dResult out;
  out.gamma_shape = std::exp(0.5 * (a + b));
  out.r0 = std::sqrt(2.0 * std::sqrt(out.gamma_shape * N));
  out.breakdown = tf2d_energy(out.gamma_shape, N, lambda, trap_scale);
  return out;
}

GroundStateResult tf2d_ground_state(const SystemSpec& spec, bool gamma_derivative) {
  spec.validate();
  if (spec.dimension != 2 || spec.alpha != 1)
    throw std::invalid_argument("tf2d_ground_state: 2D Coulomb only");
  Tf2dResult sol = tf2d_minimize(spec.particles, spec.lambda, spec.trap_scale);
  GroundStateResult gs;
  gs.engine = Engine::ThomasFermi;
  gs.energies = sol.breakdown;
  gs.r2 = 2.0 * sol.breakdown.trap / spec.trap_scale;

  // Radial profile of the parabolic ansatz n(r) = (r0^2 - r^2)/(2 pi gamma_TF).
  const int samples = 200;
  gs.density.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = sol.r0 * i / (samples - 1);
    gs.density.emplace_back(r, (sol.r0 * sol.r0 - r * r) /
                                   (2.0 * std::numbers::pi * sol.gamma_shape));
  }

  if (gamma_derivative) {
    auto r2_of = [&](double gamma) {
      Tf2dResult p = tf2d_minimize(spec.particles, spec.lambda, gamma);
      return 2.0 * p.breakdown.trap / gamma;
    };
    gs.r2_dgamma = r2_gamma_derivative(r2_of).value;
  }
  return gs;
}

}  // namespace qbm
