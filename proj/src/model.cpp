#include "qbm/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qbm {

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::TwoBodyExact: return "twobody";
    case Engine::HartreeFock: return "hf";
    case Engine::ThomasFermi: return "tf";
    case Engine::Classical: return "classical";
  }
  return "?";
}

void SystemSpec::validate() const {
  if (dimension != 1 && dimension != 2)
    throw std::invalid_argument("SystemSpec: dimension must be 1 or 2");
  if (particles < 1)
    throw std::invalid_argument("SystemSpec: particles must be >= 1");
  if (alpha != 1 && alpha != 3)
    throw std::invalid_argument("SystemSpec: alpha must be 1 or 3");
  if (lambda < 0.0)
    throw std::invalid_argument("SystemSpec: lambda must be >= 0");
  if (kappa < 0.0)
    throw std::invalid_argument("SystemSpec: kappa must be >= 0");
  if (trap_scale <= 0.0)
    throw std::invalid_argument("SystemSpec: trap_scale must be > 0");
  if (dimension == 1 && spin_policy != SpinPolicy::Polarized1D)
    throw std::invalid_argument("SystemSpec: 1D systems are spin-polarized");
  if (dimension == 2 && spin_policy != SpinPolicy::Hund2D)
    throw std::invalid_argument("SystemSpec: 2D systems use Hund occupation");
  if (dimension == 1 && alpha == 1 && kappa <= 0.0)
    throw std::invalid_argument("SystemSpec: 1D Coulomb requires kappa > 0");
  if (dimension == 2 && kappa != 0.0)
    throw std::invalid_argument("SystemSpec: kappa must be 0 in 2D");
}

SystemSpec SystemSpec::make_1d(int particles, double lambda, int alpha, double kappa) {
  SystemSpec s;
  s.dimension = 1;
  s.particles = particles;
  s.alpha = alpha;
  s.lambda = lambda;
  s.kappa = kappa;
  s.spin_policy = SpinPolicy::Polarized1D;
  return s;
}

SystemSpec SystemSpec::make_2d(int particles, double lambda) {
  SystemSpec s;
  s.dimension = 2;
  s.particles = particles;
  s.alpha = 1;
  s.lambda = lambda;
  s.kappa = 0.0;
  s.spin_policy = SpinPolicy::Hund2D;
  return s;
}

EnergyBreakdown EnergyBreakdown::from_parts(double kinetic, double trap, double interaction) {
  return EnergyBreakdown{kinetic, trap, interaction, kinetic + trap + interaction};
}

std::pair<double, double> frequency_window(int alpha) {
  if (alpha == 1) return {std::sqrt(3.0), 2.0};
  if (alpha == 3) return {2.0, std::sqrt(5.0)};
  throw std::invalid_argument("frequency_window: unsupported alpha " + std::to_string(alpha));
}

double virial_residual(const EnergyBreakdown& e, int alpha) {
  const double lhs = 2.0 * e.kinetic - 2.0 * e.trap + alpha * e.interaction;
  return std::abs(lhs) / std::max(e.total, 1.0);
}

double sigma_ideal(int d, int N) {
  if (N < 1) throw std::invalid_argument("sigma_ideal: N must be >= 1");
  if (d == 1) return N / std::sqrt(2.0);
  if (d == 2) return std::sqrt(2.0 / 3.0) * std::pow(N, 0.75);
  throw std::invalid_argument("sigma_ideal: unsupported dimension");
}

double localization_chi(int d, int N, const EnergyBreakdown& e) {
  if (e.trap <= 0.0) throw std::domain_error("localization_chi: trap energy must be > 0");
  return sigma_ideal(d, N) / std::sqrt(2.0 * e.trap);
}

double ideal_energy(int d, int N) {
  if (N < 1) throw std::invalid_argument("ideal_energy: N must be >= 1");
  if (d == 1) return 0.5 * static_cast<double>(N) * N;
  if (d == 2) return (2.0 / 3.0) * std::pow(N, 1.5);
  throw std::invalid_argument("ideal_energy: unsupported dimension");
}

double classical_energy_constant_2d() {
  static const double k = [] {
    const double a = 256.0 * std::sqrt(2.0) / (315.0 * std::numbers::pi);
    const double b = 512.0 * std::sqrt(2.0) / (315.0 * std::numbers::pi);
    const double c = 256.0 * std::sqrt(2.0) / (105.0 * std::numbers::pi);
    return std::pow(a, 2.0 / 3.0) + b * std::pow(c, -1.0 / 3.0);
  }();
  return k;
}

double classical_energy_estimate(int d, int N, double lambda) {
  if (lambda <= 0.0)
    throw std::invalid_argument("classical_energy_estimate: lambda must be > 0");
  if (d == 2) {
    if (N < 1) throw std::invalid_argument("classical_energy_estimate: N must be >= 1");
    return classical_energy_constant_2d() * std::pow(lambda, 2.0 / 3.0) * std::pow(N, 5.0 / 3.0);
  }
  if (d == 1) {
    if (N < 2) throw std::domain_error("classical_energy_estimate: 1D requires N >= 2");
    return 0.3 * std::pow(3.0 * lambda * N * std::log(static_cast<double>(N)), 2.0 / 3.0) * N;
  }
  throw std::invalid_argument("classical_energy_estimate: unsupported dimension");
}

double lambda_tilde(int d, int N) {
  if (d == 2) {
    if (N < 1) throw std::invalid_argument("lambda_tilde: N must be >= 1");
    return std::pow(2.0 / (3.0 * classical_energy_constant_2d()), 1.5) * std::pow(N, -0.25);
  }
  if (d == 1) {
    if (N < 2) throw std::domain_error("lambda_tilde: 1D requires N >= 2");
    return (1.0 / 3.0) * std::pow(5.0 / 3.0, 1.5) * std::sqrt(static_cast<double>(N)) /
           std::log(static_cast<double>(N));
  }
  throw std::invalid_argument("lambda_tilde: unsupported dimension");
}

}  // namespace qbm
