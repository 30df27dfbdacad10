#include "qbm/sumrules.hpp"

#include <cmath>
#include <stdexcept>

namespace qbm {

MomentSet moments_from_ground_state(const GroundStateResult& gs, const SystemSpec& spec) {
  if (gs.r2 <= 0.0)
    throw std::invalid_argument("moments_from_ground_state: <r^2> must be > 0");
  MomentSet ms;
  ms.dimension = spec.dimension;
  ms.m1 = 2.0 * gs.r2;
  ms.m3 = 8.0 * gs.energies.kinetic + 8.0 * gs.energies.trap +
          2.0 * spec.alpha * spec.alpha * gs.energies.interaction;
  if (gs.r2_dgamma) {
    if (*gs.r2_dgamma >= 0.0)
      throw std::invalid_argument("moments_from_ground_state: d<r^2>/dgamma must be < 0");
    ms.m_minus1 = -*gs.r2_dgamma;
  }
  return ms;
}

MomentSet correct_moments(const MomentSet& ms, int d) {
  if (ms.corrected)
    throw std::invalid_argument("correct_moments: moments already corrected");
  MomentSet out = ms;
  out.dimension = d;
  out.corrected = true;
  out.m1 = ms.m1 - d;          // 2^{0} d
  out.m3 = ms.m3 - 4.0 * d;    // 2^{2} d
  if (ms.m_minus1) out.m_minus1 = *ms.m_minus1 - 0.25 * d;  // 2^{-2} d
  if (out.m1 <= 0.0 || out.m3 <= 0.0 || (out.m_minus1 && *out.m_minus1 <= 0.0))
    throw std::domain_error(
        "correct_moments: corrected moment non-positive (system is pure center of mass)");
  return out;
}

double sr31_from_energies(const EnergyBreakdown& e, int alpha) {
  if (e.trap <= 0.0) throw std::domain_error("sr31_from_energies: trap energy must be > 0");
  return std::sqrt((2.0 + alpha) + (2.0 - alpha) * e.kinetic / e.trap);
}

double sr_ratio(const MomentSet& ms, int k, int l) {
  if (k == 3 && l == 1) {
    if (ms.m1 <= 0.0 || ms.m3 <= 0.0)
      throw std::domain_error("sr_ratio: non-positive moment");
    return std::sqrt(ms.m3 / ms.m1);
  }
  if (k == 1 && l == -1) {
    if (!ms.m_minus1)
      throw std::domain_error("sr_ratio: m_-1 unavailable");
    if (ms.m1 <= 0.0 || *ms.m_minus1 <= 0.0)
      throw std::domain_error("sr_ratio: non-positive moment");
    return std::sqrt(ms.m1 / *ms.m_minus1);
  }
  throw std::invalid_argument("sr_ratio: only sr(3,1) and sr(1,-1) are supported");
}

double moment_from_spectrum(const std::vector<SpectrumLine>& lines, int k) {
  if (lines.empty())
    throw std::invalid_argument("moment_from_spectrum: empty spectrum");
  double m = 0.0;
  for (const auto& line : lines) {
    if (line.excitation < 0.0)
      throw std::invalid_argument("moment_from_spectrum: negative excitation energy");
    const double w = line.element * line.element;
    if (w == 0.0) continue;
    if (k < 0 && line.excitation < 1e-12)
      throw std::domain_error("moment_from_spectrum: near-zero gap with nonzero weight");
    m += std::pow(line.excitation, k) * w;
  }
  return m;
}

GammaDerivative r2_gamma_derivative(const std::function<double(double)>& r2_of_gamma,
                                    double eps) {
  if (!(eps >= 1e-4 && eps <= 1e-2))
    throw std::invalid_argument("r2_gamma_derivative: eps must lie in [1e-4, 1e-2]");
  auto stencil = [&](double h) {
    return (r2_of_gamma(1.0 + h) - r2_of_gamma(1.0 - h)) / (2.0 * h);
  };
  const double d1 = stencil(eps);
  const double d2 = stencil(0.5 * eps);
  GammaDerivative out;
  out.value = (4.0 * d2 - d1) / 3.0;  // Richardson on the O(h^2) stencil
  out.error_estimate = std::abs(d2 - d1);
  return out;
}

}  // namespace qbm
