#ifndef QBM_SUMRULES_HPP
#define QBM_SUMRULES_HPP

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qbm/model.hpp"

// Energy-weighted moments m_k of the monopole operator r^2 and the sum-rule
// frequency estimators sr(3,1) and sr(1,-1). Corrected moments m*_k have the
// analytic center-of-mass contribution 2^{k-1} d removed, which restores the
// upper-bound property of the estimators for omega_rel.

namespace qbm {

struct MomentSet {
  std::optional<double> m_minus1;  // absent when no gamma-derivative is known
  double m1 = 0.0;
  double m3 = 0.0;
  bool corrected = false;
  int dimension = 1;
};

enum class SumRuleVariant { Conventional, Improved };

struct FrequencyEstimate {
  double sr31 = 0.0;
  std::optional<double> sr1m1;
  SumRuleVariant variant = SumRuleVariant::Improved;
  Engine engine = Engine::HartreeFock;
};

// Raw moments from ground-state observables:
//   m1 = 2 <r^2>,  m3 = 8<T> + 8<V> + 2 alpha^2 <W>,  m_-1 = -d<r^2>/dgamma.
MomentSet moments_from_ground_state(const GroundStateResult& gs, const SystemSpec& spec);

// m*_k = m_k - 2^{k-1} d. Throws std::domain_error if any corrected moment
// would be non-positive (system too small/ideal for the correction).
MomentSet correct_moments(const MomentSet& ms, int d);

// sr(3,1) = {(2+alpha) + (2-alpha) <T>/<V>}^{1/2}.
double sr31_from_energies(const EnergyBreakdown& e, int alpha);

// sr(3,1) = sqrt(m3/m1) for (k,l) = (3,1); sr(1,-1) = sqrt(m1/m_-1) for
// (k,l) = (1,-1). Other pairs are unsupported.
double sr_ratio(const MomentSet& ms, int k, int l);

// Direct moment sum over a spectrum: lines carry the excitation energy
// E_i - E_0 (> 0) and the monopole matrix element <0|Q|i> (not squared),
// ground state excluded. Rejects excitation gaps below 1e-12 for k < 0.
struct SpectrumLine {
  double excitation;
  double element;
};
double moment_from_spectrum(const std::vector<SpectrumLine>& lines, int k);

// d<r^2>/dgamma at gamma = 1 by a central difference with step eps plus a
// Richardson step at eps/2; r2_of_gamma re-solves the ground state at the
// scaled trap. The error estimate is the difference of the two stencils.
struct GammaDerivative {
  double value = 0.0;
  double error_estimate = 0.0;
};
GammaDerivative r2_gamma_derivative(const std::function<double(double)>& r2_of_gamma,
                                    double eps = 1e-3);

}  // namespace qbm

#endif
