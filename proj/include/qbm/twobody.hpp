#ifndef QBM_TWOBODY_HPP
#define QBM_TWOBODY_HPP

#include <string>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/sumrules.hpp"

// Exact N = 2 engine: diagonalizes the hyperspherical relative radial
// equation
//   -(1/2) u'' + [rho^2/2 + ((l+(d-2)/2)^2 - 1/4)/(2 rho^2)
//                 + lambda/(2^{alpha/2} rho^alpha)] u = E u
// on (0, rho_max) with Dirichlet ends, and reconstructs full monopole
// moments by adding the analytic center-of-mass contribution 2^{k-1} d.

namespace qbm {

struct RelativeSpectrum {
  std::vector<double> eigenvalues;        // ascending E_rel,i
  std::vector<double> monopole_elements;  // <0|rho^2|i> for i = 0..n-1
  int l = 0;
  int d = 1;
  int alpha = 1;
  double lambda = 0.0;
  // Ground and first monopole-coupled radial functions sampled at the nodes
  // (for CSV export).
  std::vector<double> rho_samples, u0_samples, u1_samples;
};

struct TwoBodyOptions {
  int n_elements = 16;
  int order = 10;
  double refine_tol = 1e-8;  // refinement stops when the target levels move less
  int max_refinements = 6;
};

RelativeSpectrum relative_spectrum(const SystemSpec& spec, int l = 0, int n_states = 50,
                                   const TwoBodyOptions& opts = {});

// Smallest relative excitation carrying monopole weight.
double exact_breathing_frequency(const RelativeSpectrum& rs);

// Relative-only moment sum over the computed states (excitations from the
// relative ground state).
double relative_moment(const RelativeSpectrum& rs, int k);

// Full moment m_k = relative sum + 2^{k-1} d (analytic CM spectrum).
double full_moment(const RelativeSpectrum& rs, int d, int k);

// Raw and corrected moment sets assembled from the spectrum.
MomentSet moments_from_relative_spectrum(const RelativeSpectrum& rs, bool corrected);

void dump_radial_wavefunctions(const RelativeSpectrum& rs, const std::string& path);

}  // namespace qbm

#endif
