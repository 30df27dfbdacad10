#ifndef QBM_SCAN_HPP
#define QBM_SCAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "qbm/model.hpp"

// (lambda, N)-plane sweeps. Each cell is solved by exactly one engine chosen
// by the plan's policy (Hartree-Fock at small N, Thomas-Fermi at large N when
// stitched), and carries the improved sum-rule frequencies plus the
// localization parameter chi. Failed cells are flagged, never interpolated.

namespace qbm {

enum class EnginePolicy { Stitched, HartreeFockOnly, ThomasFermiOnly };

struct ScanPlan {
  int dimension = 1;
  std::vector<double> lambdas;  // ascending, > 0
  std::vector<int> particles;   // ascending, >= 2
  EnginePolicy policy = EnginePolicy::Stitched;
  int stitch_boundary = 100;  // Hartree-Fock for N <= boundary when stitched
  bool sr1m1 = true;          // compute m_-1 (gamma derivative) on HF cells
  unsigned long long seed = 1234;
  int threads = 0;  // worker count; 0 -> hardware concurrency
};

struct ScanCell {
  double lambda = 0.0;
  int particles = 0;
  Engine engine = Engine::HartreeFock;
  bool converged = false;
  double omega_sr31_star = 0.0;
  std::optional<double> omega_sr1m1_star;
  double chi = 0.0;
  double energy = 0.0;
  std::string error;  // empty when converged
};

struct ScanTable {
  ScanPlan plan;
  std::vector<ScanCell> cells;  // lambda-major: cells[il * n_particles + in]
  int failed = 0;
  std::string version;

  const ScanCell& at(std::size_t il, std::size_t in) const;
  void write_csv(const std::string& path) const;
  void write_json(const std::string& path) const;
};

// Populates the whole table; throws std::runtime_error when more than 10% of
// the cells fail (individual failures are flagged in place).
ScanTable run_scan(const ScanPlan& plan);

struct ContourPoint {
  double lambda = 0.0;
  double particles = 0.0;  // interpolated, hence real-valued
};

// Iso-line of a cell field ("omega" = improved sr(3,1), "chi") at the given
// value, by monotone log-interpolation along the lambda grid lines of each N
// row. Values outside the field range give an empty list.
std::vector<ContourPoint> iso_contour(const ScanTable& table, const std::string& field,
                                      double value);

struct ContourFit {
  double prefactor = 0.0;  // A in N = A lambda^p
  double exponent = 0.0;   // p
  double exponent_stderr = 0.0;
  double residual = 0.0;  // rms log-space misfit
};

// Least-squares power law N = A lambda^p through >= 5 positive points.
ContourFit fit_power_law(const std::vector<ContourPoint>& points);

}  // namespace qbm

#endif
