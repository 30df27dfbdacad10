#ifndef QBM_HF2D_HPP
#define QBM_HF2D_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "qbm/model.hpp"

// 2D Hartree-Fock in the circular harmonic-oscillator (Fock-Darwin) basis.
// Orbitals are labeled by circular quanta (p, q): energy p + q + 1, angular
// momentum m = p - q. Coulomb matrix elements come from the exact
// center-of-mass / relative transform of product states; the relative radial
// integrals are generalized Gauss-Laguerre quadratures. The SCF is
// restricted-open-shell with a Hund's-rule reference occupation fixed at
// lambda = 0, and the Fock matrix stays block-diagonal in m throughout.

namespace qbm {

struct OrbitalLabel {
  int p = 0, q = 0;                // circular ladder quanta
  int shell() const { return p + q; }
  int m() const { return p - q; }
};

struct SpinOccupation {
  int orbital = 0;  // index into the basis list
  int spin = 0;     // 0 = up, 1 = down
};

// Immutable per-cutoff basis tables (labels, one-body blocks, Coulomb
// tensor); built once and shared across (N, lambda, gamma) solves.
class Hf2dBasis {
 public:
  explicit Hf2dBasis(int shell_cutoff);  // states with p + q <= shell_cutoff - 1

  int shell_cutoff() const { return s_; }
  const std::vector<OrbitalLabel>& labels() const { return labels_; }
  int n_orbitals() const { return static_cast<int>(labels_.size()); }

  // <a| rho^2 |b> (same m, zero otherwise) and <ab| 1/|r1-r2| |cd>.
  double rho2(int a, int b) const;
  double coulomb(int a, int b, int c, int d) const;
  // Non-zero m-conserving Coulomb entries, for the SCF contraction loop.
  struct CoulombEntry {
    int a, b, c, d;
    double value;
  };
  const std::vector<CoulombEntry>& coulomb_entries() const { return entries_; }

 private:
  int s_;
  std::vector<OrbitalLabel> labels_;
  Eigen::MatrixXd rho2_;
  std::vector<CoulombEntry> entries_;
};

// Shared cache so scans over (N, lambda) reuse the tensor.
std::shared_ptr<const Hf2dBasis> hf2d_basis(int shell_cutoff);

// Hund's-rule reference occupation for N particles (throws if the cutoff
// cannot hold N).
std::vector<SpinOccupation> hund_occupation(int N, const Hf2dBasis& basis);

struct Hf2dOptions {
  int shell_cutoff = 0;  // 0 -> automatic
  double mixing = 0.3;
  double density_tol = 1e-9;
  int max_iter = 500;
  bool gamma_derivative = true;
};

struct HfState2D {
  std::vector<SpinOccupation> occupation;
  Eigen::MatrixXd density_up, density_down;  // over the orbital basis
  EnergyBreakdown breakdown;
  double gamma = 1.0;
  double r2 = 0.0;
  int iterations = 0;
  int shell_cutoff = 0;
};

HfState2D hf_solve_2d(const SystemSpec& spec, const Hf2dOptions& opts = {},
                      const HfState2D* warm = nullptr);

GroundStateResult hf2d_ground_state(const SystemSpec& spec, const Hf2dOptions& opts = {});

}  // namespace qbm

#endif
