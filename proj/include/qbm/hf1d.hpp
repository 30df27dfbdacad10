#ifndef QBM_HF1D_HPP
#define QBM_HF1D_HPP

#include <Eigen/Dense>

#include "qbm/fedvr.hpp"
#include "qbm/model.hpp"

// 1D spin-polarized Hartree-Fock in the FEDVR basis with the kappa-regularized
// Coulomb kernel. Two-body integrals use the DVR diagonal approximation, so
// the direct term is a diagonal built from the node density and the exchange
// term is the elementwise product of the pair kernel with the density matrix.
// Large N runs in the subspace spanned by the lowest ideal-trap orbitals.

namespace qbm {

struct Hf1dOptions {
  double node_spacing = 0.05;  // target mean DVR spacing; 0 -> automatic
  int order = 8;               // FEDVR points per element
  double box_halfwidth = 0.0;  // 0 -> from a coarse Thomas-Fermi solve
  double mixing = 0.3;         // linear density-matrix mixing
  double density_tol = 1e-9;   // sup-norm node-density change
  int max_iter = 500;
  int subspace = 0;            // ideal-orbital subspace size; 0 -> automatic
  bool gamma_derivative = true;
};

struct HfState1D {
  Eigen::MatrixXd orbitals;  // DVR coefficients, one column per occupied orbital
  Eigen::VectorXd orbital_energies;
  std::vector<double> nodes;    // interior DVR nodes of the grid used
  std::vector<double> weights;  // matching quadrature weights
  double halfwidth = 0.0;       // box half-width actually used
  EnergyBreakdown breakdown;
  double gamma = 1.0;
  double r2 = 0.0;
  double interaction_virial = 0.0;  // kappa-corrected virial form of <W>
  int iterations = 0;
};

HfState1D hf_solve_1d(const SystemSpec& spec, const Hf1dOptions& opts = {},
                      const Eigen::MatrixXd* warm_orbitals = nullptr);

GroundStateResult hf1d_ground_state(const SystemSpec& spec, const Hf1dOptions& opts = {});

}  // namespace qbm

#endif
