#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbm/hf1d.hpp"
#include "qbm/linalg.hpp"
#include "qbm/sumrules.hpp"
#include "qbm/tf.hpp"

namespace qbm {

namespace {

struct BoxEstimate {
  double halfwidth;
  double peak_density;
};

// Cloud size and peak density from a coarse Thomas-Fermi solve; both feed
// the grid geometry (box and Fermi-wavelength resolution).
BoxEstimate estimate_box(const SystemSpec& spec) {
  const double ideal_r = std::sqrt(2.0 * spec.particles / spec.trap_scale);
  BoxEstimate est{std::max(8.0, 1.15 * ideal_r + 3.0),
                  std::sqrt(2.0 * spec.particles) / std::numbers::pi};
  if (spec.lambda <= 0.0) return est;
  try {
    Tf1dOptions o;
    o.grid_points = 1000;
    o.density_tol = 1e-8;
    GroundStateResult tf = tf1d_ground_state(spec, o, false);
    double r_edge = 0.0, n_peak = 0.0;
    for (const auto& [r, n] : tf.density) {
      if (n > 0.0) r_edge = std::max(r_edge, std::abs(r));
      n_peak = std::max(n_peak, n);
    }
    est.halfwidth = std::max(8.0, 1.15 * r_edge + 3.0);
    est.peak_density = n_peak;
  } catch (const std::exception&) {
    // fall back to the ideal-gas guess scaled by the coupling
    est.halfwidth = std::max(8.0, 1.5 * std::sqrt(2.0 * spec.particles * (1.0 + spec.lambda)));
  }
  return est;
}

}  // namespace

HfState1D hf_solve_1d(const SystemSpec& spec, const Hf1dOptions& opts,
                      const Eigen::MatrixXd* warm_orbitals) {
  spec.validate();
  if (spec.dimension != 1 || spec.alpha != 1)
    throw std::invalid_argument("hf_solve_1d: 1D Coulomb only");
  const int n_occ = spec.particles;

  const BoxEstimate box = estimate_box(spec);
  const double half = opts.box_halfwidth > 0.0 ? opts.box_halfwidth : box.halfwidth;
  double spacing = opts.node_spacing;
  if (spacing <= 0.0) {
    // Resolve both the regularization length and the Fermi oscillations.
    const double k_f = std::numbers::pi * box.peak_density;
    spacing = std::min(0.5 * spec.kappa, 2.2 / std::max(k_f, 1.0));
  }
  const int order = opts.order;
  // The tiny slack keeps a spacing computed as 2*half/(k*(order-1)) from
  // rounding up to k+1 elements through floating-point noise (the frozen-grid
  // gamma-derivative path relies on reproducing the element count exactly).
  const int n_elements =
      std::max(2, static_cast<int>(std::ceil(2.0 * half / (spacing * (order - 1)) - 1e-9)));
  FedvrGrid grid = build_grid(-half, half, n_elements, order);
  const int nb = grid.n_basis();
  if (nb < 2 * n_occ)
    throw std::invalid_argument("hf_solve_1d: grid capacity below particle number");

  Eigen::MatrixXd h0 = kinetic_matrix(grid);
  Eigen::VectorXd x2(nb), trap(nb);
  for (int i = 0; i < nb; ++i) {
    x2(i) = grid.node(i) * grid.node(i);
    trap(i) = 0.5 * spec.trap_scale * x2(i);
  }
  Eigen::MatrixXd t_mat = h0;  // pure kinetic, kept for the energy breakdown
  h0.diagonal() += trap;

  // Pair kernels at node pairs (DVR diagonal approximation).
  Eigen::MatrixXd w_pair(nb, nb), w_virial(nb, nb);
  const double k2 = spec.kappa * spec.kappa;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j <= i; ++j) {
      const double dx = grid.node(i) - grid.node(j);
      const double s2 = dx * dx + k2;
      const double inv = 1.0 / std::sqrt(s2);
      w_pair(i, j) = w_pair(j, i) = inv;
      w_virial(i, j) = w_virial(j, i) = dx * dx * inv / s2;
    }

  // Ideal-orbital subspace; the full basis is the M = nb special case.
  int m_sub = opts.subspace;
  if (m_sub <= 0) m_sub = static_cast<int>(1.6 * n_occ) + 40;
  m_sub = std::min(m_sub, nb);
  auto ideal = sym_eigen(h0);
  Eigen::MatrixXd u = ideal.vectors.leftCols(m_sub);
  Eigen::MatrixXd h0_sub = u.transpose() * h0 * u;
  Eigen::MatrixXd t_sub = u.transpose() * t_mat * u;

  // Occupied orbitals in subspace coordinates.
  Eigen::MatrixXd c_occ;
  if (warm_orbitals) {
    if (warm_orbitals->rows() != nb || warm_orbitals->cols() != n_occ)
      throw std::invalid_argument("hf_solve_1d: warm-start shape mismatch");
    c_occ = u.transpose() * (*warm_orbitals);
    // re-orthonormalize the projected warm start
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(c_occ);
    c_occ = qr.householderQ() * Eigen::MatrixXd::Identity(m_sub, n_occ);
  } else {
    c_occ = Eigen::MatrixXd::Identity(m_sub, n_occ);
  }

  Eigen::MatrixXd phi = u * c_occ;                    // nb x N node orbitals
  Eigen::MatrixXd dmat = phi * phi.transpose();       // node density matrix
  Eigen::VectorXd rho = dmat.diagonal();
  Eigen::VectorXd orbital_energies;
  bool converged = spec.lambda == 0.0;  // ideal start already solves lambda=0
  int iterations = 0;

  for (int it = 0; it < opts.max_iter && !converged; ++it) {
    ++iterations;
    // Fock potential beyond h0: diag(J) - lambda * (w o D), applied to U.
    Eigen::VectorXd j_diag = spec.lambda * (w_pair * rho);
    Eigen::MatrixXd pot_u = j_diag.asDiagonal() * u;
    pot_u.noalias() -= spec.lambda * (w_pair.cwiseProduct(dmat)) * u;
    Eigen::MatrixXd f_sub = h0_sub + u.transpose() * pot_u;

    auto eig = sym_eigen(f_sub);
    c_occ = eig.vectors.leftCols(n_occ);
    orbital_energies = eig.values.head(n_occ);

    phi.noalias() = u * c_occ;
    Eigen::MatrixXd dnew = phi * phi.transpose();
    const double delta = (dnew.diagonal() - rho).cwiseAbs().maxCoeff();
    dmat = (1.0 - opts.mixing) * dmat + opts.mixing * dnew;
    rho = dmat.diagonal();
    if (delta < opts.density_tol) {
      dmat = dnew;  // finish on the pure, idempotent density
      rho = dmat.diagonal();
      converged = true;
    }
  }
  if (!converged)
    throw std::runtime_error("hf_solve_1d: SCF did not converge (increase damping)");
  if (spec.lambda == 0.0) {
    orbital_energies = ideal.values.head(n_occ);
    phi = u.leftCols(n_occ);
    dmat = phi * phi.transpose();
    rho = dmat.diagonal();
  }

  HfState1D out;
  out.orbitals = phi;
  out.orbital_energies = orbital_energies;
  out.gamma = spec.trap_scale;
  out.iterations = iterations;
  out.nodes.resize(nb);
  out.weights.resize(nb);
  out.halfwidth = half;
  for (int i = 0; i < nb; ++i) {
    out.nodes[i] = grid.node(i);
    out.weights[i] = grid.weight(i);
  }

  const double t_e = (phi.transpose() * t_mat * phi).trace();
  const double v_e = trap.dot(rho);
  const double hartree = rho.dot(w_pair * rho);
  const double exch = w_pair.cwiseProduct(dmat).cwiseProduct(dmat).sum();
  const double w_e = 0.5 * spec.lambda * (hartree - exch);
  out.breakdown = EnergyBreakdown::from_parts(t_e, v_e, w_e);
  out.r2 = x2.dot(rho);
  const double hartree_v = rho.dot(w_virial * rho);
  const double exch_v = w_virial.cwiseProduct(dmat).cwiseProduct(dmat).sum();
  out.interaction_virial = 0.5 * spec.lambda * (hartree_v - exch_v);
  return out;
}

GroundStateResult hf1d_ground_state(const SystemSpec& spec, const Hf1dOptions& opts) {
  HfState1D sol = hf_solve_1d(spec, opts);
  GroundStateResult gs;
  gs.engine = Engine::HartreeFock;
  gs.energies = sol.breakdown;
  gs.r2 = sol.r2;
  gs.density.reserve(sol.nodes.size());
  // physical density n(x_a) = rho_a / w_a (the DVR coefficients carry the
  // square-root quadrature weight)
  {
    const int nb = static_cast<int>(sol.nodes.size());
    for (int i = 0; i < nb; ++i) {
      double rho_i = 0.0;
      for (int k = 0; k < sol.orbitals.cols(); ++k)
        rho_i += sol.orbitals(i, k) * sol.orbitals(i, k);
      gs.density.emplace_back(sol.nodes[i], rho_i / sol.weights[i]);
    }
  }

  if (opts.gamma_derivative) {
    Hf1dOptions o = opts;
    o.gamma_derivative = false;
    // Freeze the geometry chosen at gamma = 1 so the basis is identical for
    // all stencil points; the warm start keeps the shifted solves short.
    o.box_halfwidth = sol.halfwidth;
    o.node_spacing = 2.0 * sol.halfwidth / (sol.nodes.size() + 1.0);
    auto r2_of = [&](double gamma) {
      SystemSpec s = spec;
      s.trap_scale = gamma;
      return hf_solve_1d(s, o, &sol.orbitals).r2;
    };
    gs.r2_dgamma = r2_gamma_derivative(r2_of).value;
  }
  return gs;
}

}  // namespace qbm
