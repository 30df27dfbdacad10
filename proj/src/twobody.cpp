#include "qbm/twobody.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "qbm/fedvr.hpp"
#include "qbm/linalg.hpp"

namespace qbm {

namespace {

double rho_max_for(double lambda) {
  // Classical two-body separation (2 lambda)^{1/3} kept deeply interior.
  return std::max(8.0, 4.0 * std::cbrt(2.0 * std::max(lambda, 0.0)) + 8.0);
}

struct SolveResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // interior-basis coefficients
  FedvrGrid grid;
};

SolveResult solve_radial(const SystemSpec& spec, int l, int n_states, int n_elements,
                         int order) {
  const double rho_max = rho_max_for(spec.lambda);
  const double lam_scaled = spec.lambda / std::pow(2.0, 0.5 * spec.alpha);
  FedvrGrid grid = [&] {
    if (spec.alpha <= 1) return build_grid(0.0, rho_max, n_elements, order);
    // The rho^-3 core is far stiffer than Coulomb: grade the elements toward
    // the origin. The grading power is capped so the potential at the first
    // interior node stays below ~1e6; pushing nodes deeper inflates the
    // matrix norm until the O(1) eigenvalues drown in roundoff.
    const double rho_floor = std::cbrt(lam_scaled / 1e6);
    double p = 2.0;
    if (rho_floor > 0.0 && n_elements > 1) {
      const double p_cap = std::log(rho_floor / rho_max) / std::log(1.0 / n_elements);
      if (p_cap > 1.0 && p_cap < p) p = p_cap;
    }
    std::vector<double> bounds(n_elements + 1);
    for (int e = 0; e <= n_elements; ++e) {
      const double t = static_cast<double>(e) / n_elements;
      bounds[e] = rho_max * std::pow(t, p);
    }
    return build_grid(bounds, order);
  }();
  const double centrifugal = [&] {
    const double nu = l + 0.5 * (spec.dimension - 2);
    return nu * nu - 0.25;
  }();
  Eigen::MatrixXd h = kinetic_matrix(grid);
  h.diagonal() += diagonal_potential(grid, [&](double rho) {
    double v = 0.5 * spec.trap_scale * rho * rho;
    if (centrifugal != 0.0) v += 0.5 * centrifugal / (rho * rho);
    if (lam_scaled != 0.0) v += lam_scaled / std::pow(rho, spec.alpha);
    return v;
  });
  auto eig = sym_eigen(h);
  SolveResult out;
  const int n = std::min<int>(n_states, static_cast<int>(eig.values.size()));
  out.values = eig.values.head(n);
  out.vectors = eig.vectors.leftCols(n);
  out.grid = std::move(grid);
  return out;
}

}  // namespace

RelativeSpectrum relative_spectrum(const SystemSpec& spec, int l, int n_states,
                                   const TwoBodyOptions& opts) {
  spec.validate();
  if (spec.particles != 2)
    throw std::invalid_argument("relative_spectrum: exact engine requires N = 2");
  if (l != 0)
    throw std::invalid_argument("relative_spectrum: only the l = 0 monopole sector is supported");
  if (n_states < 10)
    throw std::invalid_argument("relative_spectrum: need n_states >= 10");

  int n_elements = opts.n_elements;
  int order = opts.order;
  SolveResult cur = solve_radial(spec, l, n_states + 2, n_elements, order);
  bool converged = false;
  for (int r = 0; r < opts.max_refinements; ++r) {
    SolveResult next = solve_radial(spec, l, n_states + 2, n_elements * 3 / 2 + 1, order);
    const int m = std::min<int>(4, static_cast<int>(cur.values.size()));
    double delta = 0.0;
    for (int i = 0; i < m; ++i) delta = std::max(delta, std::abs(next.values(i) - cur.values(i)));
    n_elements = n_elements * 3 / 2 + 1;
    cur = std::move(next);
    if (delta < opts.refine_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw std::runtime_error("relative_spectrum: grid refinement did not converge");

  RelativeSpectrum rs;
  rs.l = l;
  rs.d = spec.dimension;
  rs.alpha = spec.alpha;
  rs.lambda = spec.lambda;
  const int n = std::min<int>(n_states, static_cast<int>(cur.values.size()));
  rs.eigenvalues.assign(cur.values.data(), cur.values.data() + n);

  // <0|rho^2|i> with the diagonal DVR representation of rho^2.
  const int nb = cur.grid.n_basis();
  Eigen::VectorXd rho2(nb);
  for (int i = 0; i < nb; ++i) rho2(i) = cur.grid.node(i) * cur.grid.node(i);
  const Eigen::VectorXd u0 = cur.vectors.col(0);
  rs.monopole_elements.resize(n);
  for (int i = 0; i < n; ++i)
    rs.monopole_elements[i] = u0.cwiseProduct(rho2).dot(cur.vectors.col(i));

  rs.rho_samples.resize(nb);
  rs.u0_samples.resize(nb);
  rs.u1_samples.resize(nb);
  for (int i = 0; i < nb; ++i) {
    rs.rho_samples[i] = cur.grid.node(i);
    // u(rho) = c_i / sqrt(w_i) at the node
    const double s = 1.0 / std::sqrt(cur.grid.weight(i));
    rs.u0_samples[i] = cur.vectors(i, 0) * s;
    rs.u1_samples[i] = (cur.vectors.cols() > 1 ? cur.vectors(i, 1) * s : 0.0);
  }
  return rs;
}

double exact_breathing_frequency(const RelativeSpectrum& rs) {
  if (rs.eigenvalues.size() < 2)
    throw std::invalid_argument("exact_breathing_frequency: need >= 2 states");
  const double m1_star = relative_moment(rs, 1);
  const double threshold = 1e-10 * m1_star;
  for (std::size_t i = 1; i < rs.eigenvalues.size(); ++i) {
    const double w = rs.monopole_elements[i] * rs.monopole_elements[i];
    if (w > threshold) return rs.eigenvalues[i] - rs.eigenvalues[0];
  }
  throw std::runtime_error("exact_breathing_frequency: no state passes the weight filter");
}

double relative_moment(const RelativeSpectrum& rs, int k) {
  std::vector<SpectrumLine> lines;
  lines.reserve(rs.eigenvalues.size() - 1);
  for (std::size_t i = 1; i < rs.eigenvalues.size(); ++i)
    lines.push_back({rs.eigenvalues[i] - rs.eigenvalues[0], rs.monopole_elements[i]});
  return moment_from_spectrum(lines, k);
}

double full_moment(const RelativeSpectrum& rs, int d, int k) {
  return relative_moment(rs, k) + std::pow(2.0, k - 1) * d;
}

MomentSet moments_from_relative_spectrum(const RelativeSpectrum& rs, bool corrected) {
  MomentSet ms;
  ms.dimension = rs.d;
  ms.corrected = corrected;
  if (corrected) {
    ms.m1 = relative_moment(rs, 1);
    ms.m3 = relative_moment(rs, 3);
    ms.m_minus1 = relative_moment(rs, -1);
  } else {
    ms.m1 = full_moment(rs, rs.d, 1);
    ms.m3 = full_moment(rs, rs.d, 3);
    ms.m_minus1 = full_moment(rs, rs.d, -1);
  }
  return ms;
}

void dump_radial_wavefunctions(const RelativeSpectrum& rs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_radial_wavefunctions: cannot open " + path);
  out << "rho,u0,u1\n";
  for (std::size_t i = 0; i < rs.rho_samples.size(); ++i)
    out << rs.rho_samples[i] << ',' << rs.u0_samples[i] << ',' << rs.u1_samples[i] << '\n';
}

}  // namespace qbm
