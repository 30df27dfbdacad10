#include "qbm/fedvr.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbm {

namespace {

// Legendre P_n and P_n' at x by upward recurrence.
void legendre(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (n == 0) {
    p = p0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  if (x * x == 1.0)
    dp = (x > 0 ? 1.0 : std::pow(-1.0, n - 1)) * 0.5 * n * (n + 1);
  else
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

// Lagrange differentiation matrix at the given points: D(k, l) = L_l'(x_k).
Eigen::MatrixXd diff_matrix(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> c(n, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) c[i] *= x[i] - x[j];
  Eigen::MatrixXd d(n, n);
  for (int k = 0; k < n; ++k) {
    double diag = 0.0;
    for (int l = 0; l < n; ++l) {
      if (l == k) continue;
      d(k, l) = c[k] / (c[l] * (x[k] - x[l]));
      diag += 1.0 / (x[k] - x[l]);
    }
    d(k, k) = diag;
  }
  return d;
}

}  // namespace

void gauss_lobatto(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 2) throw std::invalid_argument("gauss_lobatto: order must be >= 2");
  const int n = order - 1;  // interior nodes are roots of P_n'
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  nodes.front() = -1.0;
  nodes.back() = 1.0;
  for (int k = 1; k < n; ++k) {
    // Interlacing initial guess between Chebyshev-like points.
    double x = std::cos(std::numbers::pi * (n - k) / n);
    for (int it = 0; it < 100; ++it) {
      double p, dp;
      legendre(n, x, p, dp);
      // Newton on P_n'(x); P_n'' from the Legendre ODE.
      const double d2p = (2.0 * x * dp - n * (n + 1) * p) / (1.0 - x * x);
      const double step = dp / d2p;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    nodes[k] = x;
  }
  for (int k = 0; k < order; ++k) {
    double p, dp;
    legendre(n, nodes[k], p, dp);
    weights[k] = 2.0 / (n * (n + 1) * p * p);
  }
}

FedvrGrid build_grid(double a, double b, int n_elements, int order) {
  if (!(a < b)) throw std::invalid_argument("build_grid: need a < b");
  if (n_elements < 1) throw std::invalid_argument("build_grid: need n_elements >= 1");
  std::vector<double> boundaries(n_elements + 1);
  for (int e = 0; e <= n_elements; ++e) boundaries[e] = a + (b - a) * e / n_elements;
  return build_grid(boundaries, order);
}

FedvrGrid build_grid(const std::vector<double>& boundaries, int order) {
  if (boundaries.size() < 2) throw std::invalid_argument("build_grid: need >= 2 boundaries");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i] > boundaries[i - 1]))
      throw std::invalid_argument("build_grid: boundaries must be strictly ascending");
  if (order < 3) throw std::invalid_argument("build_grid: need order >= 3");
  const int n_elements = static_cast<int>(boundaries.size()) - 1;

  FedvrGrid g;
  g.a = boundaries.front();
  g.b = boundaries.back();
  g.order = order;
  g.element_boundaries = boundaries;

  std::vector<double> ref_nodes, ref_weights;
  gauss_lobatto(order, ref_nodes, ref_weights);

  g.nodes.reserve(n_elements * (order - 1) + 1);
  g.weights.reserve(g.nodes.capacity());
  for (int e = 0; e < n_elements; ++e) {
    const double x0 = g.element_boundaries[e];
    const double x1 = g.element_boundaries[e + 1];
    const double mid = 0.5 * (x0 + x1);
    const double half = 0.5 * (x1 - x0);
    for (int k = 0; k < order; ++k) {
      const double x = mid + half * ref_nodes[k];
      const double w = half * ref_weights[k];
      if (k == 0 && e > 0) {
        g.weights.back() += w;  // bridge: shared boundary node, summed weight
      } else {
        g.nodes.push_back(x);
        g.weights.push_back(w);
      }
    }
  }
  return g;
}

double FedvrGrid::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
  return s;
}

Eigen::MatrixXd kinetic_matrix(const FedvrGrid& grid) {
  const int nb = grid.n_basis();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(nb, nb);

  std::vector<double> ref_nodes, ref_weights;
  gauss_lobatto(grid.order, ref_nodes, ref_weights);
  const Eigen::MatrixXd dref = diff_matrix(ref_nodes);

  const int order = grid.order;
  for (int e = 0; e < grid.n_elements(); ++e) {
    const double h = grid.element_boundaries[e + 1] - grid.element_boundaries[e];
    const double jac = 2.0 / h;  // d(xi)/dx
    const int base = e * (order - 1);  // global node index of the element's left end
    for (int a = 0; a < order; ++a) {
      const int ga = base + a - 1;  // interior basis index
      if (ga < 0 || ga >= nb) continue;
      for (int b = a; b < order; ++b) {
        const int gb = base + b - 1;
        if (gb < 0 || gb >= nb) continue;
        double s = 0.0;
        for (int k = 0; k < order; ++k)
          s += ref_weights[k] * dref(k, a) * dref(k, b);
        // weak-form (1/2) int u_a' u_b'; jacobians: (h/2) from dx, (2/h)^2 from d/dx
        const double val = 0.5 * s * jac / std::sqrt(grid.weight(ga) * grid.weight(gb));
        t(ga, gb) += val;
        if (ga != gb) t(gb, ga) += val;
      }
    }
  }
  return t;
}

Eigen::VectorXd diagonal_potential(const FedvrGrid& grid,
                                   const std::function<double(double)>& f) {
  const int nb = grid.n_basis();
  Eigen::VectorXd v(nb);
  for (int i = 0; i < nb; ++i) {
    const double val = f(grid.node(i));
    if (!std::isfinite(val))
      throw std::domain_error("diagonal_potential: non-finite value at node");
    v(i) = val;
  }
  return v;
}

}  // namespace qbm
