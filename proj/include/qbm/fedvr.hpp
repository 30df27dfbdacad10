#ifndef QBM_FEDVR_HPP
#define QBM_FEDVR_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

// Finite-element discrete variable representation on Gauss-Lobatto nodes
// with bridge functions at element boundaries. Basis functions are the
// weight-normalized Lagrange cardinal functions of the interior nodes
// (Dirichlet conditions at both domain endpoints); local potentials are
// diagonal and the kinetic operator is assembled in weak form.

namespace qbm {

// Gauss-Lobatto nodes and weights on [-1, 1], order >= 2 points.
void gauss_lobatto(int order, std::vector<double>& nodes, std::vector<double>& weights);

struct FedvrGrid {
  double a = 0.0, b = 1.0;
  int order = 0;  // points per element (polynomial degree + 1)
  std::vector<double> element_boundaries;  // n_elements + 1 ascending values
  std::vector<double> nodes;    // global nodes incl. both endpoints, shared once
  std::vector<double> weights;  // bridged quadrature weights, same length

  int n_elements() const { return static_cast<int>(element_boundaries.size()) - 1; }
  // Interior basis functions (endpoints dropped by the Dirichlet condition).
  int n_basis() const { return static_cast<int>(nodes.size()) - 2; }
  double node(int i) const { return nodes[i + 1]; }      // i-th interior node
  double weight(int i) const { return weights[i + 1]; }

  // Quadrature of a function over [a, b] including the endpoint nodes.
  double integrate(const std::function<double(double)>& f) const;
};

FedvrGrid build_grid(double a, double b, int n_elements, int order);

// Same construction on caller-supplied ascending element boundaries (e.g.
// graded toward a singular endpoint).
FedvrGrid build_grid(const std::vector<double>& boundaries, int order);

// (1/2) integral u_i' u_j' over the interior basis; symmetric positive
// semidefinite, block overlap only within shared elements.
Eigen::MatrixXd kinetic_matrix(const FedvrGrid& grid);

// Diagonal of f evaluated at the interior nodes. Throws std::domain_error if
// f is non-finite at any node.
Eigen::VectorXd diagonal_potential(const FedvrGrid& grid,
                                   const std::function<double(double)>& f);

}  // namespace qbm

#endif
