#include <doctest.h>

#include <cmath>
#include <vector>

#include "qbm/fedvr.hpp"
#include "qbm/linalg.hpp"

using namespace qbm;

TEST_CASE("gauss_lobatto low orders match closed forms") {
  std::vector<double> x, w;
  gauss_lobatto(3, x, w);
  REQUIRE(x.size() == 3);
  CHECK(x[0] == doctest::Approx(-1.0));
  CHECK(x[1] == doctest::Approx(0.0));
  CHECK(x[2] == doctest::Approx(1.0));
  CHECK(w[0] == doctest::Approx(1.0 / 3.0));
  CHECK(w[1] == doctest::Approx(4.0 / 3.0));

  gauss_lobatto(4, x, w);
  CHECK(x[1] == doctest::Approx(-std::sqrt(0.2)));
  CHECK(w[1] == doctest::Approx(5.0 / 6.0));

  // Exact for polynomials up to degree 2*order - 3.
  gauss_lobatto(7, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 10);
  CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
}

TEST_CASE("grid bookkeeping and quadrature") {
  // 10 elements of order 8 on [-10, 10]: 10*7 - 1 = 69 interior functions.
  FedvrGrid g = build_grid(-10.0, 10.0, 10, 8);
  CHECK(g.n_elements() == 10);
  CHECK(g.n_basis() == 69);
  CHECK(g.nodes.front() == doctest::Approx(-10.0));
  CHECK(g.nodes.back() == doctest::Approx(10.0));
  double wsum = 0.0;
  for (double w : g.weights) wsum += w;
  CHECK(wsum == doctest::Approx(20.0).epsilon(1e-13));
  CHECK(g.integrate([](double x) { return x * x; }) ==
        doctest::Approx(2000.0 / 3.0).epsilon(1e-12));
  CHECK(g.integrate([](double x) { return std::exp(-x * x); }) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-7));
}

TEST_CASE("harmonic oscillator eigenvalues") {
  FedvrGrid g = build_grid(-10.0, 10.0, 12, 12);
  Eigen::MatrixXd h = kinetic_matrix(g);
  h.diagonal() += diagonal_potential(g, [](double x) { return 0.5 * x * x; });
  auto eig = sym_eigen(h);
  for (int n = 0; n < 8; ++n)
    CHECK(eig.values(n) == doctest::Approx(n + 0.5).epsilon(1e-10));
}

TEST_CASE("radial oscillator with centrifugal barrier (3D s/p analogue)") {
  // u'' form of the 3D oscillator: E_{n,l} = 2n + l + 3/2. l = 1 keeps the
  // barrier term active; l = 0 has the -1/(8 rho^2) attraction.
  FedvrGrid g = build_grid(0.0, 12.0, 12, 9);
  for (int l : {0, 1}) {
    const double nu = l + 0.5;
    const double c = nu * nu - 0.25;
    Eigen::MatrixXd h = kinetic_matrix(g);
    h.diagonal() += diagonal_potential(g, [&](double r) {
      return 0.5 * r * r + 0.5 * c / (r * r);
    });
    auto eig = sym_eigen(h);
    for (int n = 0; n < 4; ++n)
      CHECK(eig.values(n) == doctest::Approx(2 * n + l + 1.5).epsilon(1e-9));
  }
}

TEST_CASE("diagonal_potential rejects singular integrands") {
  FedvrGrid g = build_grid(-1.0, 1.0, 4, 5);
  const double pole = g.node(3);
  CHECK_THROWS_AS(diagonal_potential(g, [&](double x) { return 1.0 / (x - pole); }),
                  std::domain_error);
}
