#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qbm/model.hpp"
#include "qbm/sumrules.hpp"
#include "qbm/tf.hpp"

using namespace qbm;

namespace {

std::vector<double> uniform_grid(double half, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = -half + 2.0 * half * i / (n - 1);
  return g;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

}  // namespace

TEST_CASE("tf1d: ideal density profile") {
  const int N = 2;
  auto grid = uniform_grid(4.0, 4001);
  auto n = ideal_density_1d(N, grid);
  CHECK(n[2000] == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(n.front() == 0.0);  // outside the cloud radius sqrt(2N) = 2
  // Trapezoid error at the sqrt edge of the cloud limits the accuracy.
  CHECK(trapezoid(grid, n) == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("tf1d: the ideal profile is the lambda=0 fixed point") {
  SystemSpec s = SystemSpec::make_1d(10, 0.0);
  auto grid = uniform_grid(1.5 * std::sqrt(20.0), 2000);
  auto init = ideal_density_1d(10, grid);
  // Renormalize to the solver's rectangle-rule quadrature.
  double mass = 0.0;
  for (double v : init) mass += v * (grid[1] - grid[0]);
  for (double& v : init) v *= 10.0 / mass;
  TfDensity1D sol = tf1d_solve(s, grid, init);
  CHECK(sol.residual < 1e-9);
  // The discrete fixed point deviates from the analytic profile only at the
  // sqrt edge of the cloud, at the level of the grid resolution.
  double dev = 0.0;
  for (std::size_t i = 0; i < init.size(); ++i)
    dev = std::max(dev, std::abs(sol.density[i] - init[i]));
  CHECK(dev < 1e-3);
  CHECK(sol.breakdown.total == doctest::Approx(50.0).epsilon(1e-6));
}

TEST_CASE("tf1d: continuation preconditions") {
  SystemSpec s = SystemSpec::make_1d(100, 1.0);
  CHECK_THROWS_AS(tf1d_continuation(s, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(tf1d_continuation(s, {0.5, 1.0}), std::invalid_argument);  // starts > 1e-2
  CHECK_THROWS_AS(tf1d_continuation(s, {}), std::invalid_argument);
}

TEST_CASE("tf1d: converged interacting solution") {
  SystemSpec s = SystemSpec::make_1d(100, 1.0);
  GroundStateResult gs = tf1d_ground_state(s, {}, true);
  // Normalization is maintained by construction; check through the density.
  std::vector<double> r(gs.density.size()), n(gs.density.size());
  for (std::size_t i = 0; i < gs.density.size(); ++i) {
    r[i] = gs.density[i].first;
    n[i] = gs.density[i].second;
  }
  CHECK(trapezoid(r, n) == doctest::Approx(100.0).epsilon(1e-8));
  // Kappa-corrected virial identity.
  SystemSpec spec = s;
  TfDensity1D sol = tf1d_continuation(s, {1e-2, 0.1, 0.3, 1.0}).back();
  (void)spec;
  const double corrected = std::abs(2.0 * sol.breakdown.kinetic - 2.0 * sol.breakdown.trap +
                                    sol.interaction_virial) / sol.breakdown.total;
  CHECK(sol.residual < 1e-7);
  CHECK(corrected < 1e-4);
  // Frequency estimate inside the Coulomb window.
  MomentSet ms = correct_moments(moments_from_ground_state(gs, s), 1);
  const double sr31 = sr_ratio(ms, 3, 1);
  CHECK(sr31 > std::sqrt(3.0));
  CHECK(sr31 < 2.0);
  REQUIRE(ms.m_minus1.has_value());
  CHECK(sr_ratio(ms, 1, -1) > std::sqrt(3.0));
}

TEST_CASE("tf1d: interaction weakens relative to the trap as N grows") {
  double prev = 1e300;
  for (int N : {100, 1000}) {
    SystemSpec s = SystemSpec::make_1d(N, 1.0);
    GroundStateResult gs = tf1d_ground_state(s, {}, false);
    const double ratio = gs.energies.interaction / gs.energies.trap;
    CHECK(ratio < prev);
    prev = ratio;
  }
}

TEST_CASE("tf2d: ideal limit of the parabolic ansatz") {
  EnergyBreakdown e = tf2d_energy(1.0, 4, 0.0);
  CHECK(e.total == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  Tf2dResult min0 = tf2d_minimize(4, 0.0);
  CHECK(min0.gamma_shape == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(min0.breakdown.total == doctest::Approx(16.0 / 3.0).epsilon(1e-10));
  CHECK(sr31_from_energies(min0.breakdown, 1) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("tf2d: minimization satisfies the scaling virial identity") {
  Tf2dResult r = tf2d_minimize(100, 1.0);
  CHECK(virial_residual(r.breakdown, 1) < 1e-6);
  // The shape parameter grows with coupling: stronger repulsion flattens and
  // widens the cloud.
  CHECK(tf2d_minimize(100, 10.0).gamma_shape > r.gamma_shape);
}

TEST_CASE("tf2d: strong-coupling scaling laws") {
  // E ~ lambda^{2/3} N^{5/3} deep in the classical regime.
  const double e1 = tf2d_minimize(100, 1e5).breakdown.total;
  const double e2 = tf2d_minimize(100, 1e6).breakdown.total;
  CHECK(e2 / e1 == doctest::Approx(std::pow(10.0, 2.0 / 3.0)).epsilon(5e-3));
  const double e3 = tf2d_minimize(200, 1e6).breakdown.total;
  CHECK(e3 / e2 == doctest::Approx(std::pow(2.0, 5.0 / 3.0)).epsilon(5e-3));
  // Frequency approaches the classical value sqrt(3).
  CHECK(sr31_from_energies(tf2d_minimize(100, 1e6).breakdown, 1) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("tf2d: frequency decreases with N and lambda") {
  SystemSpec a = SystemSpec::make_2d(100, 1.0);
  SystemSpec b = SystemSpec::make_2d(1000, 1.0);
  SystemSpec c = SystemSpec::make_2d(100, 5.0);
  const double fa = sr31_from_energies(tf2d_ground_state(a, false).energies, 1);
  const double fb = sr31_from_energies(tf2d_ground_state(b, false).energies, 1);
  const double fc = sr31_from_energies(tf2d_ground_state(c, false).energies, 1);
  CHECK(fb < fa);
  CHECK(fc < fa);
  CHECK(fb > std::sqrt(3.0));
}
