#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <tuple>
#include <vector>
#include <fstream>

#include "qbm/classical.hpp"
#include "qbm/model.hpp"

using namespace qbm;

namespace {

// E = V + W with the positions of cfg.
void energies(const ClassicalConfiguration& cfg, double& v, double& w) {
  const int n = cfg.particles;
  const double* x = cfg.positions.data();
  const double* y = cfg.dimension == 2 ? x + n : nullptr;
  v = w = 0.0;
  for (int i = 0; i < n; ++i) {
    v += 0.5 * (x[i] * x[i] + (y ? y[i] * y[i] : 0.0));
    for (int j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y ? y[i] - y[j] : 0.0;
      w += cfg.lambda / std::sqrt(dx * dx + dy * dy);
    }
  }
}

}  // namespace

TEST_CASE("classical: preconditions") {
  CHECK_THROWS_AS(minimize_classical(3, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(minimize_classical(2, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(minimize_classical(2, 4, 0.0), std::invalid_argument);
}

TEST_CASE("classical: two-body minimum is analytic") {
  for (double lambda : {0.5, 1.0, 100.0}) {
    for (int d : {1, 2}) {
      CAPTURE(lambda);
      CAPTURE(d);
      ClassicalConfiguration cfg = minimize_classical(d, 2, lambda);
      const double exact = 0.75 * std::pow(2.0 * lambda, 2.0 / 3.0);
      CHECK(cfg.energy == doctest::Approx(exact).epsilon(1e-10));
      CHECK(classical_breathing_check(cfg) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("classical: three particles form an equilateral triangle in 2D") {
  const double lambda = 2.0;
  ClassicalConfiguration cfg = minimize_classical(2, 3, lambda);
  // Ring radius R minimizing 3R^2/2 + sqrt(3) lambda / R.
  const double r = std::cbrt(lambda / std::sqrt(3.0));
  const double exact = 1.5 * r * r + std::sqrt(3.0) * lambda / r;
  CHECK(cfg.energy == doctest::Approx(exact).epsilon(1e-10));
  // All pair distances equal.
  double d01 = 0.0, d02 = 0.0, d12 = 0.0;
  auto dist = [&](int i, int j) {
    const double dx = cfg.positions[i] - cfg.positions[j];
    const double dy = cfg.positions[3 + i] - cfg.positions[3 + j];
    return std::sqrt(dx * dx + dy * dy);
  };
  d01 = dist(0, 1);
  d02 = dist(0, 2);
  d12 = dist(1, 2);
  CHECK(d01 == doctest::Approx(d02).epsilon(1e-8));
  CHECK(d01 == doctest::Approx(d12).epsilon(1e-8));
}

TEST_CASE("classical: stationarity, virial, and center of mass") {
  const std::vector<std::tuple<int, int, double>> cases = {
      {1, 10, 5.0}, {2, 20, 1.0}, {2, 12, 50.0}};
  for (auto [d, N, lambda] : cases) {
    CAPTURE(d);
    CAPTURE(N);
    ClassicalConfiguration cfg = minimize_classical(d, N, lambda);
    double v, w;
    energies(cfg, v, w);
    CHECK(std::abs(2.0 * v - w) / cfg.energy < 1e-8);
    for (int c = 0; c < d; ++c) {
      double cm = 0.0;
      for (int i = 0; i < N; ++i) cm += cfg.positions[c * N + i];
      CHECK(std::abs(cm / N) < 1e-6);
    }
    // The breathing check accepts the converged minimum...
    CHECK(classical_breathing_check(cfg) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-8));
  }
  // ...and rejects a visibly non-stationary configuration.
  ClassicalConfiguration bad = minimize_classical(2, 5, 1.0);
  for (double& p : bad.positions) p *= 1.1;
  CHECK_THROWS_AS(classical_breathing_check(bad), std::invalid_argument);
}

TEST_CASE("classical: energy homogeneity in lambda") {
  // E(N, c lambda) = c^{2/3} E(N, lambda) by rescaling all positions.
  const double e1 = minimize_classical(2, 8, 1.0).energy;
  const double e8 = minimize_classical(2, 8, 8.0).energy;
  CHECK(e8 == doctest::Approx(4.0 * e1).epsilon(1e-9));
}

TEST_CASE("classical: fixed seed reproduces the minimum bit-for-bit") {
  ClassicalOptions opts;
  opts.seed = 99;
  ClassicalConfiguration a = minimize_classical(2, 9, 2.0, opts);
  ClassicalConfiguration b = minimize_classical(2, 9, 2.0, opts);
  CHECK(a.energy == b.energy);
  CHECK(a.positions == b.positions);
}

TEST_CASE("classical: ground-state packaging") {
  SystemSpec s = SystemSpec::make_2d(10, 3.0);
  GroundStateResult gs = classical_ground_state(s);
  CHECK(gs.energies.kinetic == 0.0);
  CHECK(gs.r2 == doctest::Approx(2.0 * gs.energies.trap).epsilon(1e-14));
  REQUIRE(gs.r2_dgamma.has_value());
  CHECK(*gs.r2_dgamma == doctest::Approx(-2.0 / 3.0 * gs.r2).epsilon(1e-14));
  SystemSpec dip = s;
  dip.alpha = 3;
  CHECK_THROWS_AS(classical_ground_state(dip), std::invalid_argument);
}

TEST_CASE("classical: configuration dump") {
  ClassicalConfiguration cfg = minimize_classical(2, 4, 1.0);
  const std::string path = "/tmp/qbm_test_classical_cfg.csv";
  dump_configuration(cfg, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "index,x,y");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4);
  std::remove(path.c_str());
}
