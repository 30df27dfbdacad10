#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qbm/hf2d.hpp"
#include "qbm/model.hpp"
#include "qbm/sumrules.hpp"

using namespace qbm;

namespace {

double sr31_star(int N, double lambda, int cutoff = 0) {
  SystemSpec s = SystemSpec::make_2d(N, lambda);
  Hf2dOptions opts;
  opts.shell_cutoff = cutoff;
  opts.gamma_derivative = false;
  GroundStateResult gs = hf2d_ground_state(s, opts);
  MomentSet ms = correct_moments(moments_from_ground_state(gs, s), 2);
  return sr_ratio(ms, 3, 1);
}

}  // namespace

TEST_CASE("hf2d basis: one-body tables and Coulomb anchor") {
  auto basis = hf2d_basis(6);
  const auto& labels = basis->labels();
  int zero = -1;
  for (int a = 0; a < basis->n_orbitals(); ++a) {
    CHECK(basis->rho2(a, a) == doctest::Approx(labels[a].shell() + 1.0).epsilon(1e-14));
    if (labels[a].p == 0 && labels[a].q == 0) zero = a;
  }
  REQUIRE(zero >= 0);
  // <00,00|1/r12|00,00> = sqrt(pi/2) in oscillator units.
  CHECK(basis->coulomb(zero, zero, zero, zero) ==
        doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
}

TEST_CASE("hf2d basis: Coulomb tensor symmetries") {
  auto basis = hf2d_basis(5);
  const auto& entries = basis->coulomb_entries();
  REQUIRE(!entries.empty());
  int checked = 0;
  for (std::size_t i = 0; i < entries.size() && checked < 200; i += 7, ++checked) {
    const auto& e = entries[i];
    CHECK(basis->coulomb(e.b, e.a, e.d, e.c) == doctest::Approx(e.value).epsilon(1e-12));
    CHECK(basis->coulomb(e.c, e.d, e.a, e.b) == doctest::Approx(e.value).epsilon(1e-12));
    // m conservation: m_a + m_b = m_c + m_d.
    const auto& l = basis->labels();
    CHECK(l[e.a].m() + l[e.b].m() == l[e.c].m() + l[e.d].m());
  }
}

TEST_CASE("hf2d: Hund occupation and cutoff guard") {
  auto basis = hf2d_basis(4);
  auto occ = hund_occupation(6, *basis);
  REQUIRE(occ.size() == 6);
  int shell_sum = 0;
  for (const auto& o : occ) shell_sum += basis->labels()[o.orbital].shell();
  CHECK(shell_sum == 4);  // closed shells: 2 particles in shell 0, 4 in shell 1
  CHECK_THROWS_AS(hund_occupation(40, *basis), std::invalid_argument);
}

TEST_CASE("hf2d: ideal closed shell is exact") {
  SystemSpec s = SystemSpec::make_2d(6, 0.0);
  GroundStateResult gs = hf2d_ground_state(s);
  CHECK(gs.energies.total == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(gs.r2 == doctest::Approx(10.0).epsilon(1e-12));
  REQUIRE(gs.r2_dgamma.has_value());
  // <r^2>(gamma) = <r^2>(1)/sqrt(gamma) for the ideal 2D trap.
  CHECK(*gs.r2_dgamma == doctest::Approx(-5.0).epsilon(1e-5));
  MomentSet ms = correct_moments(moments_from_ground_state(gs, s), 2);
  CHECK(sr_ratio(ms, 3, 1) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sr_ratio(ms, 1, -1) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("hf2d: energy is variational in the basis cutoff") {
  SystemSpec s = SystemSpec::make_2d(6, 0.5);
  Hf2dOptions opts;
  opts.gamma_derivative = false;
  double prev = 0.0;
  bool first = true;
  for (int cutoff : {7, 9, 11}) {
    opts.shell_cutoff = cutoff;
    const double e = hf2d_ground_state(s, opts).energies.total;
    if (!first) CHECK(e <= prev + 1e-12);
    prev = e;
    first = false;
  }
}

TEST_CASE("hf2d: virial identity at converged cutoffs") {
  for (int N : {2, 6}) {
    SystemSpec s = SystemSpec::make_2d(N, 0.5);
    Hf2dOptions opts;
    opts.gamma_derivative = false;
    GroundStateResult gs = hf2d_ground_state(s, opts);
    CAPTURE(N);
    CHECK(virial_residual(gs.energies, 1) < 1e-3);
  }
}

TEST_CASE("hf2d: closed shell N=6 is a local frequency minimum") {
  const double f5 = sr31_star(5, 0.5);
  const double f6 = sr31_star(6, 0.5);
  const double f7 = sr31_star(7, 0.5);
  CHECK(f6 < f5);
  CHECK(f6 < f7);
}
