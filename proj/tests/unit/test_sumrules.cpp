#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qbm/sumrules.hpp"

using namespace qbm;

TEST_CASE("moments from ground-state observables") {
  // Ideal 1D N=2: T = V = 1, <r^2> = 2, d<r^2>/dgamma = -1.
  SystemSpec spec = SystemSpec::make_1d(2, 0.0);
  GroundStateResult gs;
  gs.energies = EnergyBreakdown::from_parts(1.0, 1.0, 0.0);
  gs.r2 = 2.0;
  gs.r2_dgamma = -1.0;
  MomentSet ms = moments_from_ground_state(gs, spec);
  CHECK_FALSE(ms.corrected);
  CHECK(ms.dimension == 1);
  CHECK(ms.m1 == doctest::Approx(4.0));
  CHECK(ms.m3 == doctest::Approx(16.0));
  REQUIRE(ms.m_minus1.has_value());
  CHECK(*ms.m_minus1 == doctest::Approx(1.0));
  CHECK(sr_ratio(ms, 3, 1) == doctest::Approx(2.0));
  CHECK(sr_ratio(ms, 1, -1) == doctest::Approx(2.0));

  // Without a gamma derivative, m_-1 stays absent.
  gs.r2_dgamma.reset();
  MomentSet ms2 = moments_from_ground_state(gs, spec);
  CHECK_FALSE(ms2.m_minus1.has_value());
  CHECK_THROWS(sr_ratio(ms2, 1, -1));
}

TEST_CASE("m3 carries the alpha^2 interaction weight") {
  SystemSpec spec = SystemSpec::make_2d(2, 1.0);
  spec.alpha = 3;
  GroundStateResult gs;
  gs.energies = EnergyBreakdown::from_parts(1.0, 2.0, 0.5);
  gs.r2 = 3.0;
  MomentSet ms = moments_from_ground_state(gs, spec);
  CHECK(ms.m1 == doctest::Approx(6.0));
  CHECK(ms.m3 == doctest::Approx(8.0 + 16.0 + 2.0 * 9.0 * 0.5));
}

TEST_CASE("center-of-mass correction") {
  MomentSet ms;
  ms.dimension = 1;
  ms.m1 = 4.0;
  ms.m3 = 16.0;
  ms.m_minus1 = 1.0;
  MomentSet c = correct_moments(ms, 1);
  CHECK(c.corrected);
  CHECK(c.m1 == doctest::Approx(3.0));
  CHECK(c.m3 == doctest::Approx(12.0));
  REQUIRE(c.m_minus1.has_value());
  CHECK(*c.m_minus1 == doctest::Approx(0.75));
  CHECK(sr_ratio(c, 3, 1) == doctest::Approx(2.0));
  CHECK(sr_ratio(c, 1, -1) == doctest::Approx(2.0));

  // Ideal gas: m*_{-1} hits zero exactly -> correction must be rejected.
  MomentSet ideal;
  ideal.dimension = 1;
  ideal.m1 = 2.0;
  ideal.m3 = 8.0;
  ideal.m_minus1 = 0.25;
  CHECK_THROWS_AS(correct_moments(ideal, 1), std::domain_error);
}

TEST_CASE("sr31 from energy breakdown") {
  // Ideal: T = V -> sr(3,1) = 2 for both interactions.
  EnergyBreakdown ideal = EnergyBreakdown::from_parts(1.0, 1.0, 0.0);
  CHECK(sr31_from_energies(ideal, 1) == doctest::Approx(2.0));
  CHECK(sr31_from_energies(ideal, 3) == doctest::Approx(2.0));
  // Classical limit T -> 0: sqrt(2 + alpha).
  EnergyBreakdown cl = EnergyBreakdown::from_parts(0.0, 1.0, 2.0);
  CHECK(sr31_from_energies(cl, 1) == doctest::Approx(std::sqrt(3.0)));
  CHECK(sr31_from_energies(cl, 3) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("sr_ratio rejects unsupported pairs") {
  MomentSet ms;
  ms.m1 = 1.0;
  ms.m3 = 4.0;
  ms.m_minus1 = 0.25;
  CHECK_THROWS(sr_ratio(ms, 3, -1));
  CHECK_THROWS(sr_ratio(ms, 2, 1));
}

TEST_CASE("moments from an explicit spectrum") {
  // Single line at omega = 2 with |<0|Q|1>|^2 = 1.5 (ideal 1D N=2 relative).
  std::vector<SpectrumLine> lines{{2.0, std::sqrt(1.5)}};
  CHECK(moment_from_spectrum(lines, 1) == doctest::Approx(2.0 * 1.5));
  CHECK(moment_from_spectrum(lines, 3) == doctest::Approx(8.0 * 1.5));
  CHECK(moment_from_spectrum(lines, -1) == doctest::Approx(0.75));
  // Several lines just add.
  std::vector<SpectrumLine> two{{1.0, 1.0}, {3.0, 2.0}};
  CHECK(moment_from_spectrum(two, 1) == doctest::Approx(1.0 + 12.0));
  // Vanishing gap poisons inverse moments only.
  std::vector<SpectrumLine> deg{{0.0, 1.0}};
  CHECK(moment_from_spectrum(deg, 1) == doctest::Approx(0.0));
  CHECK_THROWS(moment_from_spectrum(deg, -1));
}
