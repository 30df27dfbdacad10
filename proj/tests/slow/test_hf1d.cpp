#include <doctest.h>

#include <cmath>

#include "qbm/hf1d.hpp"
#include "qbm/model.hpp"
#include "qbm/sumrules.hpp"

using namespace qbm;

namespace {

FrequencyEstimate hf1d_frequencies(const SystemSpec& spec, bool corrected) {
  GroundStateResult gs = hf1d_ground_state(spec);
  MomentSet ms = moments_from_ground_state(gs, spec);
  if (corrected) ms = correct_moments(ms, spec.dimension);
  FrequencyEstimate fe;
  fe.sr31 = sr_ratio(ms, 3, 1);
  fe.sr1m1 = sr_ratio(ms, 1, -1);
  return fe;
}

}  // namespace

TEST_CASE("hf1d: ideal system is exact") {
  for (int N : {2, 5}) {
    SystemSpec s = SystemSpec::make_1d(N, 0.0);
    GroundStateResult gs = hf1d_ground_state(s);
    CHECK(gs.energies.total == doctest::Approx(0.5 * N * N).epsilon(1e-8));
    CHECK(gs.r2 == doctest::Approx(0.5 * N * N).epsilon(1e-8));
    REQUIRE(gs.r2_dgamma.has_value());
    // <x^2>(gamma) = <x^2>(1)/sqrt(gamma) for the ideal trap (omega = sqrt(gamma)).
    CHECK(*gs.r2_dgamma == doctest::Approx(-0.5 * gs.r2).epsilon(1e-5));
    MomentSet ms = correct_moments(moments_from_ground_state(gs, s), 1);
    CHECK(sr_ratio(ms, 3, 1) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(sr_ratio(ms, 1, -1) == doctest::Approx(2.0).epsilon(1e-5));
  }
}

TEST_CASE("hf1d: N=2 conventional sr(1,-1) anchor values") {
  CHECK(hf1d_frequencies(SystemSpec::make_1d(2, 0.3), false).sr1m1.value() ==
        doctest::Approx(1.972).epsilon(0.005 / 1.972));
  CHECK(hf1d_frequencies(SystemSpec::make_1d(2, 1.0), false).sr1m1.value() ==
        doctest::Approx(1.920).epsilon(0.005 / 1.920));
}

TEST_CASE("hf1d: internal consistency of the converged state") {
  SystemSpec s = SystemSpec::make_1d(6, 1.0);
  Hf1dOptions opts;
  opts.gamma_derivative = false;
  HfState1D st = hf_solve_1d(s, opts);
  // <r^2> and the trap energy are the same observable.
  CHECK(st.r2 == doctest::Approx(2.0 * st.breakdown.trap).epsilon(1e-12));
  // The kappa-corrected virial form closes the virial identity far better
  // than the bare interaction energy does.
  const double e = st.breakdown.total;
  const double raw = std::abs(2.0 * st.breakdown.kinetic - 2.0 * st.breakdown.trap +
                              st.breakdown.interaction) / e;
  const double corrected = std::abs(2.0 * st.breakdown.kinetic - 2.0 * st.breakdown.trap +
                                    st.interaction_virial) / e;
  CHECK(corrected < raw);
  CHECK(corrected < 1e-3);
  // Energies in the admissible frequency window.
  MomentSet ms = correct_moments(
      moments_from_ground_state(hf1d_ground_state(s, opts), s), 1);
  const double sr31 = sr_ratio(ms, 3, 1);
  CHECK(sr31 > std::sqrt(3.0));
  CHECK(sr31 < 2.0);
}

TEST_CASE("hf1d: repeated solves are deterministic") {
  SystemSpec s = SystemSpec::make_1d(4, 0.5);
  Hf1dOptions opts;
  opts.gamma_derivative = false;
  GroundStateResult a = hf1d_ground_state(s, opts);
  GroundStateResult b = hf1d_ground_state(s, opts);
  CHECK(a.energies.total == b.energies.total);
  CHECK(a.r2 == b.r2);
}

TEST_CASE("hf1d: CM correction matters at small N and fades at large N") {
  SystemSpec small = SystemSpec::make_1d(2, 1.0);
  SystemSpec large = SystemSpec::make_1d(20, 1.0);
  const double gap_small = hf1d_frequencies(small, false).sr1m1.value() -
                           hf1d_frequencies(small, true).sr1m1.value();
  const double gap_large = hf1d_frequencies(large, false).sr1m1.value() -
                           hf1d_frequencies(large, true).sr1m1.value();
  CHECK(gap_small > 0.0);
  CHECK(gap_large > 0.0);
  CHECK(gap_small > 10.0 * gap_large);
}
