#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "gsum/nmr.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace gsum;

namespace {

double entry_distance(const Mat2& a, const Mat2& b) {
  return (a - b).frobenius_norm();
}

}  // namespace

TEST_CASE("Mat2 algebra basics") {
  const Mat2 id = Mat2::identity();
  const Mat2 m{{1.0, 2.0}, {3.0, -1.0}, {0.0, 1.0}, {2.0, 0.0}};
  CHECK(m * id == m);
  CHECK(id * m == m);
  CHECK(m + Mat2{} == m);
  CHECK(m - m == Mat2{});
  CHECK(m.trace() == complexd(3.0, 2.0));
  // det = ad - bc = (1+2i)(2) - (3-i)(i) = (2+4i) - (1+3i) = 1+i
  CHECK(m.det() == complexd(1.0, 1.0));
  const Mat2 adj = m.adjoint();
  CHECK(adj.a == std::conj(m.a));
  CHECK(adj.b == std::conj(m.c));
  CHECK(adj.c == std::conj(m.b));
  CHECK(adj.d == std::conj(m.d));
  CHECK_THAT(id.frobenius_norm(), WithinAbs(std::sqrt(2.0), 1e-15));
}

TEST_CASE("spin operators obey the su(2) commutators") {
  const auto commutator = [](const Mat2& p, const Mat2& q) {
    return p * q - q * p;
  };
  const complexd i(0.0, 1.0);
  CHECK(entry_distance(commutator(spin_half.x, spin_half.y),
                       spin_half.z * i) == 0.0);
  CHECK(entry_distance(commutator(spin_half.y, spin_half.z),
                       spin_half.x * i) == 0.0);
  CHECK(entry_distance(commutator(spin_half.z, spin_half.x),
                       spin_half.y * i) == 0.0);
  // each squares to 1/4
  CHECK(entry_distance(spin_half.x * spin_half.x,
                       Mat2::identity() * complexd(0.25, 0.0)) == 0.0);
}

TEST_CASE("pulse propagators are special unitaries") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> ud(0.0, two_pi);
  for (int i = 0; i < 200; ++i) {
    const Unitary2 u = pulse_propagator(ud(eng) + 1e-6, ud(eng));
    CHECK(is_unitary(u));
    CHECK_THAT(std::abs(u.det() - complexd(1.0, 0.0)), WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("pulse propagator matches a Taylor matrix exponential") {
  std::mt19937_64 eng(13);
  std::uniform_real_distribution<double> ud(0.0, two_pi);
  for (int i = 0; i < 100; ++i) {
    const double theta = ud(eng) + 1e-9;
    const double phi = ud(eng);
    CHECK(entry_distance(pulse_propagator(theta, phi),
                         oracles::expm_pulse(theta, phi)) < 1e-13);
  }

  SECTION("90-degree pulse about x in closed form") {
    const double r = std::numbers::sqrt2 / 2.0;
    const Unitary2 u = pulse_propagator(std::numbers::pi / 2.0, 0.0);
    CHECK_THAT(u.a.real(), WithinAbs(r, 1e-15));
    CHECK_THAT(u.a.imag(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(u.b.imag(), WithinAbs(-r, 1e-15));
    CHECK_THAT(u.b.real(), WithinAbs(0.0, 1e-15));
    CHECK(u.c == u.b);
    CHECK(u.d == u.a);
  }

  SECTION("180-degree pulse about x flips the spin") {
    const Unitary2 u = pulse_propagator(std::numbers::pi, 0.0);
    CHECK_THAT(std::abs(u.a), WithinAbs(0.0, 1e-15));
    CHECK_THAT(u.b.real(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(u.b.imag(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(std::abs(u.c - u.b), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(u.d), WithinAbs(0.0, 1e-15));
  }

  SECTION("zero flip angle is the identity, bitwise") {
    CHECK(pulse_propagator(0.0, 1.7) == Mat2::identity());
  }
}

TEST_CASE("same-axis pulses compose by adding flip angles") {
  const double phi = 1.234;
  const Unitary2 twice = pulse_propagator(0.7, phi) * pulse_propagator(0.9, phi);
  CHECK(entry_distance(twice, pulse_propagator(1.6, phi)) < 1e-15);
}

TEST_CASE("PulseSequence canonicalizes phases into [0, 2pi)") {
  const PulseSequence seq(0.1, {-std::numbers::pi / 2.0, two_pi, 4.0 * std::numbers::pi + 0.1,
                                -1e-300, 0.5});
  CHECK_THAT(seq.phases()[0], WithinAbs(3.0 * std::numbers::pi / 2.0, 1e-15));
  CHECK(seq.phases()[1] == 0.0);
  CHECK_THAT(seq.phases()[2], WithinAbs(0.1, 1e-13));
  CHECK(seq.phases()[3] == 0.0);  // rounds up to 2pi in fmod, reset at seam
  CHECK(seq.phases()[4] == 0.5);
  CHECK(seq.theta() == 0.1);
  CHECK(seq.size() == 5);

  CHECK_THROWS_AS(PulseSequence(0.0, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(PulseSequence(-1.0, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(PulseSequence(0.1, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("small_angle flags the sub-half-turn regime") {
  CHECK(PulseSequence(1e-3, std::vector<double>(3141, 0.0)).small_angle());
  CHECK_FALSE(PulseSequence(1e-3, std::vector<double>(3142, 0.0)).small_angle());
}

TEST_CASE("trial sequences carry the reduced sum phases") {
  const PulseSequence seq = trial_sequence(10, 7, 6, 0.02);
  const PhaseResidues pr = phase_residues(SumSpec(10, 7, 6));
  REQUIRE(seq.size() == 7);
  CHECK(seq.theta() == 0.02);
  for (std::size_t m = 0; m < seq.size(); ++m)
    CHECK(seq.phases()[m] == pr.phase(m));

  SECTION("the worked example needs phases 0, pi, 0") {
    const std::vector<double> phases = phases_for(10, 4, 2);
    REQUIRE(phases.size() == 3);
    CHECK(phases[0] == 0.0);
    CHECK(phases[1] == std::numbers::pi);
    CHECK(phases[2] == 0.0);
  }

  SECTION("a trivial factor needs no phase shifts at all") {
    for (double p : phases_for(157573, 1, 10)) CHECK(p == 0.0);
  }
}

TEST_CASE("sequence propagator is the time-ordered pulse product") {
  const PulseSequence seq(0.4, {0.0, 1.0, 2.0});
  // same association the fold uses: U2 * (U1 * (U0 * 1))
  const Unitary2 expect =
      pulse_propagator(0.4, 2.0) *
      (pulse_propagator(0.4, 1.0) *
       (pulse_propagator(0.4, 0.0) * Mat2::identity()));
  CHECK(sequence_propagator(seq) == expect);

  // order matters: the reversed sequence differs
  const PulseSequence rev(0.4, {2.0, 1.0, 0.0});
  CHECK(entry_distance(sequence_propagator(seq), sequence_propagator(rev)) >
        1e-3);
  CHECK(is_unitary(sequence_propagator(seq)));

  SECTION("equal phases merge into one long pulse") {
    const PulseSequence aligned(0.2, std::vector<double>(5, 0.9));
    CHECK(entry_distance(sequence_propagator(aligned),
                         pulse_propagator(1.0, 0.9)) < 1e-14);
  }
}

TEST_CASE("first-order propagator collapses the sequence to one rotation") {
  SECTION("zero phasor sum gives the identity exactly") {
    // an empty sequence is the one case with a bitwise-zero phasor sum;
    // opposed phases cancel only to within sin(pi) rounding
    CHECK(first_order_propagator(PulseSequence(0.3, {})) == Mat2::identity());
    const PulseSequence opposed(0.3, {0.0, std::numbers::pi});
    CHECK(entry_distance(first_order_propagator(opposed), Mat2::identity()) <
          1e-15);
  }

  SECTION("aligned phases reproduce the single long pulse") {
    const PulseSequence aligned(0.01, std::vector<double>(9, 1.1));
    CHECK(entry_distance(first_order_propagator(aligned),
                         pulse_propagator(0.09, 1.1)) < 1e-15);
  }

  SECTION("the worked example collapses to a plain theta rotation") {
    // phases [0, pi, 0] leave a phasor sum of 1, so the combined pulse
    // is a rotation by theta itself about x
    const PulseSequence seq(1e-3, phases_for(10, 4, 2));
    CHECK(entry_distance(first_order_propagator(seq),
                         pulse_propagator(1e-3, 0.0)) < 1e-15);
  }

  SECTION("distance to the exact propagator shrinks with theta") {
    const auto phases = phases_for(157573, 18, 20);
    double prev = -1.0;
    for (double theta : {4e-2, 2e-2, 1e-2, 5e-3}) {
      const PulseSequence seq(theta, phases);
      const double d = propagator_distance(sequence_propagator(seq),
                                           first_order_propagator(seq));
      if (prev > 0.0) CHECK(d < prev / 3.0);  // second order: ~x4 per halving
      prev = d;
    }
  }
}

TEST_CASE("simulated signal conventions") {
  SECTION("rejects non-unitary input") {
    CHECK_THROWS_AS(simulate_signal(Mat2{{2.0, 0.0}, {}, {}, {1.0, 0.0}}),
                    std::invalid_argument);
  }

  SECTION("no pulse, no transverse signal") {
    CHECK(simulate_signal(Mat2::identity()) == Signal{});
  }

  SECTION("a 90-degree pulse gives unit transverse signal") {
    const Signal s = simulate_signal(pulse_propagator(std::numbers::pi / 2.0, 0.0));
    CHECK_THAT(s.magnitude(), WithinAbs(1.0, 1e-15));
  }

  SECTION("a 180-degree pulse leaves no transverse signal") {
    const Signal s = simulate_signal(pulse_propagator(std::numbers::pi, 0.25));
    CHECK_THAT(s.magnitude(), WithinAbs(0.0, 1e-15));
  }

  SECTION("factor-style sequences read sin((M+1) theta)") {
    for (const double theta : {1e-3, 1e-2, 1e-1})
      for (const std::size_t len : {1u, 6u, 21u}) {
        const PulseSequence seq(theta, std::vector<double>(len, 0.0));
        const Signal s = simulate_signal(sequence_propagator(seq));
        CHECK_THAT(s.magnitude(),
                   WithinAbs(std::sin(double(len) * theta), 1e-12));
      }
  }
}

TEST_CASE("estimate_gauss recovers the sum from the simulation") {
  SECTION("factors estimate exactly one") {
    for (std::uint64_t l : {13ull, 17ull, 23ull, 31ull}) {
      const Amplitude a = estimate_gauss(trial_sequence(157573, l, 20));
      CHECK(a == Amplitude{1.0, 0.0});
    }
  }

  SECTION("non-factors approach the exact sum as theta shrinks") {
    const Amplitude exact = gauss_sum(SumSpec(157573, 18, 20));
    const Amplitude est =
        estimate_gauss(trial_sequence(157573, 18, 20, 1e-3));
    CHECK_THAT(est.re, WithinAbs(exact.re, 1e-5));
    CHECK_THAT(est.im, WithinAbs(exact.im, 1e-5));

    const Amplitude est2 =
        estimate_gauss(trial_sequence(157573, 18, 20, 5e-4));
    const double err1 = std::hypot(est.re - exact.re, est.im - exact.im);
    const double err2 = std::hypot(est2.re - exact.re, est2.im - exact.im);
    CHECK(err2 < err1 / 3.0);  // second-order convergence

    const Amplitude tight =
        estimate_gauss(trial_sequence(157573, 18, 20, 1e-4));
    CHECK_THAT(tight.re, WithinAbs(exact.re, 1e-4));
    CHECK_THAT(tight.im, WithinAbs(exact.im, 1e-4));
  }

  SECTION("the worked example estimates one third") {
    const Amplitude a = estimate_gauss(trial_sequence(10, 4, 2, 1e-3));
    CHECK_THAT(a.re, WithinAbs(1.0 / 3.0, 1e-4));
    CHECK_THAT(a.im, WithinAbs(0.0, 1e-4));
  }

  SECTION("vanishing reference signal is reported, not divided by") {
    // (M+1) theta = pi makes the reference a 180-degree pulse
    const PulseSequence seq(std::numbers::pi / 2.0, {0.3, 0.7});
    CHECK_THROWS_AS(estimate_gauss(seq), std::domain_error);
  }
}

TEST_CASE("propagator distance is a phase-blind metric") {
  const Unitary2 u = pulse_propagator(0.8, 0.3);
  const Unitary2 v = pulse_propagator(1.9, 4.0);
  CHECK(propagator_distance(u, u) == 0.0);
  CHECK_THAT(propagator_distance(u, v), WithinAbs(propagator_distance(v, u), 1e-15));

  SECTION("insensitive to a global phase") {
    const complexd phase = std::exp(complexd(0.0, 2.3));
    CHECK(propagator_distance(u, u * phase) < 1e-15);
    CHECK_THAT(propagator_distance(u, v * phase),
               WithinAbs(propagator_distance(u, v), 1e-13));
  }

  SECTION("maximal for orthogonal rotations") {
    CHECK_THAT(propagator_distance(Mat2::identity(),
                                   pulse_propagator(std::numbers::pi, 0.0)),
               WithinAbs(2.0, 1e-15));
  }
}
