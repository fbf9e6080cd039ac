#pragma once

// Two-level (spin-1/2) simulation of the differential-excitation pulse
// sequence: M+1 small flip-angle pulses about transverse axes whose phases
// carry the Gauss-sum terms.  Everything is exact SU(2) algebra in closed
// form; no small-angle assumption is made anywhere except where the physics
// itself introduces one (the combined-pulse approximation).
//
// Conventions, fixed once and tested:
//   single pulse   U(theta, phi) = exp{-i theta (Ix cos phi + Iy sin phi)}
//   sequence       U = U_M ... U_1 U_0           (U_0 acts first)
//   detection      signal = 2 <Ix + i Iy>  from  rho = U Iz U^dag
// so a lone 90-degree pulse gives signal magnitude exactly 1.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gsum/sums.hpp"

namespace gsum {

using complexd = std::complex<double>;

// 2x2 complex matrix, row-major [[a, b], [c, d]].
struct Mat2 {
  complexd a{}, b{}, c{}, d{};

  static constexpr Mat2 identity() { return {{1.0, 0.0}, {}, {}, {1.0, 0.0}}; }

  constexpr Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }
  constexpr Mat2 operator+(const Mat2& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
  }
  constexpr Mat2 operator-(const Mat2& o) const {
    return {a - o.a, b - o.b, c - o.c, d - o.d};
  }
  constexpr Mat2 operator*(complexd s) const {
    return {a * s, b * s, c * s, d * s};
  }
  constexpr Mat2 adjoint() const {
    return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
  }
  constexpr complexd trace() const { return a + d; }
  constexpr complexd det() const { return a * d - b * c; }
  double frobenius_norm() const {
    return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  }

  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

// Propagators are Mat2 that happen to be unitary; the checker below is the
// contract they are tested against.
using Unitary2 = Mat2;

inline bool is_unitary(const Mat2& u, double tol = 1e-12) {
  const Mat2 gram = u * u.adjoint();
  return (gram - Mat2::identity()).frobenius_norm() <= tol &&
         std::abs(std::abs(u.det()) - 1.0) <= tol;
}

// Spin-1/2 operators Ix, Iy, Iz (Pauli matrices over two).
struct SpinOperatorBasis {
  Mat2 x, y, z;
};

inline constexpr SpinOperatorBasis spin_half{
    {{0.0, 0.0}, {0.5, 0.0}, {0.5, 0.0}, {0.0, 0.0}},    // Ix
    {{0.0, 0.0}, {0.0, -0.5}, {0.0, 0.5}, {0.0, 0.0}},   // Iy
    {{0.5, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-0.5, 0.0}}};  // Iz

// Flip angle plus the ordered pulse phases.  Phases are canonicalized into
// [0, 2pi) on construction.
class PulseSequence {
 public:
  PulseSequence(double theta, std::vector<double> phases)
      : theta_(theta), phases_(std::move(phases)) {
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw std::invalid_argument("PulseSequence: theta must be positive");
    for (double& p : phases_) p = canonical_phase(p);
  }

  double theta() const { return theta_; }
  const std::vector<double>& phases() const { return phases_; }
  std::size_t size() const { return phases_.size(); }

  // total nominal rotation below a half turn; recommended working regime
  bool small_angle() const {
    return theta_ * static_cast<double>(phases_.size()) < std::numbers::pi;
  }

  static double canonical_phase(double p) {
    if (!std::isfinite(p))
      throw std::invalid_argument("PulseSequence: phase must be finite");
    double r = std::fmod(p, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;  // fmod round-up at the seam
    return r;
  }

 private:
  double theta_;
  std::vector<double> phases_;
};

inline constexpr double default_flip_angle = 1e-3;

// Pulse phases for a trial factor: phi_m = 2 pi (m^2 n mod l) / l, which is
// the exact value of 2 pi m^2 n / l up to whole turns.
inline std::vector<double> phases_for(std::uint64_t n, std::uint64_t trial,
                                      std::uint64_t truncation) {
  const PhaseResidues pr = phase_residues(SumSpec(n, trial, truncation));
  std::vector<double> phases(pr.residues.size());
  for (std::size_t m = 0; m < phases.size(); ++m) phases[m] = pr.phase(m);
  return phases;
}

inline PulseSequence trial_sequence(std::uint64_t n, std::uint64_t trial,
                                    std::uint64_t truncation,
                                    double theta = default_flip_angle) {
  return PulseSequence(theta, phases_for(n, trial, truncation));
}

// exp{-i theta (Ix cos phi + Iy sin phi)} in closed form:
// cos(theta/2) 1 - i sin(theta/2) (sigma_x cos phi + sigma_y sin phi).
inline Unitary2 pulse_propagator(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const complexd off(0.0, -s);  // -i sin(theta/2)
  const complexd e_minus(std::cos(phi), -std::sin(phi));
  const complexd e_plus(std::cos(phi), std::sin(phi));
  return {{c, 0.0}, off * e_minus, off * e_plus, {c, 0.0}};
}

// Time-ordered product U_M ... U_1 U_0 (rightmost pulse first).
inline Unitary2 sequence_propagator(const PulseSequence& seq) {
  Unitary2 u = Mat2::identity();
  for (double phi : seq.phases())
    u = pulse_propagator(seq.theta(), phi) * u;  // later pulses on the left
  return u;
}

// First-order combined pulse: exp{-i theta sum_m (Ix cos phi_m + Iy sin phi_m)}
// collapses to a single rotation by theta*|S| about the axis at arg S, where
// S = sum_m exp(i phi_m).  A vanishing phasor sum means zero net rotation,
// i.e. the identity.
inline Unitary2 first_order_propagator(const PulseSequence& seq) {
  double sx = 0.0, sy = 0.0;
  for (double phi : seq.phases()) {
    sx += std::cos(phi);
    sy += std::sin(phi);
  }
  const double net = std::hypot(sx, sy);
  if (net == 0.0) return Mat2::identity();
  return pulse_propagator(seq.theta() * net, std::atan2(sy, sx));
}

// Normalized transverse magnetization after evolving the equilibrium
// deviation Iz.
struct Signal {
  complexd value{};

  double magnitude() const { return std::abs(value); }
  double phase() const { return std::arg(value); }

  friend bool operator==(const Signal&, const Signal&) = default;
};

// rho = U Iz U^dag;  signal = 2 Tr(rho I+) = 2 rho_{10}.  The factor 2 makes
// a single 90-degree excitation read exactly magnitude 1.
inline Signal simulate_signal(const Unitary2& u) {
  if (!is_unitary(u))
    throw std::invalid_argument("simulate_signal: input is not unitary");
  const Mat2 rho = u * spin_half.z * u.adjoint();
  return {2.0 * rho.c};
}

// Gauss-sum estimate read off the simulated experiment: the signal of the
// phased sequence against the signal of the all-zero-phase reference of the
// same length and flip angle.  The conjugate is forced by the sign
// conventions above: to first order the raw signal is proportional to
// sum_m exp(+i phi_m), which is (M+1) times the conjugate of the sum being
// estimated.  Error falls off as theta^2.
inline Amplitude estimate_gauss(const PulseSequence& seq) {
  const Signal s = simulate_signal(sequence_propagator(seq));
  const PulseSequence ref(seq.theta(),
                          std::vector<double>(seq.size(), 0.0));
  const Signal s_ref = simulate_signal(sequence_propagator(ref));
  if (s_ref.magnitude() < 1e-12)
    throw std::domain_error(
        "estimate_gauss: reference signal vanishes; total rotation "
        "(M+1)*theta is a multiple of pi, pick a different theta");
  if (s.value == s_ref.value) return {1.0, 0.0};  // factor case, ratio exact
  const complexd ratio = s.value / s_ref.value;
  return {ratio.real(), -ratio.imag()};
}

// Frobenius distance minimized over a global phase:
// min_alpha ||A - e^{i alpha} B||_F, reached at alpha = -arg Tr(A^dag B).
// Formed entrywise rather than via 4 - 2|Tr| to stay accurate near zero.
inline double propagator_distance(const Unitary2& a, const Unitary2& b) {
  const complexd t = (a.adjoint() * b).trace();
  const double alpha = std::arg(t);
  const complexd rot(std::cos(alpha), -std::sin(alpha));  // e^{-i arg t}
  return (a - b * rot).frobenius_norm();
}

}  // namespace gsum
