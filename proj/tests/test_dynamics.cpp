// Copyright 2026 The qrtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "qrtomo/dynamics.hpp"
#include "qrtomo/fock.hpp"

using namespace qrtomo;
using dynamics::DeviceParams;
using dynamics::JumpSet;
using dynamics::PulseSchedule;
using dynamics::SequenceOptions;

namespace {

ComplexMatrix expm_hermitian_times(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector phases =
      (Complex(0.0, -t) * es.eigenvalues().cast<Complex>().array()).exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x) {
  double lm1 = 1.0;
  if (n == 0) return lm1;
  double l = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
    lm1 = l;
    l = next;
  }
  return l;
}

fock::DensityMatrix fock_state(int n, int dim) {
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(n, n) = 1.0;
  return fock::DensityMatrix(rho);
}

// The D = 3 training family: Fock states plus pairwise superpositions with
// relative phases 0 and pi/2.
std::vector<fock::DensityMatrix> d3_states() {
  std::vector<fock::DensityMatrix> states;
  const int d = 3;
  for (int n = 0; n < d; ++n) states.push_back(fock_state(n, d));
  for (int l = 0; l < d; ++l)
    for (int m = l + 1; m < d; ++m)
      for (double phi : {0.0, kPi / 2.0}) {
        ComplexVector psi = ComplexVector::Zero(d);
        psi(l) = 1.0 / std::sqrt(2.0);
        psi(m) = std::exp(Complex(0.0, phi)) / std::sqrt(2.0);
        states.push_back(fock::DensityMatrix(psi * psi.adjoint()));
      }
  return states;
}

}  // namespace

TEST_CASE("joint hamiltonian matches dispersive matrix elements") {
  const DeviceParams device;
  const ComplexMatrix h = dynamics::build_joint_hamiltonian(device, 0.0, 0.0, 6);
  // Index q * 6 + n with q = 1 the excited branch.
  CHECK(std::abs(h(7, 7).real() / kTwoPi - (-1.423e6)) < 1e3);
  const double e2 = -(2.0 * 1.423e6 + 2.0 * 16e3 + 6e3);
  CHECK(std::abs(h(8, 8).real() / kTwoPi - e2) < 1e3);
  CHECK(std::abs(h(2, 2).real() / kTwoPi - (-6e3)) < 1.0);
  CHECK(std::abs(h(0, 0)) == 0.0);
  CHECK(std::abs(h(6, 6)) == 0.0);
}

TEST_CASE("joint hamiltonian drive terms and hermiticity") {
  const DeviceParams device;
  const Complex eq(3e5, -2e5);
  const Complex ec(-1e5, 4e5);
  const ComplexMatrix h = dynamics::build_joint_hamiltonian(device, eq, ec, 4);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  // eps_q sigma_- couples |g,n> and |e,n>: entry (g0, e0) = eps_q.
  CHECK(std::abs(h(0, 4) - eq) < 1e-9);
  // eps_c c couples |q,0> and |q,1>: entry (g0, g1) = eps_c.
  CHECK(std::abs(h(0, 1) - ec) < 1e-9);
  CHECK(std::abs(h(1, 2) - ec * std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("lindblad step preserves trace and hermiticity") {
  std::mt19937_64 rng(71);
  const int dim = 8;
  const ComplexMatrix rho = fock::random_density_matrix(dim, rng).matrix();
  const DeviceParams device;
  const ComplexMatrix h = dynamics::build_joint_hamiltonian(device, Complex(0.0, 5e6), 2e6, 4);
  const JumpSet jumps = dynamics::build_jumps(device, 4);
  const ComplexMatrix out = dynamics::lindblad_step(rho, h, jumps, 2e-9);
  CHECK(std::abs(out.trace().real() - 1.0) < 1e-12);
  CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed evolution matches the matrix exponential") {
  const DeviceParams device;
  const ComplexMatrix h =
      dynamics::build_joint_hamiltonian(device, Complex(0.0, 1.2e7), Complex(5e6, -3e6), 5);
  ComplexMatrix rho = ComplexMatrix::Zero(10, 10);
  rho(0, 0) = 1.0;
  const double total = 100e-9;
  const int steps = 200;
  ComplexMatrix evolved = rho;
  for (int s = 0; s < steps; ++s)
    evolved = dynamics::lindblad_step(evolved, h, JumpSet{}, total / steps);
  const ComplexMatrix u = expm_hermitian_times(h, total);
  const ComplexMatrix exact = u * rho * u.adjoint();
  CHECK((evolved - exact).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("closed evolution conserves purity over a thousand steps") {
  const DeviceParams device;
  const ComplexMatrix h =
      dynamics::build_joint_hamiltonian(device, Complex(0.0, 1.2e7), Complex(2e6, 1e6), 4);
  ComplexMatrix rho = ComplexMatrix::Zero(8, 8);
  rho(0, 0) = 1.0;
  for (int s = 0; s < 1000; ++s) rho = dynamics::lindblad_step(rho, h, JumpSet{}, 0.5e-9);
  const double purity = (rho * rho).trace().real();
  CHECK(std::abs(purity - 1.0) < 1e-8);
}

TEST_CASE("qubit energy decay follows the exponential law") {
  const DeviceParams device;
  JumpSet t1_only;
  t1_only.ops.push_back(std::sqrt(1.0 / device.T_q1) *
                        dynamics::kron(dynamics::qubit_lower(), ComplexMatrix::Identity(1, 1)));
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(1, 1) = 1.0;
  const ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  const int steps = 2000;
  for (int s = 0; s < steps; ++s)
    rho = dynamics::lindblad_step(rho, h, t1_only, device.T_q1 / steps);
  CHECK(std::abs(rho(1, 1).real() - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("pure dephasing damps coherence at the expected rate") {
  const DeviceParams device;
  JumpSet dephase;
  dephase.ops.push_back(std::sqrt(2.0 / device.T_qphi) *
                        dynamics::kron(dynamics::qubit_excited_projector(),
                                       ComplexMatrix::Identity(1, 1)));
  ComplexMatrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  const ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  const int steps = 2000;
  for (int s = 0; s < steps; ++s)
    rho = dynamics::lindblad_step(rho, h, dephase, device.T_qphi / steps);
  CHECK(std::abs(rho(0, 1).real() - 0.5 * std::exp(-1.0)) < 1e-6);
  CHECK(std::abs(rho(1, 1).real() - 0.5) < 1e-12);
}

TEST_CASE("cavity photon number decays with T_c1") {
  const DeviceParams device;
  const JumpSet jumps = dynamics::build_jumps(device, 3);
  ComplexMatrix joint = ComplexMatrix::Zero(6, 6);
  joint(1, 1) = 1.0;  // |g, 1>
  const ComplexMatrix h = ComplexMatrix::Zero(6, 6);
  const int steps = 4000;
  for (int s = 0; s < steps; ++s)
    joint = dynamics::lindblad_step(joint, h, jumps, device.T_c1 / steps);
  const ComplexMatrix cav = dynamics::cavity_reduced(joint, 3);
  CHECK(std::abs(cav(1, 1).real() - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("jump rate scaling stretches the decay clock") {
  const DeviceParams device;
  const double scale = 6.0;
  const JumpSet jumps = dynamics::build_jumps(device, 2, scale);
  ComplexMatrix joint = ComplexMatrix::Zero(4, 4);
  joint(1, 1) = 1.0;  // |g, 1>
  const ComplexMatrix h = ComplexMatrix::Zero(4, 4);
  const double t = device.T_c1 / scale;
  const int steps = 1000;
  for (int s = 0; s < steps; ++s)
    joint = dynamics::lindblad_step(joint, h, jumps, t / steps);
  CHECK(std::abs(joint(1, 1).real() - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("pi/2 calibration lands on the analytic amplitude") {
  const DeviceParams device;
  const double duration = 64e-9;
  const Complex amp = dynamics::calibrate_pi2(device, duration, 4);
  CHECK(amp.real() == 0.0);
  CHECK(amp.imag() > 0.0);
  const double expected = (kPi / 2.0) / (2.0 * duration);
  CHECK(std::abs(amp.imag() - expected) / expected < 0.02);

  const Complex amp2 = dynamics::calibrate_pi2(device, 2.0 * duration, 4);
  CHECK(std::abs(amp2.imag() - 0.5 * amp.imag()) / amp.imag() < 0.02);
}

TEST_CASE("calibrated pulse halves the population and doubles to a pi pulse") {
  const DeviceParams device;
  const int cav = 3;
  const double duration = 64e-9;
  const Complex amp = dynamics::calibrate_pi2(device, duration, cav);

  ComplexMatrix joint = ComplexMatrix::Zero(2 * cav, 2 * cav);
  joint(0, 0) = 1.0;
  const ComplexMatrix h = dynamics::build_joint_hamiltonian(device, amp, 0.0, cav);
  const ComplexMatrix u = expm_hermitian_times(h, duration);
  joint = u * joint * u.adjoint();
  CHECK(std::abs(dynamics::excited_population(joint, cav) - 0.5) < 1e-6);
  joint = u * joint * u.adjoint();
  CHECK(std::abs(dynamics::excited_population(joint, cav) - 1.0) < 1e-7);
}

TEST_CASE("evolve applies a schedule and rejects malformed ones") {
  const DeviceParams device;
  const int cav = 3;
  ComplexMatrix joint = ComplexMatrix::Zero(2 * cav, 2 * cav);
  joint(0, 0) = 1.0;
  const fock::DensityMatrix rho0{joint};

  PulseSchedule empty;
  const fock::DensityMatrix same = dynamics::evolve(rho0, device, empty, JumpSet{});
  CHECK((same.matrix() - joint).cwiseAbs().maxCoeff() < 1e-14);

  const Complex amp = dynamics::calibrate_pi2(device, 64e-9, cav);
  PulseSchedule pi_pulse;
  pi_pulse.dt = 64e-9;
  pi_pulse.qubit_drive = {amp, amp};
  pi_pulse.cavity_drive = {0.0, 0.0};
  const fock::DensityMatrix flipped = dynamics::evolve(rho0, device, pi_pulse, JumpSet{});
  CHECK(std::abs(dynamics::excited_population(flipped.matrix(), cav) - 1.0) < 1e-6);

  PulseSchedule bad;
  bad.dt = 1e-9;
  bad.qubit_drive = {amp};
  CHECK_THROWS_AS(dynamics::evolve(rho0, device, bad, JumpSet{}), ConfigError);
}

TEST_CASE("idealized sequence reproduces the displaced-parity closed forms") {
  const DeviceParams device;
  SequenceOptions opts;
  opts.instant_operations = true;

  // Displaced Fock states: parity (-1)^n e^{-2|a|^2} L_n(4|a|^2).
  for (int n = 0; n <= 4; ++n) {
    for (const Complex alpha : {Complex(0.0, 0.0), Complex(0.7, 0.0), Complex(-0.4, 0.9),
                                Complex(1.2, -0.5)}) {
      const double x =
          dynamics::parity_map_sequence(fock_state(n, 6), device, alpha, opts);
      const double a2 = std::norm(alpha);
      const double expected = ((n % 2 == 0) ? 1.0 : -1.0) * std::exp(-2.0 * a2) *
                              laguerre(n, 4.0 * a2);
      CHECK(std::abs(x - expected) < 1e-9);
    }
  }

  // Coherent input |b> displaced by a has parity e^{-2|b + a|^2}.
  const Complex beta(0.6, -0.3);
  const fock::DensityMatrix coh(
      [&] {
        const ComplexVector v = fock::coherent_state(beta, 12);
        return ComplexMatrix(v * v.adjoint());
      }());
  for (const Complex alpha : {Complex(0.2, 0.1), Complex(-0.6, 0.3)}) {
    const double x = dynamics::parity_map_sequence(coh, device, alpha, opts);
    CHECK(std::abs(x - std::exp(-2.0 * std::norm(beta + alpha))) < 1e-8);
  }
}

TEST_CASE("finite sequence on vacuum with no displacement returns plus one") {
  const DeviceParams device;
  SequenceOptions opts;
  opts.noise = false;
  const double x = dynamics::parity_map_sequence(fock_state(0, 2), device, 0.0, opts);
  CHECK(std::abs(x - 1.0) < 1e-6);
}

TEST_CASE("finite sequence approximates parity on low Fock states") {
  const DeviceParams device;
  SequenceOptions opts;
  opts.noise = false;
  opts.pi2_amplitude = dynamics::calibrate_pi2(device, opts.timing.t_pulse, 2 + opts.guard_levels);
  const double x1 = dynamics::parity_map_sequence(fock_state(1, 2), device, 0.0, opts);
  CHECK(x1 < -0.97);
  CHECK(x1 >= -1.0 - 1e-9);
}

TEST_CASE("pulse-based displacement tracks the ideal map at moderate amplitude") {
  const DeviceParams device;
  SequenceOptions ideal;
  ideal.instant_operations = true;
  SequenceOptions finite;
  finite.noise = false;
  finite.pi2_amplitude =
      dynamics::calibrate_pi2(device, finite.timing.t_pulse, 2 + finite.guard_levels);
  for (const Complex alpha : {Complex(0.5, 0.0), Complex(0.0, -0.8)}) {
    const double xi = dynamics::parity_map_sequence(fock_state(0, 2), device, alpha, ideal);
    const double xf = dynamics::parity_map_sequence(fock_state(0, 2), device, alpha, finite);
    CHECK(std::abs(xi - xf) < 0.05);
  }
}

TEST_CASE("sequence output always stays inside the observable range") {
  const DeviceParams device;
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  SequenceOptions opts;
  opts.pi2_amplitude = dynamics::calibrate_pi2(device, opts.timing.t_pulse, 3 + opts.guard_levels);
  for (int trial = 0; trial < 4; ++trial) {
    const fock::DensityMatrix rho = fock::random_density_matrix(3, rng);
    const Complex alpha(unit(rng), unit(rng));
    const double x = dynamics::parity_map_sequence(rho, device, alpha, opts);
    CHECK(x <= 1.0 + 1e-9);
    CHECK(x >= -1.0 - 1e-9);
  }
}

TEST_CASE("longer dephasing times shrink the gap to the decoherence-free sequence") {
  // The coherent pulse and wait systematics are independent of T_qphi, so
  // the clean reference is the same finite sequence with decoherence off;
  // against it the gap must fall monotonically as T_qphi grows.
  const DeviceParams device;
  const auto states = d3_states();
  const std::vector<Complex> alphas = {Complex(0.3, 0.2),  Complex(-0.9, 0.1),
                                       Complex(0.0, -0.7), Complex(1.1, 0.6),
                                       Complex(-0.4, -1.0), Complex(0.8, -0.3)};
  const Complex amp = dynamics::calibrate_pi2(device, dynamics::SequenceTiming{}.t_pulse, 3 + 4);

  std::vector<std::vector<double>> x_noisy;
  std::vector<double> x_clean;
  for (const double t_phi : {5e-6, 15e-6, 100e-6}) {
    DeviceParams mod = device;
    mod.T_qphi = t_phi;
    SequenceOptions noisy;
    noisy.pi2_amplitude = amp;
    std::vector<double> xs;
    for (const auto& rho : states)
      for (const Complex alpha : alphas)
        xs.push_back(dynamics::parity_map_sequence(rho, mod, alpha, noisy));
    x_noisy.push_back(std::move(xs));
  }
  SequenceOptions clean_opts;
  clean_opts.noise = false;
  clean_opts.pi2_amplitude = amp;
  for (const auto& rho : states)
    for (const Complex alpha : alphas)
      x_clean.push_back(dynamics::parity_map_sequence(rho, device, alpha, clean_opts));

  std::vector<double> gaps;
  for (const auto& xs : x_noisy) {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) total += std::abs(xs[i] - x_clean[i]);
    gaps.push_back(total / xs.size());
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
  CHECK(gaps[2] > 0.0);

  // Against the instantaneous-parity map the residual is the coherent
  // systematic floor; it stays modest at the device defaults.
  SequenceOptions ideal;
  ideal.instant_operations = true;
  double floor_gap = 0.0;
  std::size_t i = 0;
  for (const auto& rho : states)
    for (const Complex alpha : alphas)
      floor_gap += std::abs(x_clean[i++] - dynamics::parity_map_sequence(rho, device, alpha, ideal));
  floor_gap /= x_clean.size();
  CHECK(floor_gap < 0.12);
}

TEST_CASE("sampling is deterministic, consistent and unbiased") {
  const dynamics::ReadoutErrorModel clean;
  const dynamics::ReadoutErrorModel noisy{0.02, 0.02};

  const auto exact = dynamics::sample_observable(0.37, 0, clean, 12345);
  CHECK(exact.estimate == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(exact.excited_count == -1);

  // Symmetric assignment errors shrink the expectation by 1 - 2 p.
  const auto shrunk = dynamics::sample_observable(1.0, 0, noisy, 1);
  CHECK(shrunk.estimate == doctest::Approx(0.96).epsilon(1e-12));
  const auto shrunk2 = dynamics::sample_observable(-0.5, 0, noisy, 1);
  CHECK(shrunk2.estimate == doctest::Approx(-0.48).epsilon(1e-12));

  const auto a = dynamics::sample_observable(0.2, 500, clean, 777);
  const auto b = dynamics::sample_observable(0.2, 500, clean, 777);
  CHECK(a.excited_count == b.excited_count);
  CHECK(a.estimate ==
        1.0 - 2.0 * static_cast<double>(a.excited_count) / static_cast<double>(a.shots));

  double mean = 0.0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r)
    mean += dynamics::sample_observable(0.3, 200, clean, mix_seed(9, r)).estimate;
  mean /= reps;
  CHECK(std::abs(mean - 0.3) < 0.01);
}

TEST_CASE("sampling validates its inputs") {
  const dynamics::ReadoutErrorModel clean;
  CHECK_THROWS_AS(dynamics::sample_observable(0.0, -1, clean, 0), ConfigError);
  dynamics::ReadoutErrorModel bad;
  bad.p_e_given_g = 1.5;
  CHECK_THROWS_AS(dynamics::sample_observable(0.0, 10, bad, 0), ConfigError);
}

TEST_CASE("partial traces recover tensor factors") {
  std::mt19937_64 rng(5);
  const ComplexMatrix q = fock::random_density_matrix(2, rng).matrix();
  const ComplexMatrix c = fock::random_density_matrix(5, rng).matrix();
  const ComplexMatrix joint = dynamics::kron(q, c);
  CHECK((dynamics::qubit_reduced(joint, 5) - q).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((dynamics::cavity_reduced(joint, 5) - c).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(dynamics::excited_population(joint, 5) - q(1, 1).real()) < 1e-13);
}
