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

#include "qrtomo/dynamics.hpp"

#include <cmath>
#include <random>

namespace qrtomo::dynamics {
namespace {

constexpr double kDtPulse = 0.5e-9;
constexpr double kDtIdle = 2e-9;
constexpr double kHdtCap = 0.19;
constexpr double kTraceDriftTol = 1e-8;

// Jump operators plus the precomputed anticommutator part sum_m J^dag J.
struct Dissipator {
  std::vector<ComplexMatrix> ops;
  ComplexMatrix jdj_sum;

  explicit Dissipator(const JumpSet& jumps, int dim)
      : ops(jumps.ops), jdj_sum(ComplexMatrix::Zero(dim, dim)) {
    for (const auto& j : ops) jdj_sum += j.adjoint() * j;
  }
};

ComplexMatrix master_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, const Dissipator& d) {
  ComplexMatrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
  if (!d.ops.empty()) {
    out.noalias() -= 0.5 * (d.jdj_sum * rho + rho * d.jdj_sum);
    for (const auto& j : d.ops) out.noalias() += j * rho * j.adjoint();
  }
  return out;
}

void rk4_step(ComplexMatrix& rho, const ComplexMatrix& h, const Dissipator& d, double dt) {
  const ComplexMatrix k1 = master_rhs(rho, h, d);
  const ComplexMatrix k2 = master_rhs(rho + (0.5 * dt) * k1, h, d);
  const ComplexMatrix k3 = master_rhs(rho + (0.5 * dt) * k2, h, d);
  const ComplexMatrix k4 = master_rhs(rho + dt * k3, h, d);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  rho = ComplexMatrix(0.5 * (rho + rho.adjoint()));
}

double inf_norm(const ComplexMatrix& h) { return h.cwiseAbs().rowwise().sum().maxCoeff(); }

// Fixed-H integration over `duration` with uniform substeps no longer than
// dt_cap and short enough that ||H|| dt stays below the RK4 budget.
void integrate_segment(ComplexMatrix& rho, const ComplexMatrix& h, const Dissipator& d,
                       double duration, double dt_cap) {
  if (duration <= 0.0) return;
  const double hnorm = inf_norm(h);
  double dt_max = dt_cap;
  if (hnorm > 0.0) dt_max = std::min(dt_max, kHdtCap / hnorm);
  const int steps = static_cast<int>(std::ceil(duration / dt_max));
  const double dt = duration / steps;
  const double trace_in = rho.trace().real();
  for (int s = 0; s < steps; ++s) rk4_step(rho, h, d, dt);
  if (std::abs(rho.trace().real() - trace_in) > kTraceDriftTol)
    throw NumericalError("integrate_segment: trace drift exceeds tolerance");
}

ComplexMatrix qubit_identity() { return ComplexMatrix::Identity(2, 2); }

}  // namespace

void DeviceParams::validate() const {
  if (T_q1 <= 0.0 || T_qphi <= 0.0 || T_c1 <= 0.0 || T_r1 <= 0.0)
    throw ConfigError("DeviceParams: decoherence times must be positive");
  if (omega_q <= 0.0 || omega_c <= 0.0 || omega_r <= 0.0)
    throw ConfigError("DeviceParams: mode frequencies must be positive");
}

ComplexMatrix qubit_lower() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix qubit_raise() { return qubit_lower().adjoint(); }

ComplexMatrix qubit_sigma_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

ComplexMatrix qubit_excited_projector() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix build_joint_hamiltonian(const DeviceParams& device, Complex eps_q, Complex eps_c,
                                      int cavity_dim) {
  if (cavity_dim < 1) throw ConfigError("build_joint_hamiltonian: cavity_dim must be >= 1");
  const ComplexMatrix a = fock::annihilation(cavity_dim);
  const ComplexMatrix n = fock::number_operator(cavity_dim);
  const ComplexMatrix kerr = a.adjoint() * a.adjoint() * a * a;
  const ComplexMatrix id_c = ComplexMatrix::Identity(cavity_dim, cavity_dim);
  const ComplexMatrix ee = qubit_excited_projector();

  ComplexMatrix h = -kTwoPi * device.chi_cq * kron(ee, n);
  h -= kTwoPi * device.chi_cq_prime * kron(ee, kerr);
  h -= 0.5 * kTwoPi * device.chi_cc * kron(qubit_identity(), kerr);
  h += eps_q * kron(qubit_lower(), id_c) + std::conj(eps_q) * kron(qubit_raise(), id_c);
  h += eps_c * kron(qubit_identity(), a) + std::conj(eps_c) * kron(qubit_identity(), a.adjoint());
  return h;
}

JumpSet build_jumps(const DeviceParams& device, int cavity_dim, double rate_scale) {
  if (rate_scale < 0.0) throw ConfigError("build_jumps: rate_scale must be >= 0");
  device.validate();
  JumpSet jumps;
  if (rate_scale == 0.0) return jumps;
  const ComplexMatrix id_c = ComplexMatrix::Identity(cavity_dim, cavity_dim);
  jumps.ops.push_back(std::sqrt(rate_scale / device.T_q1) * kron(qubit_lower(), id_c));
  jumps.ops.push_back(std::sqrt(2.0 * rate_scale / device.T_qphi) *
                      kron(qubit_excited_projector(), id_c));
  jumps.ops.push_back(std::sqrt(rate_scale / device.T_c1) *
                      kron(qubit_identity(), fock::annihilation(cavity_dim)));
  return jumps;
}

ComplexMatrix lindblad_step(const ComplexMatrix& rho, const ComplexMatrix& H, const JumpSet& jumps,
                            double dt) {
  if (rho.rows() != rho.cols() || rho.rows() != H.rows() || H.rows() != H.cols())
    throw ConfigError("lindblad_step: dimension mismatch");
  if (dt <= 0.0) throw ConfigError("lindblad_step: dt must be positive");
  Dissipator d(jumps, static_cast<int>(rho.rows()));
  ComplexMatrix out = rho;
  integrate_segment(out, H, d, dt, dt);
  return out;
}

fock::DensityMatrix evolve(const fock::DensityMatrix& rho_joint, const DeviceParams& device,
                           const PulseSchedule& schedule, const JumpSet& jumps) {
  const int joint_dim = rho_joint.dim();
  if (joint_dim % 2 != 0) throw ConfigError("evolve: joint dimension must be 2 * cavity_dim");
  const int cavity_dim = joint_dim / 2;
  if (schedule.qubit_drive.size() != schedule.cavity_drive.size())
    throw ConfigError("evolve: drive arrays must have equal length");
  if (!schedule.qubit_drive.empty() && schedule.dt <= 0.0)
    throw ConfigError("evolve: dt must be positive for a non-empty schedule");

  ComplexMatrix rho = rho_joint.matrix();
  Dissipator d(jumps, joint_dim);
  const ComplexMatrix h0 = build_joint_hamiltonian(device, 0.0, 0.0, cavity_dim);
  const ComplexMatrix mq = kron(qubit_lower(), ComplexMatrix::Identity(cavity_dim, cavity_dim));
  const ComplexMatrix mc =
      kron(qubit_identity(), ComplexMatrix(fock::annihilation(cavity_dim)));

  for (std::size_t i = 0; i < schedule.qubit_drive.size(); ++i) {
    const Complex eq = schedule.qubit_drive[i];
    const Complex ec = schedule.cavity_drive[i];
    ComplexMatrix h = h0;
    if (eq != 0.0) h += eq * mq + std::conj(eq) * mq.adjoint();
    if (ec != 0.0) h += ec * mc + std::conj(ec) * mc.adjoint();
    const bool driven = eq != 0.0 || ec != 0.0;
    const double cap = std::min(schedule.dt, driven ? kDtPulse : kDtIdle);
    integrate_segment(rho, h, d, schedule.dt, cap);
  }
  return fock::DensityMatrix(rho);
}

Complex calibrate_pi2(const DeviceParams& device, double duration, int cavity_dim) {
  if (duration <= 0.0) throw ConfigError("calibrate_pi2: duration must be positive");
  const int joint_dim = 2 * cavity_dim;
  ComplexMatrix rho0 = ComplexMatrix::Zero(joint_dim, joint_dim);
  rho0(0, 0) = 1.0;  // |g, 0>
  const Dissipator none(JumpSet{}, joint_dim);

  const auto final_sigma_z = [&](double amp) {
    const ComplexMatrix h = build_joint_hamiltonian(device, Complex(0.0, amp), 0.0, cavity_dim);
    ComplexMatrix rho = rho0;
    integrate_segment(rho, h, none, duration, kDtPulse);
    return 2.0 * excited_population(rho, cavity_dim) - 1.0;
  };

  // <sigma_z>(A) = -cos(2 A t) rises through zero at A = (pi/2) / (2 t).
  const double a0 = (kPi / 2.0) / (2.0 * duration);
  double lo = 0.5 * a0;
  double hi = 1.5 * a0;
  if (final_sigma_z(lo) > 0.0 || final_sigma_z(hi) < 0.0)
    throw NumericalError("calibrate_pi2: bisection bracket invalid");
  double mid = a0;
  double f = final_sigma_z(mid);
  int iter = 0;
  while (std::abs(f) > 1e-7) {
    if (++iter > 100) throw NumericalError("calibrate_pi2: bisection failed to converge");
    (f < 0.0 ? lo : hi) = mid;
    mid = 0.5 * (lo + hi);
    f = final_sigma_z(mid);
  }
  return Complex(0.0, mid);
}

double parity_map_sequence(const fock::DensityMatrix& rho_cavity, const DeviceParams& device,
                           Complex alpha, const SequenceOptions& opts) {
  const int d_in = rho_cavity.dim();

  if (opts.instant_operations) {
    // Exact algebra on a padded space: X = tr(P D rho D^dag).
    const int work = d_in + fock::default_displacement_pad(alpha);
    const ComplexMatrix rho_c = fock::embed_state(rho_cavity, work).matrix();
    const ComplexMatrix dop = fock::displacement(alpha, work);
    const ComplexMatrix displaced = dop * rho_c * dop.adjoint();
    ComplexMatrix u1(2, 2), u2(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u1 << s, s, -s, s;   // exp(+i (pi/4) sigma_y)
    u2 << s, -s, s, s;   // exp(-i (pi/4) sigma_y)
    const ComplexMatrix id_c = ComplexMatrix::Identity(work, work);
    ComplexMatrix cphase = ComplexMatrix::Zero(2 * work, 2 * work);
    cphase.topLeftCorner(work, work) = id_c;
    cphase.bottomRightCorner(work, work) = ComplexMatrix(fock::parity(work));
    const ComplexMatrix u = kron(u2, id_c) * cphase * kron(u1, id_c);
    ComplexMatrix joint = ComplexMatrix::Zero(2 * work, 2 * work);
    joint.topLeftCorner(work, work) = displaced;
    joint = u * joint * u.adjoint();
    return 1.0 - 2.0 * excited_population(joint, work);
  }

  const int sdim = opts.sim_dim > 0 ? opts.sim_dim : d_in + opts.guard_levels;
  if (d_in > sdim)
    throw ConfigError("parity_map_sequence: state dimension exceeds simulation dimension");
  ComplexMatrix rho_c = fock::embed_state(rho_cavity, sdim).matrix();

  const Complex amp =
      opts.pi2_amplitude != 0.0 ? opts.pi2_amplitude
                                : calibrate_pi2(device, opts.timing.t_pulse, sdim);
  const Dissipator d(opts.noise ? build_jumps(device, sdim) : JumpSet{}, 2 * sdim);
  const ComplexMatrix h0 = build_joint_hamiltonian(device, 0.0, 0.0, sdim);

  if (opts.ideal_displacement) {
    const ComplexMatrix dop = fock::displacement(alpha, sdim);
    rho_c = dop * rho_c * dop.adjoint();
  }

  ComplexMatrix joint = ComplexMatrix::Zero(2 * sdim, 2 * sdim);
  joint.topLeftCorner(sdim, sdim) = rho_c;

  if (!opts.ideal_displacement) {
    const Complex eps_c = Complex(0.0, -1.0) * std::conj(alpha) / opts.timing.t_displace;
    const ComplexMatrix h = build_joint_hamiltonian(device, 0.0, eps_c, sdim);
    integrate_segment(joint, h, d, opts.timing.t_displace, kDtPulse);
  }

  const ComplexMatrix h_plus = build_joint_hamiltonian(device, amp, 0.0, sdim);
  const ComplexMatrix h_minus = build_joint_hamiltonian(device, -amp, 0.0, sdim);
  integrate_segment(joint, h_plus, d, opts.timing.t_pulse, kDtPulse);
  integrate_segment(joint, h0, d, opts.timing.t_wait, kDtIdle);
  integrate_segment(joint, h_minus, d, opts.timing.t_pulse, kDtPulse);

  return 1.0 - 2.0 * excited_population(joint, sdim);
}

MeasurementRecord sample_observable(double x_true, long shots, const ReadoutErrorModel& readout,
                                    std::uint64_t seed, int displacement_index) {
  if (readout.p_e_given_g < 0.0 || readout.p_e_given_g > 1.0 || readout.p_g_given_e < 0.0 ||
      readout.p_g_given_e > 1.0)
    throw ConfigError("sample_observable: assignment probabilities must lie in [0, 1]");
  if (shots < 0) throw ConfigError("sample_observable: shots must be >= 0");

  double p_exc = 0.5 * (1.0 - x_true);
  p_exc = std::min(1.0, std::max(0.0, p_exc));
  const double p_obs = p_exc * (1.0 - readout.p_g_given_e) + (1.0 - p_exc) * readout.p_e_given_g;

  MeasurementRecord rec;
  rec.displacement_index = displacement_index;
  rec.shots = shots;
  rec.seed = seed;
  if (shots == 0) {
    rec.estimate = 1.0 - 2.0 * p_obs;
    rec.excited_count = -1;
    return rec;
  }
  std::mt19937_64 rng(seed);
  std::binomial_distribution<long> dist(shots, p_obs);
  rec.excited_count = dist(rng);
  rec.estimate = 1.0 - 2.0 * static_cast<double>(rec.excited_count) / static_cast<double>(shots);
  return rec;
}

double excited_population(const ComplexMatrix& joint, int cavity_dim) {
  return joint.block(cavity_dim, cavity_dim, cavity_dim, cavity_dim).trace().real();
}

ComplexMatrix qubit_reduced(const ComplexMatrix& joint, int cavity_dim) {
  ComplexMatrix q = ComplexMatrix::Zero(2, 2);
  for (int p = 0; p < 2; ++p)
    for (int r = 0; r < 2; ++r)
      q(p, r) = joint.block(p * cavity_dim, r * cavity_dim, cavity_dim, cavity_dim).trace();
  return q;
}

ComplexMatrix cavity_reduced(const ComplexMatrix& joint, int cavity_dim) {
  return joint.topLeftCorner(cavity_dim, cavity_dim) +
         joint.block(cavity_dim, cavity_dim, cavity_dim, cavity_dim);
}

}  // namespace qrtomo::dynamics
