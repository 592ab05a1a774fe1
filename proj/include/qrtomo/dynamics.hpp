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

#pragma once

#include <cstdint>
#include <vector>

#include "qrtomo/fock.hpp"
#include "qrtomo/types.hpp"

namespace qrtomo::dynamics {

/// Device frequencies/couplings in Hz (cycles, i.e. the value of x/2pi) and
/// decoherence times in seconds. Defaults hold the characterised values of
/// the qubit-cavity device the simulator models.
struct DeviceParams {
  double omega_q = 5.277e9;
  double omega_c = 4.587e9;
  double omega_r = 7.617e9;
  double chi_qq = 175.3e6;
  double chi_cc = 6e3;
  double chi_cq = 1.423e6;
  double chi_qr = 0.64e6;
  double chi_cr = 2e3;
  double chi_cq_prime = 16e3;
  double T_q1 = 85e-6;
  double T_qphi = 15e-6;
  double T_c1 = 1e-3;
  double T_r1 = 2.1e-6;

  void validate() const;
};

/// Piecewise-constant drive envelopes, one complex amplitude (rad/s) per
/// step of length dt for the qubit and cavity drives.
struct PulseSchedule {
  double dt = 0.0;
  std::vector<Complex> qubit_drive;
  std::vector<Complex> cavity_drive;
};

/// Collapse operators on the joint qubit (x) cavity space with the rates
/// already folded into the operator normalization.
struct JumpSet {
  std::vector<ComplexMatrix> ops;
  bool empty() const { return ops.empty(); }
};

/// Readout assignment-error probabilities. Synthetic defaults; the learnt
/// map is expected to absorb them.
struct ReadoutErrorModel {
  double p_e_given_g = 0.0;
  double p_g_given_e = 0.0;
};

/// One sampled observable: the displacement index, the shot count, the
/// uncorrected estimate X = -(2 f_excited - 1), and the RNG seed that
/// produced it. excited_count = -1 flags an expectation-value record.
struct MeasurementRecord {
  int displacement_index = 0;
  long shots = 0;
  double estimate = 0.0;
  std::uint64_t seed = 0;
  long excited_count = -1;
};

// Qubit operators in the (g, e) basis; sigma_z = |e><e| - |g><g| so that
// the parity observable reads X = -<sigma_z> = 1 - 2 p_excited.
ComplexMatrix qubit_lower();
ComplexMatrix qubit_raise();
ComplexMatrix qubit_sigma_z();
ComplexMatrix qubit_excited_projector();

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Joint qubit(2) (x) cavity(cavity_dim) Hamiltonian in rad/s, in the frame
/// rotating at the drive frequencies: dispersive shift, second-order
/// dispersive shift, cavity self-Kerr, and the two drive terms. The readout
/// resonator stays in vacuum and is omitted.
ComplexMatrix build_joint_hamiltonian(const DeviceParams& device, Complex eps_q,
                                      Complex eps_c, int cavity_dim);

/// Qubit energy decay, qubit dephasing and cavity energy decay. rate_scale
/// multiplies all three rates (1 = physical).
JumpSet build_jumps(const DeviceParams& device, int cavity_dim, double rate_scale = 1.0);

/// One RK4 application of the master equation d rho/dt = -i[H, rho] +
/// sum_m (J rho J^dag - {J^dag J, rho}/2). Subdivides internally until
/// ||H||_inf * dt < 0.2, re-Hermitizes the output and throws on trace
/// drift beyond 1e-8.
ComplexMatrix lindblad_step(const ComplexMatrix& rho, const ComplexMatrix& H,
                            const JumpSet& jumps, double dt);

/// Integrates the schedule segment by segment on the joint space.
fock::DensityMatrix evolve(const fock::DensityMatrix& rho_joint, const DeviceParams& device,
                           const PulseSchedule& schedule, const JumpSet& jumps);

/// Constant qubit-drive amplitude that rotates |g> by pi/2 about the y axis
/// in the given duration (decoherence off), found by bisection on the final
/// <sigma_z>. Returns i*A with A > 0.
Complex calibrate_pi2(const DeviceParams& device, double duration, int cavity_dim);

struct SequenceTiming {
  double t_pulse = 64e-9;
  double t_wait = 284e-9;   // hardware-calibrated wait; pi/chi is ~351 ns
  double t_displace = 100e-9;
};

struct SequenceOptions {
  bool noise = true;
  bool ideal_displacement = false;
  /// Idealized limit: instantaneous pi/2 rotations and an exact conditional
  /// phase instead of timed evolution; decoherence does not act.
  bool instant_operations = false;
  SequenceTiming timing{};
  int guard_levels = 4;
  /// Simulation dimension of the cavity; 0 selects rho.dim() + guard_levels.
  int sim_dim = 0;
  /// Precomputed calibrate_pi2 output; 0 triggers calibration on the fly.
  Complex pi2_amplitude = 0.0;
};

/// Displacement followed by the pi/2 - wait - pi/2 parity mapping; returns
/// X = -<sigma_z> of the final qubit state. In the idealized limit this
/// equals tr(P D rho D^dag) of the input state.
double parity_map_sequence(const fock::DensityMatrix& rho_cavity, const DeviceParams& device,
                           Complex alpha, const SequenceOptions& opts);

/// Binomial sampling of an observable with assignment errors applied to the
/// excited-state probability and no correction on the way back.
/// shots = 0 returns the corrupted expectation value itself.
MeasurementRecord sample_observable(double x_true, long shots, const ReadoutErrorModel& readout,
                                    std::uint64_t seed, int displacement_index = 0);

double excited_population(const ComplexMatrix& joint, int cavity_dim);
ComplexMatrix qubit_reduced(const ComplexMatrix& joint, int cavity_dim);
ComplexMatrix cavity_reduced(const ComplexMatrix& joint, int cavity_dim);

}  // namespace qrtomo::dynamics
