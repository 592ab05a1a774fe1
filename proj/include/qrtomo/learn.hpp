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
#include <string>
#include <vector>

#include "qrtomo/design.hpp"
#include "qrtomo/dynamics.hpp"
#include "qrtomo/fock.hpp"
#include "qrtomo/types.hpp"

namespace qrtomo::learn {

/// Idle-window dissipation scale giving ~0.97 mean preparation fidelity
/// over the D=6 training set (calibrated once; see degrade_state).
inline constexpr double kDefaultDegradeStrength = 6.0;

/// Training data: parameter vectors of the prepared states and the measured
/// observables, plus the raw records for bootstrap resampling.
struct TrainingSet {
  int dim = 0;
  std::vector<Complex> alphas;
  std::vector<RealVector> ys;
  std::vector<RealVector> xs;
  std::vector<std::vector<dynamics::MeasurementRecord>> records;
  std::string provenance;  // "ideal" | "simulated-noisy"

  int n_states() const { return static_cast<int>(ys.size()); }
  void validate() const;
};

/// The D Fock states followed by (|l> + e^{i phi}|m>)/sqrt(2) for l < m in
/// row-major pair order, phi = 0 then pi/2: exactly D^2 pure states.
std::vector<fock::DensityMatrix> training_states(int dim);

/// Preparation imperfection: idle the state for 2 us under the device
/// dissipators with all rates scaled by `strength`.
fock::DensityMatrix degrade_state(const fock::DensityMatrix& rho,
                                  const dynamics::DeviceParams& device, double strength);

struct AcquireOptions {
  long shots = 1000;               // 0 = expectation values
  bool noise = true;               // decoherence during the sequence
  bool finite_pulses = true;       // false = instantaneous idealized operations
  bool ideal_displacement = false;
  bool degrade = true;             // preparation imperfection
  double degrade_strength = kDefaultDegradeStrength;
  dynamics::ReadoutErrorModel readout{0.02, 0.02};
  int guard_levels = 4;
  int sim_dim = 0;                 // 0 = state dim + guard_levels
  Complex pi2_amplitude = 0.0;     // 0 = calibrate per call
  std::uint64_t seed = 0;
};

/// Runs the parity-map sequence for one prepared state over every
/// displacement and samples each observable; record seeds derive from
/// (opts.seed, state_tag, k).
std::vector<dynamics::MeasurementRecord> measure_state(const fock::DensityMatrix& rho,
                                                       const std::vector<Complex>& alphas,
                                                       const dynamics::DeviceParams& device,
                                                       const AcquireOptions& opts,
                                                       std::uint64_t state_tag);

RealVector records_to_x(const std::vector<dynamics::MeasurementRecord>& records);

/// Full training acquisition: degrade (optionally), extract Y from the
/// prepared density matrix, measure all observables.
TrainingSet acquire_training_set(int dim, const std::vector<Complex>& alphas,
                                 const dynamics::DeviceParams& device,
                                 const AcquireOptions& opts);

/// beta_L = X Ytilde^T (Ytilde Ytilde^T + nu I)^-1 with Ytilde_n = [1; Y_n]
/// stacked as columns. Throws on a singular normal matrix when nu = 0.
design::AffineMap ridge_fit(const TrainingSet& ts, double nu);

inline const std::vector<double> kDefaultNuGrid = {0.0, 1e-8, 1e-6, 1e-4, 1e-2};

/// k-fold cross-validated observable MSE over the grid; folds that make the
/// normal matrix singular score infinity; ties resolve to the smaller nu.
double select_nu(const TrainingSet& ts, const std::vector<double>& grid = kDefaultNuGrid,
                 int folds = 4, std::uint64_t seed = 0);

/// Element-wise mean square difference over the full [V, M] block.
double map_mse(const design::AffineMap& a, const design::AffineMap& b);

/// Mean of squared residuals (X - beta [1; Y])_j over the observables.
double observable_mse(const RealVector& x, const design::AffineMap& beta, const RealVector& y);
RealVector per_observable_errors(const RealVector& x, const design::AffineMap& beta,
                                 const RealVector& y);

struct Perturbation {
  double chi_rel = 0.02;         // relative error on chi_cq
  double higher_order_rel = 0.5; // relative error on chi_cc and chi_cq_prime
  int chi_sign = 1;
  int higher_sign = 1;
};

dynamics::DeviceParams perturb_device(const dynamics::DeviceParams& device,
                                      const Perturbation& pert);

/// The experimenter's model-based map: expectation-value acquisition on the
/// perturbed device through the same pipeline, then ridge with select_nu.
design::AffineMap simulated_map(int dim, const std::vector<Complex>& alphas,
                                const dynamics::DeviceParams& device, const Perturbation& pert,
                                const AcquireOptions& opts);

struct ProcessMap {
  ComplexMatrix m_prime;  // M K^+, acts on vec(rho)
  RealVector offset;      // V - Re(M K^+ C)
  RealVector predict(const ComplexVector& vec_rho) const {
    return (m_prime * vec_rho).real() + offset;
  }
};

ProcessMap process_map(const design::AffineMap& beta, const fock::Parametrization& par);

struct DynamicsMap {
  RealMatrix phi;
  RealVector q;
};

/// Fits Gamma, R on {Y_n -> X_t,n} pairs, then Phi = M^+ Gamma and
/// Q = M^+ (R - V) through the known map.
DynamicsMap learn_dynamics_map(const design::AffineMap& known_beta, const TrainingSet& pairs);

}  // namespace qrtomo::learn
