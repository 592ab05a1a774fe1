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

#include "qrtomo/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace qrtomo::learn {
namespace {

constexpr double kDegradeWindow = 2e-6;
constexpr int kDegradeSteps = 200;
constexpr double kRidgeSingularFloor = 1e-12;

}  // namespace

void TrainingSet::validate() const {
  if (dim < 2) throw ConfigError("TrainingSet: dim must be >= 2");
  if (ys.empty() || ys.size() != xs.size())
    throw ConfigError("TrainingSet: Y/X entry counts differ or are empty");
  const Eigen::Index ny = static_cast<Eigen::Index>(dim) * dim - 1;
  const Eigen::Index nx = xs.front().size();
  for (const auto& y : ys)
    if (y.size() != ny) throw ConfigError("TrainingSet: Y length must be D^2-1");
  for (const auto& x : xs) {
    if (x.size() != nx) throw ConfigError("TrainingSet: ragged X entries");
    if (x.cwiseAbs().maxCoeff() > 1.0 + 1e-9)
      throw ConfigError("TrainingSet: observable outside [-1, 1]");
  }
  if (!records.empty() && records.size() != ys.size())
    throw ConfigError("TrainingSet: record batch count mismatch");
}

std::vector<fock::DensityMatrix> training_states(int dim) {
  if (dim < 2) throw ConfigError("training_states: dim must be >= 2");
  std::vector<fock::DensityMatrix> states;
  states.reserve(static_cast<std::size_t>(dim) * dim);
  for (int n = 0; n < dim; ++n) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    rho(n, n) = 1.0;
    states.emplace_back(rho);
  }
  for (int l = 0; l < dim; ++l)
    for (int m = l + 1; m < dim; ++m)
      for (const double phi : {0.0, kPi / 2.0}) {
        ComplexVector psi = ComplexVector::Zero(dim);
        psi(l) = 1.0 / std::sqrt(2.0);
        psi(m) = std::exp(Complex(0.0, phi)) / std::sqrt(2.0);
        states.emplace_back(ComplexMatrix(psi * psi.adjoint()));
      }
  return states;
}

fock::DensityMatrix degrade_state(const fock::DensityMatrix& rho,
                                  const dynamics::DeviceParams& device, double strength) {
  if (strength < 0.0) throw ConfigError("degrade_state: strength must be >= 0");
  if (strength == 0.0) return rho;
  const int d = rho.dim();
  ComplexMatrix joint = dynamics::kron(ComplexMatrix::Identity(2, 2), rho.matrix());
  joint.bottomRightCorner(d, d).setZero();  // qubit in |g>
  const dynamics::JumpSet jumps = dynamics::build_jumps(device, d, strength);
  const ComplexMatrix h = ComplexMatrix::Zero(2 * d, 2 * d);
  const double dt = kDegradeWindow / kDegradeSteps;
  for (int s = 0; s < kDegradeSteps; ++s) joint = dynamics::lindblad_step(joint, h, jumps, dt);
  return fock::DensityMatrix(dynamics::cavity_reduced(joint, d));
}

std::vector<dynamics::MeasurementRecord> measure_state(const fock::DensityMatrix& rho,
                                                       const std::vector<Complex>& alphas,
                                                       const dynamics::DeviceParams& device,
                                                       const AcquireOptions& opts,
                                                       std::uint64_t state_tag) {
  dynamics::SequenceOptions seq;
  seq.noise = opts.noise;
  seq.ideal_displacement = opts.ideal_displacement;
  seq.instant_operations = !opts.finite_pulses;
  seq.guard_levels = opts.guard_levels;
  seq.sim_dim = opts.sim_dim;
  seq.pi2_amplitude = opts.pi2_amplitude;
  if (opts.finite_pulses && seq.pi2_amplitude == 0.0) {
    const int sdim = opts.sim_dim > 0 ? opts.sim_dim : rho.dim() + opts.guard_levels;
    seq.pi2_amplitude = dynamics::calibrate_pi2(device, seq.timing.t_pulse, sdim);
  }

  std::vector<dynamics::MeasurementRecord> records;
  records.reserve(alphas.size());
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const double x_true = dynamics::parity_map_sequence(rho, device, alphas[k], seq);
    const std::uint64_t seed =
        mix_seed(opts.seed, 0x726563ULL, state_tag, static_cast<std::uint64_t>(k));
    records.push_back(dynamics::sample_observable(x_true, opts.shots, opts.readout, seed,
                                                  static_cast<int>(k)));
  }
  return records;
}

RealVector records_to_x(const std::vector<dynamics::MeasurementRecord>& records) {
  RealVector x(static_cast<Eigen::Index>(records.size()));
  for (std::size_t k = 0; k < records.size(); ++k)
    x(static_cast<Eigen::Index>(k)) = records[k].estimate;
  return x;
}

TrainingSet acquire_training_set(int dim, const std::vector<Complex>& alphas,
                                 const dynamics::DeviceParams& device,
                                 const AcquireOptions& opts) {
  const auto states = training_states(dim);

  AcquireOptions local = opts;
  if (opts.finite_pulses && local.pi2_amplitude == 0.0) {
    const int sdim = opts.sim_dim > 0 ? opts.sim_dim : dim + opts.guard_levels;
    local.pi2_amplitude = dynamics::calibrate_pi2(device, dynamics::SequenceTiming{}.t_pulse, sdim);
  }

  TrainingSet ts;
  ts.dim = dim;
  ts.alphas = alphas;
  const bool ideal =
      !opts.noise && !opts.finite_pulses && !opts.degrade && opts.shots == 0 &&
      opts.readout.p_e_given_g == 0.0 && opts.readout.p_g_given_e == 0.0;
  ts.provenance = ideal ? "ideal" : "simulated-noisy";

  for (std::size_t n = 0; n < states.size(); ++n) {
    const fock::DensityMatrix prepared =
        opts.degrade ? degrade_state(states[n], device, opts.degrade_strength) : states[n];
    ts.ys.push_back(fock::param_of(prepared.matrix()));
    ts.records.push_back(measure_state(prepared, alphas, device, local, n));
    ts.xs.push_back(records_to_x(ts.records.back()));
  }
  ts.validate();
  return ts;
}

design::AffineMap ridge_fit(const TrainingSet& ts, double nu) {
  ts.validate();
  if (nu < 0.0) throw ConfigError("ridge_fit: nu must be >= 0");
  const int n_tr = ts.n_states();
  const Eigen::Index d2 = static_cast<Eigen::Index>(ts.dim) * ts.dim;
  const Eigen::Index n_obs = ts.xs.front().size();

  RealMatrix ymat(d2, n_tr);
  RealMatrix xmat(n_obs, n_tr);
  for (int j = 0; j < n_tr; ++j) {
    ymat(0, j) = 1.0;
    ymat.col(j).tail(d2 - 1) = ts.ys[static_cast<std::size_t>(j)];
    xmat.col(j) = ts.xs[static_cast<std::size_t>(j)];
  }

  const RealMatrix gram = ymat * ymat.transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram);
  const double lmax = es.eigenvalues()(d2 - 1);
  if (nu == 0.0 && es.eigenvalues()(0) < kRidgeSingularFloor * lmax)
    throw NumericalError("ridge_fit: singular normal matrix at nu = 0 (N_tr = " +
                         std::to_string(n_tr) + ", need >= " + std::to_string(d2) + ")");

  const RealVector inv_eigs = (es.eigenvalues().array() + nu).inverse();
  const RealMatrix gram_inv =
      es.eigenvectors() * inv_eigs.asDiagonal() * es.eigenvectors().transpose();
  const RealMatrix beta = xmat * ymat.transpose() * gram_inv;

  design::AffineMap map;
  map.dim = ts.dim;
  map.V = beta.col(0);
  map.M = beta.rightCols(d2 - 1);
  map.provenance = design::MapProvenance::learnt;
  map.validate();
  return map;
}

double select_nu(const TrainingSet& ts, const std::vector<double>& grid, int folds,
                 std::uint64_t seed) {
  ts.validate();
  if (grid.empty()) throw ConfigError("select_nu: empty grid");
  if (folds < 2) throw ConfigError("select_nu: need at least 2 folds");
  const int n = ts.n_states();
  folds = std::min(folds, n);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(mix_seed(seed, 0x637666ULL));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());

  double best_nu = sorted.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (const double nu : sorted) {
    double score = 0.0;
    for (int f = 0; f < folds && std::isfinite(score); ++f) {
      TrainingSet train;
      train.dim = ts.dim;
      std::vector<int> held;
      for (int i = 0; i < n; ++i) {
        const int idx = order[static_cast<std::size_t>(i)];
        if (i % folds == f) {
          held.push_back(idx);
        } else {
          train.ys.push_back(ts.ys[static_cast<std::size_t>(idx)]);
          train.xs.push_back(ts.xs[static_cast<std::size_t>(idx)]);
        }
      }
      if (train.ys.empty() || held.empty()) continue;
      try {
        const design::AffineMap fit = ridge_fit(train, nu);
        double fold_mse = 0.0;
        for (const int idx : held)
          fold_mse += observable_mse(ts.xs[static_cast<std::size_t>(idx)], fit,
                                     ts.ys[static_cast<std::size_t>(idx)]);
        score += fold_mse / static_cast<double>(held.size());
      } catch (const NumericalError&) {
        score = std::numeric_limits<double>::infinity();
      }
    }
    if (score < best_score) {
      best_score = score;
      best_nu = nu;
    }
  }
  return best_nu;
}

double map_mse(const design::AffineMap& a, const design::AffineMap& b) {
  if (a.dim != b.dim || a.M.rows() != b.M.rows() || a.M.cols() != b.M.cols())
    throw ConfigError("map_mse: shape mismatch");
  const double sum = (a.V - b.V).squaredNorm() + (a.M - b.M).squaredNorm();
  return sum / static_cast<double>(a.V.size() + a.M.size());
}

RealVector per_observable_errors(const RealVector& x, const design::AffineMap& beta,
                                 const RealVector& y) {
  if (x.size() != beta.M.rows() || y.size() != beta.M.cols())
    throw ConfigError("observable errors: dimension mismatch");
  return (x - beta.predict(y)).array().square();
}

double observable_mse(const RealVector& x, const design::AffineMap& beta, const RealVector& y) {
  return per_observable_errors(x, beta, y).mean();
}

dynamics::DeviceParams perturb_device(const dynamics::DeviceParams& device,
                                      const Perturbation& pert) {
  dynamics::DeviceParams out = device;
  out.chi_cq *= 1.0 + pert.chi_sign * pert.chi_rel;
  out.chi_cc *= 1.0 + pert.higher_sign * pert.higher_order_rel;
  out.chi_cq_prime *= 1.0 + pert.higher_sign * pert.higher_order_rel;
  return out;
}

design::AffineMap simulated_map(int dim, const std::vector<Complex>& alphas,
                                const dynamics::DeviceParams& device, const Perturbation& pert,
                                const AcquireOptions& opts) {
  AcquireOptions local = opts;
  local.shots = 0;          // model-based expectation values
  local.pi2_amplitude = 0;  // recalibrate on the perturbed device
  const dynamics::DeviceParams model = perturb_device(device, pert);
  const TrainingSet ts = acquire_training_set(dim, alphas, model, local);
  const double nu = select_nu(ts, kDefaultNuGrid, 4, opts.seed);
  design::AffineMap map = ridge_fit(ts, nu);
  map.provenance = design::MapProvenance::simulated;
  return map;
}

ProcessMap process_map(const design::AffineMap& beta, const fock::Parametrization& par) {
  beta.validate();
  if (par.dim != beta.dim) throw ConfigError("process_map: parametrization dim mismatch");
  const ComplexMatrix kplus = design::pseudoinverse(par.K);
  ProcessMap pm;
  pm.m_prime = beta.M.cast<Complex>() * kplus;
  pm.offset = beta.V - (pm.m_prime * par.C).real();
  return pm;
}

DynamicsMap learn_dynamics_map(const design::AffineMap& known_beta, const TrainingSet& pairs) {
  known_beta.validate();
  const design::AffineMap fit = ridge_fit(pairs, 0.0);
  if (fit.M.rows() != known_beta.M.rows())
    throw ConfigError("learn_dynamics_map: observable count mismatch");
  const RealMatrix m_plus = design::pseudoinverse(known_beta.M);
  DynamicsMap out;
  out.phi = m_plus * fit.M;
  out.q = m_plus * (fit.V - known_beta.V);
  return out;
}

}  // namespace qrtomo::learn
