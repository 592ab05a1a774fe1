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
#include <functional>
#include <string>
#include <vector>

#include "qrtomo/design.hpp"
#include "qrtomo/dynamics.hpp"
#include "qrtomo/fock.hpp"
#include "qrtomo/types.hpp"

namespace qrtomo::reconstruct {

/// Linear inversion output. rho_ls is Hermitian with unit trace by
/// construction but carries no positivity guarantee.
struct LinearEstimate {
  RealVector y_est;
  ComplexMatrix rho_ls;
  double min_eigenvalue = 0.0;
};

enum class Likelihood { frobenius, per_observable };

struct McmcConfig {
  int n_samples = 1 << 10;
  int thinning = 1 << 7;
  // Pseudo-likelihood width. 0 derives it from the effective shot count;
  // sigma_is_variance controls whether that derived 1/N is read as a
  // variance or as a standard deviation (the default).
  double sigma = 0.0;
  bool sigma_is_variance = false;
  Likelihood likelihood = Likelihood::frobenius;
  std::uint64_t seed = 0;

  void validate() const;
};

struct BmeResult {
  fock::DensityMatrix rho;
  double acceptance_rate = 0.0;
  double mix = 0.0;  // tuned pCN mixing parameter
};

struct Reconstruction {
  fock::DensityMatrix rho_bme;
  LinearEstimate linear;
  double acceptance_rate = 0.0;
};

/// Y_est = M^-1 (X - V), or the left pseudoinverse when the map carries
/// more observables than parameters. Throws NumericalError with the
/// condition number attached when M is ill-conditioned.
LinearEstimate linear_invert(const design::AffineMap& beta, const RealVector& x);

/// Posterior mean under a Hilbert-Schmidt (Ginibre) prior and a Gaussian
/// pseudo-likelihood centered on rho_ls with width sigma = 1/n_effective
/// by default. Random-walk chain on the Ginibre factor with a
/// preconditioned Crank-Nicolson proposal; the mixing parameter is
/// adapted to a 20-40% acceptance rate before sampling and the first 25%
/// of kept samples are discarded. Throws if the final acceptance rate
/// falls outside [0.05, 0.8]. The per-observable likelihood mode needs
/// beta and x; the default Frobenius mode ignores them.
BmeResult bayesian_mean(const ComplexMatrix& rho_ls, int dim, double n_effective,
                        const McmcConfig& cfg, const design::AffineMap* beta = nullptr,
                        const RealVector* x = nullptr);

/// linear_invert then bayesian_mean with N = shots * (D^2 - 1).
Reconstruction reconstruct_state(const design::AffineMap& beta, const RealVector& x,
                                 long shots, const McmcConfig& cfg);

using RecordBatches = std::vector<std::vector<dynamics::MeasurementRecord>>;
using Statistic = std::function<double(const RecordBatches&)>;

struct BootstrapResult {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Nonparametric bootstrap over per-shot outcomes: every record's excited
/// count is re-drawn from Binomial(shots, count/shots) and the named
/// statistic recomputed per resample. Deterministic in seed. B >= 100.
BootstrapResult bootstrap(const RecordBatches& batches, int b, const std::string& name,
                          const Statistic& statistic, std::uint64_t seed);

}  // namespace qrtomo::reconstruct
