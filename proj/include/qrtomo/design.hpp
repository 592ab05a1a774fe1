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

#include "qrtomo/fock.hpp"
#include "qrtomo/types.hpp"

namespace qrtomo::design {

/// The D^2 - 1 displacement amplitudes defining the measured observables.
struct DisplacementSet {
  int dim = 0;
  std::vector<Complex> alphas;
  double kappa = 0.0;  // achieved condition number, 0 while unknown

  void validate() const;
};

enum class MapProvenance { idealised, learnt, simulated };

std::string to_string(MapProvenance p);
MapProvenance provenance_from_string(const std::string& s);

/// Affine observable map X = M Y + V from the parameter vector of a state
/// to the expected displaced-parity observables.
struct AffineMap {
  int dim = 0;
  RealVector V;
  RealMatrix M;
  MapProvenance provenance = MapProvenance::idealised;

  int n_obs() const { return static_cast<int>(M.rows()); }
  RealVector predict(const RealVector& y) const { return M * y + V; }
  void validate() const;
};

/// Complex observable matrix: row k is the column-major vec row of the
/// truncated D^dag(alpha_k) P D(alpha_k), so row_k . vec(rho) = tr(O_k rho).
/// Operators are conjugated in dimension dim + pad before truncation;
/// pad < 0 selects the per-alpha fock default.
ComplexMatrix observable_matrix(const std::vector<Complex>& alphas, int dim, int pad = -1);

/// Idealised map via M = Re(O K), V = Re(O C) with the fock parametrization.
/// Throws if the imaginary residue exceeds 1e-10.
AffineMap build_idealised_map(const DisplacementSet& set, int pad = -1);
AffineMap build_idealised_map(const std::vector<Complex>& alphas, int dim, int pad = -1);

/// sigma_max / sigma_min; +infinity when sigma_min < 1e-14 sigma_max.
double condition_number(const RealMatrix& m);

/// Left pseudoinverse via SVD; equals (M^T M)^-1 M^T for full column rank.
/// Throws on rank deficiency (sigma_min <= 1e-12 sigma_max).
RealMatrix pseudoinverse(const RealMatrix& m);
ComplexMatrix pseudoinverse(const ComplexMatrix& m);

struct OptimizeOptions {
  int iters = 500;
  int restarts = 16;
  double step = 0.1;  // initial line-search step in alpha units
  int pad = -1;
  std::uint64_t seed = 0;
};

struct OptimizeResult {
  DisplacementSet set;
  double kappa = 0.0;
  std::vector<double> trajectory;  // kappa after each accepted step, winning restart
};

/// Gradient descent on kappa(M) over the real and imaginary parts of all
/// amplitudes: central finite differences (h = 1e-4), backtracking line
/// search, best over independently seeded restarts. Deterministic in seed.
OptimizeResult optimize_displacements(int dim, const OptimizeOptions& opts);

}  // namespace qrtomo::design
