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
#include <random>

#include "qrtomo/types.hpp"

namespace qrtomo::fock {

// Tolerances for the DensityMatrix validity checks.
inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigTol = 1e-10;

/// A validated D x D density matrix: Hermitian, unit trace, PSD up to
/// numerical tolerance. Construction throws on violation.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& matrix() const { return mat_; }

 private:
  ComplexMatrix mat_;
};

/// Affine correspondence vec(rho) = K * Y + C between a physical state and
/// its D^2-1 real parameters Y (first D-1 diagonal entries, then for each
/// upper-triangular pair (l, m), l < m in row-major order, Re then Im).
/// K and C carry unit-modulus complex entries; products against operator
/// rows yield real maps.
struct Parametrization {
  int dim = 0;
  ComplexMatrix K;  // D^2 x (D^2-1)
  ComplexVector C;  // D^2
};

// Column-major vectorization used consistently for all vec(rho) algebra.
ComplexVector vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(const ComplexVector& v, int dim);

ComplexMatrix annihilation(int dim);
ComplexMatrix creation(int dim);
ComplexMatrix number_operator(int dim);
ComplexMatrix parity(int dim);

/// Default padding for displacement construction; keeps the truncation
/// defect of the retained block below ~1e-8 for |alpha| <= 2.
int default_displacement_pad(Complex alpha);

/// D(alpha) = exp(alpha a^dag - conj(alpha) a) built in dimension dim+pad
/// and truncated to the top-left dim x dim block. pad < 0 selects the
/// default. Emits a warning on stderr if the truncation defect
/// ||D^dag D - I||_max on the retained block exceeds 1e-6.
ComplexMatrix displacement(Complex alpha, int dim, int pad = -1);

/// Truncated coherent-state amplitudes, renormalized. Throws if the
/// truncated tail mass exceeds 1e-6. If tail_mass is non-null it receives
/// the pre-normalization tail mass so callers can enforce stricter cuts.
ComplexVector coherent_state(Complex alpha, int dim, double* tail_mass = nullptr);

enum class KittenVariant { plus, minus, y_plus, y_minus };

/// Normalized |alpha> +/- |-alpha> (or +/- i|-alpha>) as a pure density
/// matrix in the given truncation.
DensityMatrix kitten_state(Complex alpha, KittenVariant variant, int dim);

Parametrization build_parametrization(int dim);

/// Y parameters of rho in the canonical ordering.
RealVector param_of(const ComplexMatrix& rho);
/// Hermitian trace-1 matrix implied by Y (not necessarily PSD).
ComplexMatrix state_of(const RealVector& y, int dim);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Eigenvalues
/// below zero are clipped at -1e-10 before the square roots.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Projects onto the first dim levels and renormalizes the trace.
DensityMatrix truncate_state(const DensityMatrix& rho, int dim);
/// Zero-pads into a larger space.
DensityMatrix embed_state(const DensityMatrix& rho, int dim);

double purity(const DensityMatrix& rho);

/// Hilbert-Schmidt random state G G^dag / tr(G G^dag) with Ginibre G.
DensityMatrix random_density_matrix(int dim, std::mt19937_64& rng);

}  // namespace qrtomo::fock
