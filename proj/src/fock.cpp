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

#include "qrtomo/fock.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <utility>

#include <Eigen/Eigenvalues>

namespace qrtomo::fock {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Eigendecomposition of the Hermitian generator S = -i (a^dag - a), cached
// per dimension so repeated displacement builds reduce to two products.
struct GeneratorEigen {
  RealVector values;
  ComplexMatrix vectors;
};

const GeneratorEigen& generator_eigen(int dim) {
  static std::mutex mutex;
  static std::map<int, GeneratorEigen> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;

  ComplexMatrix gen = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    gen(n + 1, n) = Complex(0.0, -s);
    gen(n, n + 1) = Complex(0.0, s);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gen);
  GeneratorEigen entry{es.eigenvalues(), es.eigenvectors()};
  return cache.emplace(dim, std::move(entry)).first->second;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix rho) {
  require(rho.rows() >= 1 && rho.rows() == rho.cols(), "density matrix must be square");
  const double herm_defect = (rho - rho.adjoint().eval()).cwiseAbs().maxCoeff();
  if (herm_defect > kHermTol)
    throw NumericalError("density matrix not Hermitian (defect " +
                         std::to_string(herm_defect) + ")");
  const double trace_defect = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
  if (trace_defect > kTraceTol)
    throw NumericalError("density matrix trace deviates from 1 by " +
                         std::to_string(trace_defect));
  mat_ = 0.5 * (rho + rho.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kEigTol)
    throw NumericalError("density matrix has negative eigenvalue " + std::to_string(min_eig));
}

ComplexVector vectorize(const ComplexMatrix& m) {
  return m.reshaped();
}

ComplexMatrix devectorize(const ComplexVector& v, int dim) {
  require(v.size() == static_cast<Eigen::Index>(dim) * dim, "vector length must be dim^2");
  return v.reshaped(dim, dim);
}

ComplexMatrix annihilation(int dim) {
  require(dim >= 1, "dim must be >= 1");
  ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix creation(int dim) {
  return annihilation(dim).adjoint();
}

ComplexMatrix number_operator(int dim) {
  require(dim >= 1, "dim must be >= 1");
  ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

ComplexMatrix parity(int dim) {
  require(dim >= 1, "dim must be >= 1");
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
  return p;
}

int default_displacement_pad(Complex alpha) {
  const double a2 = std::norm(alpha);
  return std::max(20, 4 * static_cast<int>(std::ceil(a2)) + 10);
}

ComplexMatrix displacement(Complex alpha, int dim, int pad) {
  require(dim >= 1, "dim must be >= 1");
  if (pad < 0) pad = default_displacement_pad(alpha);
  const int big = dim + pad;

  const double r = std::abs(alpha);
  ComplexMatrix full;
  if (r == 0.0) {
    full = ComplexMatrix::Identity(big, big);
  } else {
    // D(alpha) = R_theta exp(i r S) R_theta^dag with R_theta = exp(i theta n).
    const GeneratorEigen& gen = generator_eigen(big);
    ComplexVector phase(big);
    for (int k = 0; k < big; ++k)
      phase(k) = std::exp(Complex(0.0, r * gen.values(k)));
    full = gen.vectors * phase.asDiagonal() * gen.vectors.adjoint();
    const double theta = std::arg(alpha);
    if (theta != 0.0) {
      ComplexVector rot(big);
      for (int n = 0; n < big; ++n) rot(n) = std::exp(Complex(0.0, theta * n));
      full = rot.asDiagonal() * full * rot.conjugate().asDiagonal();
    }
  }

  // Unitarity of the retained columns is judged in the padded space, where
  // the exponential is exact; truncation only drops rows. A defect here
  // means the exponential itself degraded, not that top columns leak.
  const auto cols = full.leftCols(dim);
  const double defect =
      (cols.adjoint() * cols - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > 1e-6)
    std::cerr << "qrtomo: warning: displacement unitarity defect " << defect
              << " at |alpha|=" << r << ", dim=" << dim << ", pad=" << pad << "\n";
  return full.topLeftCorner(dim, dim);
}

ComplexVector coherent_state(Complex alpha, int dim, double* tail_mass) {
  require(dim >= 1, "dim must be >= 1");
  ComplexVector amps(dim);
  amps(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n)
    amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  const double kept = amps.squaredNorm();
  const double tail = std::max(0.0, 1.0 - kept);
  if (tail_mass) *tail_mass = tail;
  if (tail > 1e-6)
    throw NumericalError("coherent-state truncation tail " + std::to_string(tail) +
                         " exceeds 1e-6 at dim " + std::to_string(dim));
  return amps / std::sqrt(kept);
}

DensityMatrix kitten_state(Complex alpha, KittenVariant variant, int dim) {
  const ComplexVector plus = coherent_state(alpha, dim);
  const ComplexVector minus = coherent_state(-alpha, dim);
  Complex phase;
  switch (variant) {
    case KittenVariant::plus: phase = 1.0; break;
    case KittenVariant::minus: phase = -1.0; break;
    case KittenVariant::y_plus: phase = kImag; break;
    case KittenVariant::y_minus: phase = -kImag; break;
    default: throw std::invalid_argument("unknown kitten variant");
  }
  ComplexVector psi = plus + phase * minus;
  psi /= psi.norm();
  return DensityMatrix(psi * psi.adjoint());
}

Parametrization build_parametrization(int dim) {
  require(dim >= 2, "dim must be >= 2");
  const int n_params = dim * dim - 1;
  Parametrization p;
  p.dim = dim;
  p.K = ComplexMatrix::Zero(dim * dim, n_params);
  p.C = ComplexVector::Zero(dim * dim);

  auto vec_index = [dim](int row, int col) { return col * dim + row; };

  for (int j = 0; j < dim - 1; ++j) {
    p.K(vec_index(j, j), j) = 1.0;
    p.K(vec_index(dim - 1, dim - 1), j) = -1.0;
  }
  p.C(vec_index(dim - 1, dim - 1)) = 1.0;

  int col = dim - 1;
  for (int l = 0; l < dim; ++l) {
    for (int m = l + 1; m < dim; ++m) {
      p.K(vec_index(l, m), col) = 1.0;
      p.K(vec_index(m, l), col) = 1.0;
      p.K(vec_index(l, m), col + 1) = kImag;
      p.K(vec_index(m, l), col + 1) = -kImag;
      col += 2;
    }
  }
  return p;
}

RealVector param_of(const ComplexMatrix& rho) {
  const int dim = static_cast<int>(rho.rows());
  require(dim >= 2 && rho.cols() == dim, "state must be square with dim >= 2");
  RealVector y(dim * dim - 1);
  for (int j = 0; j < dim - 1; ++j) y(j) = rho(j, j).real();
  int idx = dim - 1;
  for (int l = 0; l < dim; ++l) {
    for (int m = l + 1; m < dim; ++m) {
      y(idx++) = rho(l, m).real();
      y(idx++) = rho(l, m).imag();
    }
  }
  return y;
}

ComplexMatrix state_of(const RealVector& y, int dim) {
  const Parametrization p = build_parametrization(dim);
  require(y.size() == p.K.cols(), "parameter vector has wrong length");
  return devectorize(p.K * y.cast<Complex>() + p.C, dim);
}

namespace {

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  RealVector vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "fidelity requires equal dimensions");
  const ComplexMatrix root = hermitian_sqrt(rho.matrix());
  const ComplexMatrix inner = root * sigma.matrix() * root;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (inner + inner.adjoint().eval()),
                                                 Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, tr * tr);
}

DensityMatrix truncate_state(const DensityMatrix& rho, int dim) {
  require(dim >= 1 && dim <= rho.dim(), "truncation dim out of range");
  ComplexMatrix block = rho.matrix().topLeftCorner(dim, dim);
  return DensityMatrix(block / block.trace());
}

DensityMatrix embed_state(const DensityMatrix& rho, int dim) {
  require(dim >= rho.dim(), "embedding dim must not shrink the state");
  ComplexMatrix big = ComplexMatrix::Zero(dim, dim);
  big.topLeftCorner(rho.dim(), rho.dim()) = rho.matrix();
  return DensityMatrix(big);
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix() * rho.matrix()).trace().real();
}

DensityMatrix random_density_matrix(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  ComplexMatrix rho = g * g.adjoint();
  return DensityMatrix(rho / rho.trace());
}

}  // namespace qrtomo::fock
