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

#include "qrtomo/design.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <random>

namespace qrtomo::design {
namespace {

constexpr double kImagResidueTol = 1e-10;
constexpr double kSingularFloor = 1e-14;
constexpr double kPinvFloor = 1e-12;
constexpr double kFdStep = 1e-4;
constexpr int kMaxHalvings = 30;

ComplexVector observable_row(Complex alpha, int dim, int pad) {
  const int big = dim + (pad < 0 ? fock::default_displacement_pad(alpha) : pad);
  const ComplexMatrix d = fock::displacement(alpha, big, 0);
  const ComplexMatrix p = fock::parity(big);
  const ComplexMatrix o_big = d.adjoint() * (p.diagonal().asDiagonal() * d);
  const ComplexMatrix o = o_big.topLeftCorner(dim, dim);
  // Row index m*dim + l carries the coefficient of rho(l, m) in tr(O rho).
  ComplexVector row(dim * dim);
  for (int m = 0; m < dim; ++m)
    for (int l = 0; l < dim; ++l) row(m * dim + l) = o(m, l);
  return row;
}

RealMatrix real_part_checked(const ComplexMatrix& m, const char* what) {
  const double residue = m.imag().cwiseAbs().maxCoeff();
  if (residue > kImagResidueTol)
    throw NumericalError(std::string(what) + ": imaginary residue " + std::to_string(residue));
  return m.real();
}

// Working state of one descent restart: cached per-amplitude rows so a
// single-coordinate perturbation rebuilds one row only.
struct MapEvaluator {
  int dim;
  int pad;
  ComplexMatrix k;  // parametrization matrix
  std::vector<ComplexVector> rows;

  MapEvaluator(int dim_, int pad_, const fock::Parametrization& par, int n)
      : dim(dim_), pad(pad_), k(par.K), rows(n) {}

  void set_alpha(int idx, Complex alpha) { rows[idx] = observable_row(alpha, dim, pad); }

  double kappa() const {
    const int n = static_cast<int>(rows.size());
    RealMatrix m(n, k.cols());
    for (int r = 0; r < n; ++r) m.row(r) = (rows[r].transpose() * k).real();
    return condition_number(m);
  }
};

}  // namespace

void DisplacementSet::validate() const {
  if (dim < 2) throw ConfigError("DisplacementSet: dim must be >= 2");
  const std::size_t expected = static_cast<std::size_t>(dim) * dim - 1;
  if (alphas.size() != expected)
    throw ConfigError("DisplacementSet: expected " + std::to_string(expected) + " amplitudes, got " +
                      std::to_string(alphas.size()));
  for (const Complex a : alphas)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw ConfigError("DisplacementSet: non-finite amplitude");
}

std::string to_string(MapProvenance p) {
  switch (p) {
    case MapProvenance::idealised: return "idealised";
    case MapProvenance::learnt: return "learnt";
    case MapProvenance::simulated: return "simulated";
  }
  throw ConfigError("unknown provenance");
}

MapProvenance provenance_from_string(const std::string& s) {
  if (s == "idealised") return MapProvenance::idealised;
  if (s == "learnt") return MapProvenance::learnt;
  if (s == "simulated") return MapProvenance::simulated;
  throw ConfigError("unknown provenance '" + s + "'");
}

void AffineMap::validate() const {
  if (dim < 2) throw ConfigError("AffineMap: dim must be >= 2");
  if (M.cols() != static_cast<Eigen::Index>(dim) * dim - 1)
    throw ConfigError("AffineMap: M must have D^2-1 columns");
  if (V.size() != M.rows()) throw ConfigError("AffineMap: V length must match rows of M");
  if (!V.allFinite() || !M.allFinite()) throw ConfigError("AffineMap: non-finite entries");
}

ComplexMatrix observable_matrix(const std::vector<Complex>& alphas, int dim, int pad) {
  if (dim < 2) throw ConfigError("observable_matrix: dim must be >= 2");
  ComplexMatrix rows(static_cast<Eigen::Index>(alphas.size()), dim * dim);
  for (std::size_t i = 0; i < alphas.size(); ++i)
    rows.row(static_cast<Eigen::Index>(i)) = observable_row(alphas[i], dim, pad).transpose();
  return rows;
}

AffineMap build_idealised_map(const std::vector<Complex>& alphas, int dim, int pad) {
  const fock::Parametrization par = fock::build_parametrization(dim);
  const ComplexMatrix rows = observable_matrix(alphas, dim, pad);
  AffineMap map;
  map.dim = dim;
  map.M = real_part_checked(rows * par.K, "build_idealised_map M");
  map.V = real_part_checked(rows * par.C, "build_idealised_map V");
  map.provenance = MapProvenance::idealised;
  map.validate();
  return map;
}

AffineMap build_idealised_map(const DisplacementSet& set, int pad) {
  set.validate();
  return build_idealised_map(set.alphas, set.dim, pad);
}

double condition_number(const RealMatrix& m) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0)
    throw ConfigError("condition_number: zero matrix");
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smin < kSingularFloor * smax) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

namespace {

template <typename Matrix>
Matrix pseudoinverse_impl(const Matrix& m) {
  // Left pseudoinverse: a wide matrix has dependent columns by counting.
  if (m.rows() < m.cols())
    throw NumericalError("pseudoinverse: fewer rows than columns");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  if (s(s.size() - 1) <= kPinvFloor * smax)
    throw NumericalError("pseudoinverse: rank-deficient matrix (sigma_min/sigma_max = " +
                         std::to_string(s(s.size() - 1) / smax) + ")");
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

RealMatrix pseudoinverse(const RealMatrix& m) { return pseudoinverse_impl(m); }
ComplexMatrix pseudoinverse(const ComplexMatrix& m) { return pseudoinverse_impl(m); }

OptimizeResult optimize_displacements(int dim, const OptimizeOptions& opts) {
  if (dim < 2) throw ConfigError("optimize_displacements: dim must be >= 2");
  if (opts.iters < 1 || opts.restarts < 1 || opts.step <= 0.0)
    throw ConfigError("optimize_displacements: iters, restarts and step must be positive");

  const int n = dim * dim - 1;
  const fock::Parametrization par = fock::build_parametrization(dim);
  const double radius = std::sqrt(static_cast<double>(dim));

  OptimizeResult best;
  best.kappa = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < opts.restarts; ++restart) {
    std::mt19937_64 rng(mix_seed(opts.seed, 0x6f7074ULL, static_cast<std::uint64_t>(restart)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Complex> alphas(n);
    MapEvaluator eval(dim, opts.pad, par, n);
    for (int k = 0; k < n; ++k) {
      const double r = radius * std::sqrt(unit(rng));
      const double theta = kTwoPi * unit(rng);
      alphas[k] = std::polar(r, theta);
      eval.set_alpha(k, alphas[k]);
    }

    double f = eval.kappa();
    std::vector<double> trajectory{f};

    for (int iter = 0; iter < opts.iters && std::isfinite(f); ++iter) {
      // Central finite differences, one observable row rebuilt per probe.
      RealVector grad(2 * n);
      for (int k = 0; k < n; ++k) {
        for (int part = 0; part < 2; ++part) {
          const Complex delta = part == 0 ? Complex(kFdStep, 0.0) : Complex(0.0, kFdStep);
          eval.set_alpha(k, alphas[k] + delta);
          const double fp = eval.kappa();
          eval.set_alpha(k, alphas[k] - delta);
          const double fm = eval.kappa();
          grad(2 * k + part) = (fp - fm) / (2.0 * kFdStep);
        }
        eval.set_alpha(k, alphas[k]);
      }
      const double gnorm = grad.norm();
      if (!std::isfinite(gnorm) || gnorm < 1e-12) break;

      bool accepted = false;
      double step = opts.step;
      for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5) {
        std::vector<Complex> trial(n);
        for (int k = 0; k < n; ++k)
          trial[k] = alphas[k] - (step / gnorm) * Complex(grad(2 * k), grad(2 * k + 1));
        for (int k = 0; k < n; ++k) eval.set_alpha(k, trial[k]);
        const double ft = eval.kappa();
        if (ft < f) {
          alphas = std::move(trial);
          f = ft;
          trajectory.push_back(f);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        for (int k = 0; k < n; ++k) eval.set_alpha(k, alphas[k]);
        break;
      }
    }

    if (f < best.kappa) {
      best.kappa = f;
      best.set.dim = dim;
      best.set.alphas = alphas;
      best.set.kappa = f;
      best.trajectory = std::move(trajectory);
    }
  }

  if (!std::isfinite(best.kappa))
    throw NumericalError("optimize_displacements: no restart produced an invertible map");
  best.set.validate();
  return best;
}

}  // namespace qrtomo::design
