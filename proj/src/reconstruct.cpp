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

#include "qrtomo/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace qrtomo::reconstruct {

namespace {

constexpr double kPinvFloor = 1e-12;
constexpr double kAdaptLow = 0.20;
constexpr double kAdaptHigh = 0.40;
constexpr double kAcceptMin = 0.05;
constexpr double kAcceptMax = 0.80;
constexpr int kAdaptBlock = 100;
constexpr int kAdaptRounds = 300;

ComplexMatrix ginibre(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

ComplexMatrix state_from_factor(const ComplexMatrix& g) {
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

void McmcConfig::validate() const {
  if (n_samples <= 0 || thinning <= 0)
    throw ConfigError("McmcConfig: n_samples and thinning must be positive");
  if (sigma < 0.0) throw ConfigError("McmcConfig: sigma must be non-negative");
}

LinearEstimate linear_invert(const design::AffineMap& beta, const RealVector& x) {
  beta.validate();
  const Eigen::Index n_par = beta.M.cols();
  if (x.size() != beta.M.rows())
    throw ConfigError("linear_invert: observable vector length does not match the map");
  if (beta.M.rows() < n_par)
    throw NumericalError("linear_invert: fewer observables than parameters");

  const RealVector residual = x - beta.V;
  RealVector y;
  if (beta.M.rows() == n_par) {
    Eigen::JacobiSVD<RealMatrix> svd(beta.M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= kPinvFloor * s(0)) {
      std::ostringstream msg;
      msg << "linear_invert: M ill-conditioned, kappa = "
          << (s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                    : std::numeric_limits<double>::infinity());
      throw NumericalError(msg.str());
    }
    y = svd.solve(residual);
  } else {
    y = design::pseudoinverse(beta.M) * residual;
  }

  LinearEstimate est;
  est.y_est = y;
  const ComplexMatrix raw = fock::state_of(y, beta.dim);
  est.rho_ls = 0.5 * (raw + raw.adjoint());
  est.min_eigenvalue =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(est.rho_ls).eigenvalues().minCoeff();
  return est;
}

BmeResult bayesian_mean(const ComplexMatrix& rho_ls, int dim, double n_effective,
                        const McmcConfig& cfg, const design::AffineMap* beta,
                        const RealVector* x) {
  cfg.validate();
  if (rho_ls.rows() != dim || rho_ls.cols() != dim)
    throw ConfigError("bayesian_mean: rho_ls dimension mismatch");
  if ((rho_ls - rho_ls.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw ConfigError("bayesian_mean: rho_ls must be Hermitian");
  if (std::abs(rho_ls.trace().real() - 1.0) > 1e-6)
    throw ConfigError("bayesian_mean: rho_ls must have unit trace");
  if (cfg.likelihood == Likelihood::per_observable && (beta == nullptr || x == nullptr))
    throw ConfigError("bayesian_mean: per-observable likelihood needs the map and data");

  double sigma = cfg.sigma;
  if (sigma == 0.0) {
    if (n_effective <= 0.0)
      throw ConfigError("bayesian_mean: n_effective must be positive when sigma is derived");
    sigma = 1.0 / n_effective;
  }
  if (cfg.sigma_is_variance) sigma = std::sqrt(sigma);
  const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);

  const auto log_like = [&](const ComplexMatrix& rho) {
    if (cfg.likelihood == Likelihood::per_observable)
      return -(*x - beta->predict(fock::param_of(rho))).squaredNorm() * inv_two_sigma_sq;
    return -(rho - rho_ls).cwiseAbs2().sum() * inv_two_sigma_sq;
  };

  std::mt19937_64 rng(mix_seed(cfg.seed, 0x626d65ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Start at the Euclidean projection of rho_ls onto the state simplex
  // (water-filling over eigenvalues). This is the pseudo-likelihood peak
  // over physical states, so the adaptation below measures equilibrium
  // acceptance instead of the transient climb of a mis-started chain.
  // The radial scale of G never enters rho(G), so rescaling the factor to
  // the typical prior radius is free.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> start(rho_ls);
  RealVector lam = start.eigenvalues();
  {
    std::vector<double> sorted(lam.data(), lam.data() + lam.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      cumulative += sorted[j];
      const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
      if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      lam(i) = std::max(lam(i) - theta, 1e-9);
  }
  ComplexMatrix g =
      start.eigenvectors() * lam.cwiseSqrt().cast<Complex>().asDiagonal();
  g *= std::sqrt(2.0) * dim / g.norm();
  double ll = log_like(state_from_factor(g));
  double mix = 0.1;

  // The pCN proposal sqrt(1-s^2) G + s Xi leaves the Ginibre prior
  // invariant, so the Metropolis ratio reduces to the likelihood ratio.
  const auto sweep = [&](int iters, double s) {
    int accepts = 0;
    const double keep = std::sqrt(1.0 - s * s);
    for (int i = 0; i < iters; ++i) {
      const ComplexMatrix proposal = keep * g + s * ginibre(dim, rng);
      const double ll_new = log_like(state_from_factor(proposal));
      if (ll_new >= ll || std::log(unit(rng)) < ll_new - ll) {
        g = proposal;
        ll = ll_new;
        ++accepts;
      }
    }
    return static_cast<double>(accepts) / iters;
  };

  // Adaptation doubles as burn-in. Freezing mix on a single in-band block
  // is fragile when the chain is still settling, so two consecutive
  // in-band blocks are required before the step size is locked.
  int in_band = 0;
  for (int round = 0; round < kAdaptRounds; ++round) {
    const double rate = sweep(kAdaptBlock, mix);
    if (rate > kAdaptHigh) {
      mix = std::min(0.999, mix * 1.4);
      in_band = 0;
    } else if (rate < kAdaptLow) {
      mix = std::max(1e-9, mix * 0.7);
      in_band = 0;
    } else if (++in_band >= 2 && round >= 10) {
      break;
    }
  }

  long accepts = 0;
  std::vector<ComplexMatrix> kept;
  kept.reserve(static_cast<std::size_t>(cfg.n_samples));
  const double keep_scale = std::sqrt(1.0 - mix * mix);
  for (int sample = 0; sample < cfg.n_samples; ++sample) {
    for (int step = 0; step < cfg.thinning; ++step) {
      const ComplexMatrix proposal = keep_scale * g + mix * ginibre(dim, rng);
      const double ll_new = log_like(state_from_factor(proposal));
      if (ll_new >= ll || std::log(unit(rng)) < ll_new - ll) {
        g = proposal;
        ll = ll_new;
        ++accepts;
      }
    }
    kept.push_back(state_from_factor(g));
  }

  const double rate =
      static_cast<double>(accepts) / (static_cast<double>(cfg.n_samples) * cfg.thinning);
  if (rate < kAcceptMin || rate > kAcceptMax) {
    std::ostringstream msg;
    msg << "bayesian_mean: acceptance rate " << rate << " outside [" << kAcceptMin << ", "
        << kAcceptMax << "] after adaptation";
    throw NumericalError(msg.str());
  }

  const std::size_t burn = kept.size() / 4;
  ComplexMatrix mean = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = burn; i < kept.size(); ++i) mean += kept[i];
  mean /= static_cast<double>(kept.size() - burn);
  mean = 0.5 * (mean + mean.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(mean);
  RealVector vals = eig.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) < 0.0 && vals(i) > -1e-12) vals(i) = 0.0;
  ComplexMatrix clipped =
      eig.eigenvectors() * vals.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
  clipped /= clipped.trace().real();

  return BmeResult{fock::DensityMatrix(clipped), rate, mix};
}

Reconstruction reconstruct_state(const design::AffineMap& beta, const RealVector& x,
                                 long shots, const McmcConfig& cfg) {
  if (shots < 1) throw ConfigError("reconstruct_state: shots must be positive");
  LinearEstimate lin = linear_invert(beta, x);
  const double n_eff = static_cast<double>(shots) * (beta.dim * beta.dim - 1);
  BmeResult bme = bayesian_mean(lin.rho_ls, beta.dim, n_eff, cfg, &beta, &x);
  return Reconstruction{std::move(bme.rho), std::move(lin), bme.acceptance_rate};
}

BootstrapResult bootstrap(const RecordBatches& batches, int b, const std::string& name,
                          const Statistic& statistic, std::uint64_t seed) {
  if (b < 100) throw ConfigError("bootstrap: need at least 100 resamples");
  if (!statistic) throw ConfigError("bootstrap: statistic is empty");

  const std::uint64_t name_tag = fnv1a64(name);
  std::vector<double> stats(static_cast<std::size_t>(b));
  RecordBatches resampled = batches;
  for (int r = 0; r < b; ++r) {
    std::mt19937_64 rng(mix_seed(seed, name_tag, static_cast<std::uint64_t>(r)));
    for (std::size_t i = 0; i < batches.size(); ++i) {
      for (std::size_t k = 0; k < batches[i].size(); ++k) {
        const auto& rec = batches[i][k];
        auto& out = resampled[i][k];
        if (rec.shots <= 0) {
          out = rec;
          continue;
        }
        const long count = rec.excited_count >= 0
                               ? rec.excited_count
                               : std::lround(rec.shots * (1.0 - rec.estimate) / 2.0);
        const double p = std::clamp(static_cast<double>(count) / rec.shots, 0.0, 1.0);
        std::binomial_distribution<long> binom(rec.shots, p);
        out.excited_count = binom(rng);
        out.estimate = 1.0 - 2.0 * static_cast<double>(out.excited_count) / rec.shots;
      }
    }
    stats[static_cast<std::size_t>(r)] = statistic(resampled);
  }

  BootstrapResult result;
  for (const double s : stats) result.mean += s;
  result.mean /= b;
  double var = 0.0;
  for (const double s : stats) var += (s - result.mean) * (s - result.mean);
  result.stderr_ = std::sqrt(var / (b - 1));
  return result;
}

}  // namespace qrtomo::reconstruct
