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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "qrtomo/design.hpp"
#include "qrtomo/fock.hpp"
#include "qrtomo/reconstruct.hpp"

using namespace qrtomo;
using design::AffineMap;
using reconstruct::McmcConfig;

namespace {

std::vector<Complex> ring_alphas(int n, double r0) {
  std::vector<Complex> alphas(n);
  for (int k = 0; k < n; ++k)
    alphas[k] = std::polar(r0 * (0.6 + 0.4 * (k % 2)), kTwoPi * k / n + 0.13);
  return alphas;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

dynamics::MeasurementRecord make_record(long shots, long count) {
  dynamics::MeasurementRecord rec;
  rec.displacement_index = 0;
  rec.shots = shots;
  rec.excited_count = count;
  rec.estimate = shots > 0 ? 1.0 - 2.0 * static_cast<double>(count) / shots : 0.0;
  return rec;
}

}  // namespace

TEST_CASE("linear inversion undoes the forward map") {
  const int d = 3;
  const AffineMap beta = design::build_idealised_map(ring_alphas(d * d - 1, 1.0), d);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const RealVector y_star = fock::param_of(fock::random_density_matrix(d, rng).matrix());
    const auto est = reconstruct::linear_invert(beta, beta.predict(y_star));
    CHECK((est.y_est - y_star).cwiseAbs().maxCoeff() < 1e-10);
  }

  const ComplexMatrix vac = ComplexMatrix::Identity(d, d).col(0) *
                            ComplexMatrix::Identity(d, d).col(0).adjoint();
  const auto est = reconstruct::linear_invert(beta, beta.predict(fock::param_of(vac)));
  CHECK((est.rho_ls - vac).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(est.min_eigenvalue > -1e-9);
  CHECK(std::abs(est.rho_ls.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("corrupted observable stays within the conditioning bound") {
  const int d = 2;
  const AffineMap beta = design::build_idealised_map(ring_alphas(3, 0.8), d);
  Eigen::JacobiSVD<RealMatrix> svd(beta.M);
  const double sigma_min = svd.singularValues().minCoeff();

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const RealVector y_star = fock::param_of(fock::random_density_matrix(d, rng).matrix());
    RealVector x = beta.predict(y_star);
    x(trial % x.size()) += 0.5;
    const auto est = reconstruct::linear_invert(beta, x);
    CHECK((est.y_est - y_star).norm() <= 0.5 / sigma_min + 1e-12);
  }
}

TEST_CASE("singular map is rejected with its condition number attached") {
  AffineMap beta;
  beta.dim = 2;
  beta.V = RealVector::Zero(3);
  beta.M = RealMatrix::Zero(3, 3);
  beta.M.row(0) << 1.0, 0.0, 0.0;
  beta.M.row(1) << 0.0, 1.0, 0.0;
  beta.M.row(2) << 1.0, 0.0, 0.0;
  try {
    reconstruct::linear_invert(beta, RealVector::Zero(3));
    FAIL("expected NumericalError");
  } catch (const NumericalError& err) {
    CHECK(std::string(err.what()).find("kappa") != std::string::npos);
  }
}

TEST_CASE("posterior concentrates on a physical linear estimate") {
  std::mt19937_64 rng(5);
  const fock::DensityMatrix truth = fock::random_density_matrix(2, rng);
  McmcConfig cfg;
  cfg.seed = 12;
  const auto bme = reconstruct::bayesian_mean(truth.matrix(), 2, 1e5 * 3, cfg);
  CHECK(fock::fidelity(bme.rho, truth) > 0.999);
  CHECK(bme.acceptance_rate >= 0.05);
  CHECK(bme.acceptance_rate <= 0.8);
}

TEST_CASE("maximally mixed state is a fixed point of the estimator") {
  McmcConfig cfg;
  cfg.sigma = 0.05;
  cfg.seed = 3;
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  const auto bme = reconstruct::bayesian_mean(half, 2, 0.0, cfg);
  CHECK((bme.rho.matrix() - half).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("negative linear estimate is repaired to a strictly positive state") {
  ComplexMatrix rho_ls = ComplexMatrix::Zero(2, 2);
  rho_ls(0, 0) = 1.05;
  rho_ls(1, 1) = -0.05;
  McmcConfig cfg;
  cfg.seed = 8;
  const auto bme = reconstruct::bayesian_mean(rho_ls, 2, 1000.0 * 3, cfg);
  const RealVector eigs =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(bme.rho.matrix()).eigenvalues();
  CHECK(eigs.minCoeff() > 0.0);
}

TEST_CASE("flat likelihood trips the acceptance guard") {
  McmcConfig cfg;
  cfg.sigma = 1e6;
  cfg.n_samples = 64;
  cfg.thinning = 16;
  const ComplexMatrix half = ComplexMatrix::Identity(2, 2) / 2.0;
  CHECK_THROWS_AS(reconstruct::bayesian_mean(half, 2, 0.0, cfg), NumericalError);
}

TEST_CASE("end-to-end vacuum reconstruction on the ideal pipeline") {
  const int d = 2;
  const AffineMap beta = design::build_idealised_map(ring_alphas(3, 0.8), d);
  const ComplexMatrix vac =
      ComplexMatrix::Identity(d, d).col(0) * ComplexMatrix::Identity(d, d).col(0).adjoint();
  McmcConfig cfg;
  cfg.seed = 21;
  const auto rec =
      reconstruct::reconstruct_state(beta, beta.predict(fock::param_of(vac)), 1000, cfg);
  CHECK(fock::fidelity(rec.rho_bme, fock::DensityMatrix(vac)) >= 0.999);
  CHECK(rec.linear.min_eigenvalue > -1e-9);
  CHECK(rec.acceptance_rate >= 0.05);
}

TEST_CASE("median fidelity is non-decreasing in the shot budget") {
  const int d = 2;
  const AffineMap beta = design::build_idealised_map(ring_alphas(3, 0.8), d);
  std::mt19937_64 rng(31);
  const fock::DensityMatrix truth = fock::random_density_matrix(d, rng);
  const RealVector x = beta.predict(fock::param_of(truth.matrix()));

  std::vector<double> medians;
  for (const long shots : {10L, 1000L, 100000L}) {
    std::vector<double> fids;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      McmcConfig cfg;
      cfg.n_samples = 256;
      cfg.thinning = 32;
      cfg.seed = seed;
      const auto rec = reconstruct::reconstruct_state(beta, x, shots, cfg);
      fids.push_back(fock::fidelity(rec.rho_bme, truth));
    }
    medians.push_back(median(fids));
  }
  CHECK(medians[1] >= medians[0]);
  CHECK(medians[2] >= medians[1] - 1e-7);
  CHECK(medians[2] > 0.999);
}

TEST_CASE("estimator never lags clipped linear inversion on the kitten suite") {
  const int d = 6;
  const Complex alpha(1.0, 0.0);
  using fock::KittenVariant;
  for (const auto variant : {KittenVariant::plus, KittenVariant::minus,
                             KittenVariant::y_plus, KittenVariant::y_minus}) {
    const fock::DensityMatrix kitten =
        fock::truncate_state(fock::kitten_state(alpha, variant, 16), d);
    McmcConfig cfg;
    cfg.seed = 77 + static_cast<std::uint64_t>(variant);
    const auto bme =
        reconstruct::bayesian_mean(kitten.matrix(), d, 1000.0 * (d * d - 1), cfg);
    // rho_ls is already physical here, so clipped linear inversion scores
    // fidelity 1 and the estimator may lag by at most 0.02.
    CHECK(fock::fidelity(bme.rho, kitten) >= 0.98);
  }
}

TEST_CASE("bootstrap basics") {
  McmcConfig unused;
  (void)unused;
  const auto mean_estimate = [](const reconstruct::RecordBatches& batches) {
    double sum = 0.0;
    int n = 0;
    for (const auto& batch : batches)
      for (const auto& rec : batch) {
        sum += rec.estimate;
        ++n;
      }
    return sum / n;
  };

  // Expectation-mode records carry no shot noise.
  reconstruct::RecordBatches exact{{make_record(0, -1), make_record(0, -1)}};
  const auto zero = reconstruct::bootstrap(exact, 200, "mean", mean_estimate, 5);
  CHECK(zero.stderr_ == 0.0);

  reconstruct::RecordBatches one_k{{make_record(1000, 500)}};
  const auto se1 = reconstruct::bootstrap(one_k, 400, "mean", mean_estimate, 5);
  const double analytic = 2.0 * std::sqrt(0.25 / 1000.0);
  CHECK(se1.stderr_ > 0.85 * analytic);
  CHECK(se1.stderr_ < 1.15 * analytic);

  reconstruct::RecordBatches two_k{{make_record(2000, 1000)}};
  const auto se2 = reconstruct::bootstrap(two_k, 400, "mean", mean_estimate, 5);
  const double ratio = se1.stderr_ / se2.stderr_;
  CHECK(ratio > std::sqrt(2.0) * 0.8);
  CHECK(ratio < std::sqrt(2.0) * 1.2);

  const auto rerun = reconstruct::bootstrap(one_k, 400, "mean", mean_estimate, 5);
  CHECK(rerun.mean == se1.mean);
  CHECK(rerun.stderr_ == se1.stderr_);

  CHECK_THROWS_AS(reconstruct::bootstrap(one_k, 50, "mean", mean_estimate, 5), ConfigError);
}
