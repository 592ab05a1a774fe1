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

#include "json.hpp"
#include "qrtomo/design.hpp"
#include "qrtomo/dynamics.hpp"
#include "qrtomo/learn.hpp"
#include "qrtomo/types.hpp"

namespace qrtomo::cli {

/// Declarative experiment description. Parsed strictly: unknown keys at any
/// level are rejected so config typos cannot silently change a run.
struct ExperimentConfig {
  std::vector<int> dims;  // "D" or "D_list"
  long shots = 1000;
  bool noise = true;
  bool finite_pulses = true;
  bool degrade = true;
  double degrade_strength = learn::kDefaultDegradeStrength;
  dynamics::ReadoutErrorModel readout{0.02, 0.02};
  dynamics::DeviceParams device{};
  std::string displacement_set = "optimize";  // or a JSON path
  bool nu_cv = true;   // "nu": "cv" or a fixed value
  double nu = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int restarts = 16;
  int iters = 500;
  bool simulated_maps = false;
  double kitten_alpha = 1.0;
  int mcmc_samples = 1 << 10;
  int mcmc_thinning = 1 << 7;
  int guard_levels = 4;
  int sim_dim = 0;
  std::uint64_t config_hash = 0;  // FNV-1a of the raw config text
};

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& raw_text);
ExperimentConfig load_experiment_config(const std::string& path);

/// The per-dimension products of the learning pipeline.
struct LearnedMaps {
  design::DisplacementSet set;
  design::AffineMap beta_i;
  design::AffineMap beta_l;
  double nu = 0.0;
  learn::TrainingSet ts;
};

/// Resolve the displacement set (optimize or load), build the idealised
/// map, acquire training data per the config flags and fit the learnt map.
LearnedMaps build_maps(const ExperimentConfig& cfg, int d);

/// One kitten test case: the prepared (possibly degraded) target truncated
/// to D, its measurement records and the observable estimates.
struct KittenMeasurement {
  std::string name;
  fock::DensityMatrix target;
  std::vector<dynamics::MeasurementRecord> records;
  RealVector x;
};

/// The four kitten states |alpha> +/- |-alpha>, |alpha> +/- i|-alpha> at
/// cfg.kitten_alpha, prepared in a large space, optionally degraded, then
/// measured through the configured pipeline.
std::vector<KittenMeasurement> measure_kitten_suite(const ExperimentConfig& cfg, int d,
                                                    const std::vector<Complex>& alphas);

// Each command validates, runs and writes its artifacts under cfg.out_dir,
// returning the written paths. Failures surface as ConfigError or
// NumericalError; the binary maps them to exit codes 2 and 3.
std::vector<std::string> cmd_optimize(const ExperimentConfig& cfg);
std::vector<std::string> cmd_learn(const ExperimentConfig& cfg);
std::vector<std::string> cmd_reconstruct(const ExperimentConfig& cfg);
std::vector<std::string> cmd_observable_errors(const ExperimentConfig& cfg);

}  // namespace qrtomo::cli
