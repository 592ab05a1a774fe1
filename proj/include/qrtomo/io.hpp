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

#include <string>

#include "json.hpp"
#include "qrtomo/design.hpp"
#include "qrtomo/learn.hpp"
#include "qrtomo/types.hpp"

namespace qrtomo::io {

// Matrices travel as {dim, re, im} with flat row-major arrays.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

// {D, alphas: [[re, im], ...], kappa}
nlohmann::json displacement_set_to_json(const design::DisplacementSet& set);
design::DisplacementSet displacement_set_from_json(const nlohmann::json& j);

// {D, V: [...], M: [[...]], provenance}
nlohmann::json affine_map_to_json(const design::AffineMap& map);
design::AffineMap affine_map_from_json(const nlohmann::json& j);

/// Measurement records as CSV, one row per (state, k):
/// state_id,k,alpha_re,alpha_im,shots,X,seed. Leading comment lines carry
/// the config hash and master seed for provenance.
std::string records_to_csv(const learn::TrainingSet& ts, std::uint64_t config_hash,
                           std::uint64_t seed);

/// Sidecar describing the row ordering and acquisition flags of a
/// persisted training set.
nlohmann::json training_set_sidecar(const learn::TrainingSet& ts,
                                    std::uint64_t config_hash, std::uint64_t seed);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

nlohmann::json load_json(const std::string& path);
/// Stable two-space indentation plus trailing newline; reruns with the
/// same inputs produce byte-identical files.
void save_json(const std::string& path, const nlohmann::json& j);

std::string hash_hex(std::uint64_t hash);

}  // namespace qrtomo::io
