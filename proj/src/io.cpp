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

#include "qrtomo/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qrtomo::io {

using nlohmann::json;

namespace {

void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const std::string& what) {
  for (const char* key : keys)
    if (!j.contains(key)) throw ConfigError(what + ": missing field '" + key + "'");
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ConfigError("matrix_to_json: matrix must be square");
  const int dim = static_cast<int>(m.rows());
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(dim) * dim);
  im.reserve(static_cast<std::size_t>(dim) * dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return json{{"dim", dim}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const json& j) {
  require_keys(j, {"dim", "re", "im"}, "matrix");
  const int dim = j.at("dim").get<int>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  const std::size_t want = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  if (dim <= 0 || re.size() != want || im.size() != want)
    throw ConfigError("matrix: re/im length does not match dim^2");
  ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const std::size_t flat = static_cast<std::size_t>(r) * dim + c;
      m(r, c) = Complex(re[flat], im[flat]);
    }
  return m;
}

json displacement_set_to_json(const design::DisplacementSet& set) {
  set.validate();
  json alphas = json::array();
  for (const Complex a : set.alphas) alphas.push_back({a.real(), a.imag()});
  return json{{"D", set.dim}, {"alphas", alphas}, {"kappa", set.kappa}};
}

design::DisplacementSet displacement_set_from_json(const json& j) {
  require_keys(j, {"D", "alphas", "kappa"}, "displacement set");
  design::DisplacementSet set;
  set.dim = j.at("D").get<int>();
  for (const auto& pair : j.at("alphas")) {
    if (!pair.is_array() || pair.size() != 2)
      throw ConfigError("displacement set: each alpha must be [re, im]");
    set.alphas.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  set.kappa = j.at("kappa").get<double>();
  set.validate();
  return set;
}

json affine_map_to_json(const design::AffineMap& map) {
  map.validate();
  std::vector<double> v(map.V.data(), map.V.data() + map.V.size());
  json rows = json::array();
  for (Eigen::Index r = 0; r < map.M.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(map.M.cols()));
    for (Eigen::Index c = 0; c < map.M.cols(); ++c)
      row[static_cast<std::size_t>(c)] = map.M(r, c);
    rows.push_back(row);
  }
  return json{{"D", map.dim},
              {"V", v},
              {"M", rows},
              {"provenance", design::to_string(map.provenance)}};
}

design::AffineMap affine_map_from_json(const json& j) {
  require_keys(j, {"D", "V", "M", "provenance"}, "affine map");
  design::AffineMap map;
  map.dim = j.at("D").get<int>();
  const auto v = j.at("V").get<std::vector<double>>();
  map.V = Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
  const auto& rows = j.at("M");
  if (!rows.is_array() || rows.empty()) throw ConfigError("affine map: M must be a 2D array");
  map.M = RealMatrix(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index r = 0; r < map.M.rows(); ++r) {
    const auto row = rows[static_cast<std::size_t>(r)].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != map.M.cols())
      throw ConfigError("affine map: ragged M rows");
    for (Eigen::Index c = 0; c < map.M.cols(); ++c) map.M(r, c) = row[static_cast<std::size_t>(c)];
  }
  map.provenance = design::provenance_from_string(j.at("provenance").get<std::string>());
  map.validate();
  return map;
}

std::string records_to_csv(const learn::TrainingSet& ts, std::uint64_t config_hash,
                           std::uint64_t seed) {
  std::ostringstream out;
  out << "# config_hash=" << hash_hex(config_hash) << " seed=" << seed << "\n";
  out << "state_id,k,alpha_re,alpha_im,shots,X,seed\n";
  out << std::setprecision(17);
  for (std::size_t n = 0; n < ts.records.size(); ++n)
    for (const auto& rec : ts.records[n]) {
      const Complex alpha = ts.alphas[static_cast<std::size_t>(rec.displacement_index)];
      out << n << ',' << rec.displacement_index << ',' << alpha.real() << ','
          << alpha.imag() << ',' << rec.shots << ',' << rec.estimate << ',' << rec.seed
          << "\n";
    }
  return out.str();
}

json training_set_sidecar(const learn::TrainingSet& ts, std::uint64_t config_hash,
                          std::uint64_t seed) {
  return json{{"D", ts.dim},
              {"n_states", ts.n_states()},
              {"n_observables", static_cast<int>(ts.alphas.size())},
              {"row_order", "state-major, k ascending"},
              {"provenance", ts.provenance},
              {"config_hash", hash_hex(config_hash)},
              {"seed", seed}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
}

json load_json(const std::string& path) {
  const std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + path);
  return j;
}

void save_json(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string hash_hex(std::uint64_t hash) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << hash;
  return out.str();
}

}  // namespace qrtomo::io
