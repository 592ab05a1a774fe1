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

#include "qrtomo/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "qrtomo/io.hpp"
#include "qrtomo/reconstruct.hpp"

namespace qrtomo::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const char* scope) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : known)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError("config: unknown key '" + it.key() + "' in " + scope);
  }
}

void apply_device_overrides(const json& j, dynamics::DeviceParams& device) {
  reject_unknown(j,
                 {"omega_q", "omega_c", "omega_r", "chi_qq", "chi_cc", "chi_cq", "chi_qr",
                  "chi_cr", "chi_cq_prime", "T_q1", "T_qphi", "T_c1", "T_r1"},
                 "device");
  const auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("omega_q", device.omega_q);
  get("omega_c", device.omega_c);
  get("omega_r", device.omega_r);
  get("chi_qq", device.chi_qq);
  get("chi_cc", device.chi_cc);
  get("chi_cq", device.chi_cq);
  get("chi_qr", device.chi_qr);
  get("chi_cr", device.chi_cr);
  get("chi_cq_prime", device.chi_cq_prime);
  get("T_q1", device.T_q1);
  get("T_qphi", device.T_qphi);
  get("T_c1", device.T_c1);
  get("T_r1", device.T_r1);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void ensure_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
}

std::string provenance_header(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "# config_hash=" << io::hash_hex(cfg.config_hash) << " seed=" << cfg.seed << "\n";
  return out.str();
}

void stamp(json& j, const ExperimentConfig& cfg) {
  j["config_hash"] = io::hash_hex(cfg.config_hash);
  j["seed"] = cfg.seed;
}

learn::AcquireOptions acquire_options(const ExperimentConfig& cfg) {
  learn::AcquireOptions opts;
  opts.shots = cfg.shots;
  opts.noise = cfg.noise;
  opts.finite_pulses = cfg.finite_pulses;
  opts.degrade = cfg.degrade;
  opts.degrade_strength = cfg.degrade_strength;
  opts.readout = cfg.readout;
  opts.guard_levels = cfg.guard_levels;
  opts.sim_dim = cfg.sim_dim;
  opts.seed = cfg.seed;
  return opts;
}

design::DisplacementSet resolve_set(const ExperimentConfig& cfg, int d) {
  if (cfg.displacement_set == "optimize") {
    design::OptimizeOptions opts;
    opts.iters = cfg.iters;
    opts.restarts = cfg.restarts;
    opts.seed = mix_seed(cfg.seed, 0x6f7074ULL, static_cast<std::uint64_t>(d));
    return design::optimize_displacements(d, opts).set;
  }
  design::DisplacementSet set =
      io::displacement_set_from_json(io::load_json(cfg.displacement_set));
  if (set.dim != d)
    throw ConfigError("config: displacement set file is for D=" + std::to_string(set.dim) +
                      ", expected D=" + std::to_string(d));
  return set;
}

const std::vector<std::pair<std::string, fock::KittenVariant>> kKittens = {
    {"kitten_plus", fock::KittenVariant::plus},
    {"kitten_minus", fock::KittenVariant::minus},
    {"kitten_y_plus", fock::KittenVariant::y_plus},
    {"kitten_y_minus", fock::KittenVariant::y_minus},
};

constexpr int kKittenPrepDim = 16;
constexpr long kExpectationShotsProxy = 100000;
constexpr std::uint64_t kKittenTagBase = 0x6b69ULL;

long effective_shots(const ExperimentConfig& cfg) {
  // Expectation-value data carries no shot noise; the pseudo-likelihood
  // still needs a finite width, so a large proxy count stands in.
  return cfg.shots > 0 ? cfg.shots : kExpectationShotsProxy;
}

std::string csv_number(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

const std::vector<std::pair<std::string, learn::Perturbation>> sign_combos() {
  std::vector<std::pair<std::string, learn::Perturbation>> combos;
  for (const int chi_sign : {+1, -1})
    for (const int higher_sign : {+1, -1}) {
      learn::Perturbation pert;
      pert.chi_sign = chi_sign;
      pert.higher_sign = higher_sign;
      combos.emplace_back(std::string(chi_sign > 0 ? "p" : "m") +
                              (higher_sign > 0 ? "p" : "m"),
                          pert);
    }
  return combos;
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j, const std::string& raw_text) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown(j,
                 {"D", "D_list", "shots", "noise", "finite_pulses", "degrade",
                  "degrade_strength", "readout_error", "device", "displacement_set", "nu",
                  "seed", "out_dir", "restarts", "iters", "simulated_maps", "kitten_alpha",
                  "mcmc", "guard_levels", "sim_dim"},
                 "config");

  ExperimentConfig cfg;
  cfg.config_hash = fnv1a64(raw_text);

  if (j.contains("D") && j.contains("D_list"))
    throw ConfigError("config: give either 'D' or 'D_list', not both");
  if (j.contains("D"))
    cfg.dims = {j.at("D").get<int>()};
  else if (j.contains("D_list"))
    cfg.dims = j.at("D_list").get<std::vector<int>>();
  else
    throw ConfigError("config: missing field 'D'");
  if (cfg.dims.empty()) throw ConfigError("config: 'D_list' must not be empty");
  for (const int d : cfg.dims)
    if (d < 2) throw ConfigError("config: D must be at least 2");

  if (j.contains("shots")) cfg.shots = j.at("shots").get<long>();
  if (cfg.shots < 0) throw ConfigError("config: shots must be non-negative");
  if (j.contains("noise")) cfg.noise = j.at("noise").get<bool>();
  if (j.contains("finite_pulses")) cfg.finite_pulses = j.at("finite_pulses").get<bool>();
  if (j.contains("degrade")) cfg.degrade = j.at("degrade").get<bool>();
  if (j.contains("degrade_strength")) {
    cfg.degrade_strength = j.at("degrade_strength").get<double>();
    if (cfg.degrade_strength < 0.0)
      throw ConfigError("config: degrade_strength must be non-negative");
  }
  if (j.contains("readout_error")) {
    const json& r = j.at("readout_error");
    reject_unknown(r, {"p_e_given_g", "p_g_given_e"}, "readout_error");
    if (r.contains("p_e_given_g")) cfg.readout.p_e_given_g = r.at("p_e_given_g").get<double>();
    if (r.contains("p_g_given_e")) cfg.readout.p_g_given_e = r.at("p_g_given_e").get<double>();
    if (cfg.readout.p_e_given_g < 0.0 || cfg.readout.p_e_given_g > 1.0 ||
        cfg.readout.p_g_given_e < 0.0 || cfg.readout.p_g_given_e > 1.0)
      throw ConfigError("config: readout error probabilities must lie in [0, 1]");
  }
  if (j.contains("device")) apply_device_overrides(j.at("device"), cfg.device);
  cfg.device.validate();

  if (j.contains("displacement_set"))
    cfg.displacement_set = j.at("displacement_set").get<std::string>();
  if (j.contains("nu")) {
    const json& nu = j.at("nu");
    if (nu.is_string() && nu.get<std::string>() == "cv") {
      cfg.nu_cv = true;
    } else if (nu.is_number()) {
      cfg.nu_cv = false;
      cfg.nu = nu.get<double>();
      if (cfg.nu < 0.0) throw ConfigError("config: nu must be non-negative");
    } else {
      throw ConfigError("config: 'nu' must be \"cv\" or a non-negative number");
    }
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
  if (j.contains("restarts")) cfg.restarts = j.at("restarts").get<int>();
  if (j.contains("iters")) cfg.iters = j.at("iters").get<int>();
  if (cfg.restarts < 1 || cfg.iters < 0)
    throw ConfigError("config: restarts must be >= 1 and iters >= 0");
  if (j.contains("simulated_maps")) cfg.simulated_maps = j.at("simulated_maps").get<bool>();
  if (j.contains("kitten_alpha")) cfg.kitten_alpha = j.at("kitten_alpha").get<double>();
  if (j.contains("mcmc")) {
    const json& m = j.at("mcmc");
    reject_unknown(m, {"n_samples", "thinning"}, "mcmc");
    if (m.contains("n_samples")) cfg.mcmc_samples = m.at("n_samples").get<int>();
    if (m.contains("thinning")) cfg.mcmc_thinning = m.at("thinning").get<int>();
    if (cfg.mcmc_samples < 1 || cfg.mcmc_thinning < 1)
      throw ConfigError("config: mcmc counts must be positive");
  }
  if (j.contains("guard_levels")) cfg.guard_levels = j.at("guard_levels").get<int>();
  if (cfg.guard_levels < 0) throw ConfigError("config: guard_levels must be non-negative");
  if (j.contains("sim_dim")) cfg.sim_dim = j.at("sim_dim").get<int>();
  if (cfg.sim_dim < 0) throw ConfigError("config: sim_dim must be non-negative");
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const std::string text = io::read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("malformed JSON in " + path);
  return parse_experiment_config(j, text);
}

LearnedMaps build_maps(const ExperimentConfig& cfg, int d) {
  LearnedMaps out;
  out.set = resolve_set(cfg, d);
  out.beta_i = design::build_idealised_map(out.set);
  out.ts = learn::acquire_training_set(d, out.set.alphas, cfg.device, acquire_options(cfg));
  out.nu = cfg.nu_cv ? learn::select_nu(out.ts, learn::kDefaultNuGrid, 4,
                                        mix_seed(cfg.seed, 0x6376ULL,
                                                 static_cast<std::uint64_t>(d)))
                     : cfg.nu;
  out.beta_l = learn::ridge_fit(out.ts, out.nu);
  return out;
}

std::vector<KittenMeasurement> measure_kitten_suite(const ExperimentConfig& cfg, int d,
                                                    const std::vector<Complex>& alphas) {
  std::vector<KittenMeasurement> suite;
  const int mdim = cfg.sim_dim > 0 ? cfg.sim_dim : d + cfg.guard_levels;
  for (std::size_t i = 0; i < kKittens.size(); ++i) {
    fock::DensityMatrix prep =
        fock::kitten_state(cfg.kitten_alpha, kKittens[i].second, kKittenPrepDim);
    if (cfg.degrade && cfg.degrade_strength > 0.0)
      prep = learn::degrade_state(prep, cfg.device, cfg.degrade_strength);

    KittenMeasurement kc{kKittens[i].first, fock::truncate_state(prep, d), {}, {}};
    learn::AcquireOptions opts = acquire_options(cfg);
    opts.degrade = false;  // preparation noise already applied above
    opts.sim_dim = mdim;
    const fock::DensityMatrix measured = mdim <= prep.dim()
                                             ? fock::truncate_state(prep, mdim)
                                             : fock::embed_state(prep, mdim);
    kc.records = learn::measure_state(measured, alphas, cfg.device, opts, kKittenTagBase + i);
    kc.x = learn::records_to_x(kc.records);
    suite.push_back(std::move(kc));
  }
  return suite;
}

std::vector<std::string> cmd_optimize(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> written;
  for (const int d : cfg.dims) {
    design::OptimizeOptions opts;
    opts.iters = cfg.iters;
    opts.restarts = cfg.restarts;
    opts.seed = mix_seed(cfg.seed, 0x6f7074ULL, static_cast<std::uint64_t>(d));
    const design::OptimizeResult result = design::optimize_displacements(d, opts);

    json j = io::displacement_set_to_json(result.set);
    stamp(j, cfg);
    const std::string set_path = out_path(cfg, "displacement_set_D" + std::to_string(d) + ".json");
    io::save_json(set_path, j);
    written.push_back(set_path);

    std::ostringstream log;
    log << provenance_header(cfg) << "step,kappa\n";
    for (std::size_t i = 0; i < result.trajectory.size(); ++i)
      log << i << ',' << csv_number(result.trajectory[i]) << "\n";
    const std::string log_path = out_path(cfg, "kappa_trajectory_D" + std::to_string(d) + ".csv");
    io::write_text_file(log_path, log.str());
    written.push_back(log_path);
  }
  return written;
}

std::vector<std::string> cmd_learn(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> written;
  std::ostringstream mse_csv;
  mse_csv << provenance_header(cfg) << "D,mse,stderr\n";

  for (const int d : cfg.dims) {
    const LearnedMaps maps = build_maps(cfg, d);

    const auto refit_mse = [&](const reconstruct::RecordBatches& resampled) {
      learn::TrainingSet ts = maps.ts;
      ts.records = resampled;
      for (std::size_t n = 0; n < resampled.size(); ++n)
        ts.xs[n] = learn::records_to_x(resampled[n]);
      return learn::map_mse(maps.beta_i, learn::ridge_fit(ts, maps.nu));
    };
    const reconstruct::BootstrapResult boot = reconstruct::bootstrap(
        maps.ts.records, 100, "map_mse", refit_mse,
        mix_seed(cfg.seed, 0x626f6f74ULL, static_cast<std::uint64_t>(d)));

    mse_csv << d << ',' << csv_number(learn::map_mse(maps.beta_i, maps.beta_l)) << ','
            << csv_number(boot.stderr_) << "\n";

    json ji = io::affine_map_to_json(maps.beta_i);
    stamp(ji, cfg);
    const std::string beta_i_path = out_path(cfg, "beta_I_D" + std::to_string(d) + ".json");
    io::save_json(beta_i_path, ji);
    written.push_back(beta_i_path);

    json jl = io::affine_map_to_json(maps.beta_l);
    stamp(jl, cfg);
    jl["nu"] = maps.nu;
    const std::string beta_l_path = out_path(cfg, "beta_L_D" + std::to_string(d) + ".json");
    io::save_json(beta_l_path, jl);
    written.push_back(beta_l_path);

    const std::string rec_path = out_path(cfg, "records_D" + std::to_string(d) + ".csv");
    io::write_text_file(rec_path, io::records_to_csv(maps.ts, cfg.config_hash, cfg.seed));
    written.push_back(rec_path);
    const std::string meta_path = out_path(cfg, "records_D" + std::to_string(d) + ".meta.json");
    io::save_json(meta_path, io::training_set_sidecar(maps.ts, cfg.config_hash, cfg.seed));
    written.push_back(meta_path);

    std::ostringstream scatter;
    scatter << provenance_header(cfg) << "kind,row,col,idealised,learnt\n";
    for (Eigen::Index r = 0; r < maps.beta_i.V.size(); ++r)
      scatter << "V," << r << ",0," << csv_number(maps.beta_i.V(r)) << ','
              << csv_number(maps.beta_l.V(r)) << "\n";
    for (Eigen::Index r = 0; r < maps.beta_i.M.rows(); ++r)
      for (Eigen::Index c = 0; c < maps.beta_i.M.cols(); ++c)
        scatter << "M," << r << ',' << c << ',' << csv_number(maps.beta_i.M(r, c)) << ','
                << csv_number(maps.beta_l.M(r, c)) << "\n";
    const std::string scatter_path = out_path(cfg, "scatter_D" + std::to_string(d) + ".csv");
    io::write_text_file(scatter_path, scatter.str());
    written.push_back(scatter_path);

    if (cfg.simulated_maps) {
      for (const auto& [tag, pert] : sign_combos()) {
        const design::AffineMap sim =
            learn::simulated_map(d, maps.set.alphas, cfg.device, pert, acquire_options(cfg));
        json js = io::affine_map_to_json(sim);
        stamp(js, cfg);
        const std::string sim_path =
            out_path(cfg, "beta_sim_D" + std::to_string(d) + "_" + tag + ".json");
        io::save_json(sim_path, js);
        written.push_back(sim_path);
      }
    }
  }

  const std::string mse_path = out_path(cfg, "map_mse.csv");
  io::write_text_file(mse_path, mse_csv.str());
  written.push_back(mse_path);
  return written;
}

std::vector<std::string> cmd_reconstruct(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> written;
  const int d = cfg.dims.front();
  const LearnedMaps maps = build_maps(cfg, d);
  const auto kittens = measure_kitten_suite(cfg, d, maps.set.alphas);
  const long shots_eff = effective_shots(cfg);

  std::vector<design::AffineMap> sim_maps;
  std::vector<std::string> sim_tags;
  for (const auto& [tag, pert] : sign_combos()) {
    sim_maps.push_back(
        learn::simulated_map(d, maps.set.alphas, cfg.device, pert, acquire_options(cfg)));
    sim_tags.push_back(tag);
  }

  std::ostringstream table;
  table << provenance_header(cfg) << "state,mode,fidelity,stderr,band_min,band_max\n";

  for (std::size_t ki = 0; ki < kittens.size(); ++ki) {
    const auto& kitten = kittens[ki];

    const auto run_mode = [&](const design::AffineMap& beta, const std::string& mode,
                              std::uint64_t mode_tag) {
      reconstruct::McmcConfig mc;
      mc.n_samples = cfg.mcmc_samples;
      mc.thinning = cfg.mcmc_thinning;
      mc.seed = mix_seed(cfg.seed, 0x6d636dULL, ki, mode_tag);
      const auto rec = reconstruct::reconstruct_state(beta, kitten.x, shots_eff, mc);
      return std::pair<reconstruct::Reconstruction, reconstruct::McmcConfig>(rec, mc);
    };

    const auto bootstrap_fidelity = [&](const design::AffineMap& beta,
                                        const std::string& name, std::uint64_t mode_tag) {
      reconstruct::McmcConfig small;
      small.n_samples = std::min(cfg.mcmc_samples, 128);
      small.thinning = std::min(cfg.mcmc_thinning, 16);
      small.seed = mix_seed(cfg.seed, 0x6d636dULL, ki, mode_tag);
      const auto stat = [&](const reconstruct::RecordBatches& resampled) {
        const RealVector x2 = learn::records_to_x(resampled[0]);
        const auto rec = reconstruct::reconstruct_state(beta, x2, shots_eff, small);
        return fock::fidelity(rec.rho_bme, kitten.target);
      };
      return reconstruct::bootstrap({kitten.records}, 100, name, stat,
                                    mix_seed(cfg.seed, 0x66626f6fULL, ki, mode_tag));
    };

    const auto emit_mode = [&](const design::AffineMap& beta, const std::string& mode,
                               std::uint64_t mode_tag) {
      const auto [rec, mc] = run_mode(beta, mode, mode_tag);
      const double fid = fock::fidelity(rec.rho_bme, kitten.target);
      const auto boot = bootstrap_fidelity(beta, "fidelity_" + mode, mode_tag);
      table << kitten.name << ',' << mode << ',' << csv_number(fid) << ','
            << csv_number(boot.stderr_) << ',' << csv_number(fid) << ',' << csv_number(fid)
            << "\n";

      json rho_json = io::matrix_to_json(rec.rho_bme.matrix());
      stamp(rho_json, cfg);
      const std::string rho_path = out_path(cfg, "rho_" + kitten.name + "_" + mode + ".json");
      io::save_json(rho_path, rho_json);
      written.push_back(rho_path);

      json report{{"target_id", kitten.name},
                  {"map_provenance", mode},
                  {"fidelity", fid},
                  {"min_eig_LS", rec.linear.min_eigenvalue},
                  {"n_samples", mc.n_samples},
                  {"acceptance_rate", rec.acceptance_rate},
                  {"seed", mc.seed}};
      stamp(report, cfg);
      const std::string report_path =
          out_path(cfg, "report_" + kitten.name + "_" + mode + ".json");
      io::save_json(report_path, report);
      written.push_back(report_path);
    };

    emit_mode(maps.beta_i, "idealised", 0);
    emit_mode(maps.beta_l, "learnt", 1);

    std::vector<double> sim_fids;
    for (std::size_t s = 0; s < sim_maps.size(); ++s) {
      reconstruct::McmcConfig mc;
      mc.n_samples = cfg.mcmc_samples;
      mc.thinning = cfg.mcmc_thinning;
      mc.seed = mix_seed(cfg.seed, 0x6d636dULL, ki, 2 + s);
      const auto rec = reconstruct::reconstruct_state(sim_maps[s], kitten.x, shots_eff, mc);
      const double fid = fock::fidelity(rec.rho_bme, kitten.target);
      sim_fids.push_back(fid);

      json rho_json = io::matrix_to_json(rec.rho_bme.matrix());
      stamp(rho_json, cfg);
      const std::string rho_path =
          out_path(cfg, "rho_" + kitten.name + "_simulated_" + sim_tags[s] + ".json");
      io::save_json(rho_path, rho_json);
      written.push_back(rho_path);
    }
    const double band_min = *std::min_element(sim_fids.begin(), sim_fids.end());
    const double band_max = *std::max_element(sim_fids.begin(), sim_fids.end());
    double mean = 0.0;
    for (const double f : sim_fids) mean += f;
    mean /= static_cast<double>(sim_fids.size());
    double var = 0.0;
    for (const double f : sim_fids) var += (f - mean) * (f - mean);
    const double spread_std =
        sim_fids.size() > 1 ? std::sqrt(var / (static_cast<double>(sim_fids.size()) - 1)) : 0.0;
    table << kitten.name << ",simulated," << csv_number(mean) << ','
          << csv_number(spread_std) << ',' << csv_number(band_min) << ','
          << csv_number(band_max) << "\n";
  }

  const std::string table_path = out_path(cfg, "fidelities.csv");
  io::write_text_file(table_path, table.str());
  written.push_back(table_path);
  return written;
}

std::vector<std::string> cmd_observable_errors(const ExperimentConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> written;
  const int d = cfg.dims.front();
  const LearnedMaps maps = build_maps(cfg, d);
  const auto kittens = measure_kitten_suite(cfg, d, maps.set.alphas);

  for (const auto& kitten : kittens) {
    const RealVector y = fock::param_of(kitten.target.matrix());
    const RealVector err_i = learn::per_observable_errors(kitten.x, maps.beta_i, y);
    const RealVector err_l = learn::per_observable_errors(kitten.x, maps.beta_l, y);

    std::vector<int> order(maps.set.alphas.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(maps.set.alphas[static_cast<std::size_t>(a)]) <
             std::abs(maps.set.alphas[static_cast<std::size_t>(b)]);
    });

    std::ostringstream out;
    out << provenance_header(cfg) << "k,alpha_re,alpha_im,alpha_abs,idealised,learnt\n";
    for (const int k : order) {
      const Complex a = maps.set.alphas[static_cast<std::size_t>(k)];
      out << k << ',' << csv_number(a.real()) << ',' << csv_number(a.imag()) << ','
          << csv_number(std::abs(a)) << ',' << csv_number(err_i(k)) << ','
          << csv_number(err_l(k)) << "\n";
    }
    const std::string path = out_path(cfg, "observable_errors_" + kitten.name + ".csv");
    io::write_text_file(path, out.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace qrtomo::cli
