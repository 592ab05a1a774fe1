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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "qrtomo/cli.hpp"
#include "qrtomo/types.hpp"

namespace {

struct GlobalFlags {
  std::string config_path;
  std::string out_dir;
  bool out_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, GlobalFlags& flags) {
  cmd->add_option("--config", flags.config_path, "Experiment config JSON")->required();
  cmd->add_option("--out", flags.out_dir, "Output directory override")
      ->each([&flags](const std::string&) { flags.out_set = true; });
  cmd->add_option("--seed", flags.seed, "Master seed override")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  cmd->add_option("--threads", flags.threads, "Eigen thread count");
}

qrtomo::cli::ExperimentConfig load_config(const GlobalFlags& flags) {
  qrtomo::cli::ExperimentConfig cfg = qrtomo::cli::load_experiment_config(flags.config_path);
  if (flags.out_set) cfg.out_dir = flags.out_dir;
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.threads > 0) Eigen::setNbThreads(flags.threads);
  return cfg;
}

void report(const std::vector<std::string>& written) {
  for (const std::string& path : written) std::cout << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrtomo: cavity-state tomography with learnt measurement maps"};
  app.require_subcommand(1);

  GlobalFlags opt_flags, learn_flags, rec_flags, err_flags;
  CLI::App* opt = app.add_subcommand("optimize", "Optimize a displacement set");
  add_common(opt, opt_flags);
  CLI::App* lrn = app.add_subcommand("learn", "Build idealised and learnt maps");
  add_common(lrn, learn_flags);
  CLI::App* rec = app.add_subcommand("reconstruct", "Reconstruct the kitten suite");
  add_common(rec, rec_flags);
  CLI::App* err = app.add_subcommand("observable-errors", "Per-observable error tables");
  add_common(err, err_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (opt->parsed()) report(qrtomo::cli::cmd_optimize(load_config(opt_flags)));
    if (lrn->parsed()) report(qrtomo::cli::cmd_learn(load_config(learn_flags)));
    if (rec->parsed()) report(qrtomo::cli::cmd_reconstruct(load_config(rec_flags)));
    if (err->parsed()) report(qrtomo::cli::cmd_observable_errors(load_config(err_flags)));
  } catch (const qrtomo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qrtomo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
