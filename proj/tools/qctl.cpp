// Copyright 2026 The qctl Authors
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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qctl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qctl: batch toolkit for modeling and control of finite-dimensional "
               "quantum systems"};
  app.require_subcommand(1);

  struct CommonArgs {
    std::string config;
    std::string out;
  };
  std::map<std::string, CommonArgs> args;

  for (const std::string& name : qctl::cli::known_commands()) {
    if (name == "slh") continue;
    CLI::App* sub = app.add_subcommand(name, qctl::cli::describe(name).substr(
                                                 0, name.size() + 60));
    auto& a = args[name];
    sub->add_option("--config", a.config, "JSON run configuration")->required();
    sub->add_option("--out", a.out, "output directory for artifacts")->required();
  }

  // sme flag overrides.
  std::int64_t sme_seed = -1, sme_ntraj = -1;
  double sme_dt = -1;
  std::string sme_law;
  {
    CLI::App* sme = app.get_subcommand("sme");
    sme->add_option("--seed", sme_seed, "override the config seed");
    sme->add_option("--ntraj", sme_ntraj, "override the trajectory count");
    sme->add_option("--dt", sme_dt, "override the step size");
    sme->add_option("--law", sme_law, "override the feedback law")
        ->check(CLI::IsMember({"none", "affine", "patched", "lyapunov"}));
  }

  // slh takes its inputs as separate files.
  std::string slh_components, slh_network, slh_emit = "slh", slh_out;
  {
    CLI::App* slh = app.add_subcommand("slh", "reduce an (S,L,H) network");
    slh->add_option("--components", slh_components, "component table JSON")->required();
    slh->add_option("--network", slh_network, "network expression file")->required();
    slh->add_option("--emit", slh_emit, "what to emit")
        ->check(CLI::IsMember({"slh", "mme"}));
    slh->add_option("--out", slh_out, "output directory for artifacts")->required();
  }

  std::string describe_command;
  {
    CLI::App* desc = app.add_subcommand("describe", "print a command's schema and example");
    desc->add_option("command", describe_command, "command name")->required();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    if (name == "describe") {
      std::cout << qctl::cli::describe(describe_command);
      return qctl::cli::kOk;
    }
    if (name == "slh")
      return qctl::cli::run_slh(slh_components, slh_network, slh_emit, slh_out);

    qctl::io::json config = qctl::io::load_json_file(args[name].config);
    if (name == "sme") {
      if (sme_seed >= 0) config["seed"] = sme_seed;
      if (sme_ntraj >= 0) config["n_traj"] = sme_ntraj;
      if (sme_dt > 0) config["dt"] = sme_dt;
      if (!sme_law.empty()) config["law"] = sme_law;
    }
    return qctl::cli::dispatch(name, config, args[name].out);
  } catch (const qctl::ValidationError& err) {
    std::cerr << "validation error: " << err.what() << "\n";
    return qctl::cli::kValidationError;
  } catch (const qctl::NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return qctl::cli::kNumericalError;
  }
}
