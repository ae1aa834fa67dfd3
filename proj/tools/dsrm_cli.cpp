// Copyright 2026 The dsrm Authors. All Rights Reserved.
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

// dsrm_cli: run scenarios, certify saved estimates, export the agent graph.
//
// Exit codes:
//   0  converged            1  usage error
//   2  max_rounds reached   3  config parse/validation error
//   4  numerical failure    5  file I/O error
//   6  no connected graph

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dsrm/config.hpp"
#include "dsrm/csv.hpp"
#include "dsrm/errors.hpp"
#include "dsrm/scenario.hpp"

namespace {

enum ExitCode {
  kOk = 0,
  kUsage = 1,
  kMaxRounds = 2,
  kConfig = 3,
  kNumerical = 4,
  kIo = 5,
  kConnectivity = 6,
};

void print_certificate(const dsrm::CertificateReport& rep) {
  std::printf("spectral_residual,lambda_star,condition_met,res_eq13,res_eq14,res_eq15\n");
  std::printf("%s,%s,%d,%s,%s,%s\n", dsrm::format_real(rep.spectral_residual).c_str(),
              dsrm::format_real(rep.lambda_star).c_str(), rep.condition_met ? 1 : 0,
              dsrm::format_real(rep.res_eq13).c_str(), dsrm::format_real(rep.res_eq14).c_str(),
              dsrm::format_real(rep.res_eq15).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed sparsity-regularized rank minimization"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string estimates_dir;

  CLI::App* run = app.add_subcommand("run", "Run a scenario and write its CSV outputs");
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Override the output directory");

  CLI::App* certify = app.add_subcommand("certify", "Certify saved estimates against their data");
  certify->add_option("--estimates", estimates_dir, "Directory holding l_hat/q_hat/a_hat.csv")
      ->required();
  certify->add_option("--config", config_path, "Scenario config file")->required();

  CLI::App* graph = app.add_subcommand("graph", "Write nodes.csv and edges.csv of the agent graph");
  graph->add_option("--config", config_path, "Scenario config file")->required();
  graph->add_option("--out", out_dir, "Override the output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    dsrm::ScenarioConfig cfg = dsrm::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_path = *out_dir;

    if (*run) {
      const dsrm::ScenarioResult res = dsrm::run_scenario(cfg, true);
      std::printf("%s: %d rounds, %s; outputs in %s\n", dsrm::to_string(cfg.scenario).c_str(),
                  res.run.rounds, res.run.converged ? "converged" : "max_rounds reached",
                  cfg.out_path.c_str());
      return res.exit_status() == 0 ? kOk : kMaxRounds;
    }
    if (*certify) {
      print_certificate(dsrm::certify_estimates(cfg, estimates_dir));
      return kOk;
    }
    if (*graph) {
      dsrm::write_graph_csvs(dsrm::build_instance(cfg), cfg.out_path);
      std::printf("graph written to %s\n", cfg.out_path.c_str());
      return kOk;
    }
  } catch (const dsrm::ParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const dsrm::ValidationError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const dsrm::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kIo;
  } catch (const dsrm::ConnectivityFailure& e) {
    std::fprintf(stderr, "connectivity error: %s\n", e.what());
    return kConnectivity;
  } catch (const dsrm::Error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  }
  return kUsage;
}
