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

// End-to-end runs: graph, synthetic data, distributed solve, centralized
// reference, metrics and output files.

#ifndef DSRM_SCENARIO_HPP_
#define DSRM_SCENARIO_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsrm/admm.hpp"
#include "dsrm/config.hpp"
#include "dsrm/metrics.hpp"
#include "dsrm/oracles.hpp"
#include "dsrm/synth.hpp"

namespace dsrm {

// Everything derived from a config before any solver runs.
struct Instance {
  ScenarioConfig config;
  GeometricGraph graph;  // positions empty for non-geometric topologies
  std::optional<RoutingMatrix> routing;
  ScenarioData data;
  P1Data pooled;  // the agents' data stacked, as seen by the centralized oracle
  Hyperparams hp;
  Problem problem;
};

// Throws ConnectivityFailure when no connected geometric graph is found.
Instance build_instance(const ScenarioConfig& config);

// Network-level estimates assembled from agent states.
struct Estimates {
  Matrix l;  // stacked L_n (zero-sized for dlasso)
  Matrix q;  // average of Q_n
  Matrix x;  // l * q'
  Matrix a;  // average of A_n (duna, dlasso) or stacked A_n (drpca)
};

Estimates network_estimates(const Instance& inst, const std::vector<AgentState>& states);
MetricsRow metrics_row(const Instance& inst, int round, const std::vector<AgentState>& states);

struct ScenarioResult {
  RunResult run;
  std::vector<MetricsRow> metrics;
  Estimates distributed;
  P1Solution centralized;
  Factorization centralized_factors;
  CertificateReport certificate;              // distributed estimates
  CertificateReport centralized_certificate;  // centralized solution
  std::vector<RocPoint> roc;                  // duna and drpca only
  std::optional<double> auc;
  double cost_distributed = 0.0;  // (P3) at the network estimates
  double cost_centralized = 0.0;  // (P1) at the centralized solution
  double rel_err_x = 0.0;
  double rel_err_a = 0.0;
  double rel_err_x_centralized = 0.0;
  double rel_err_a_centralized = 0.0;
  double x_distance_to_centralized = 0.0;  // ||X - Xc||_F / (1 + ||Xc||_F)
  double max_agent_a_distance = 0.0;       // max_n ||A_n - Ac||_F / (1 + ||Ac||_F), consented A
  double max_agent_q_distance = 0.0;       // max_n ||L Q_n' - Xc||_F / (1 + ||Xc||_F)

  double cost_gap() const;  // |cost_d - cost_c| / cost_c
  std::vector<std::pair<std::string, double>> summary() const;
  // 0 converged, 2 max_rounds reached.
  int exit_status() const { return run.converged ? 0 : 2; }
};

// Runs everything; with write_files, fills config.out_path (created if
// needed) with metrics.csv, x_hat/a_hat/l_hat/q_hat.csv, roc.csv,
// certificate.csv, certificate_centralized.csv and summary.csv.
ScenarioResult run_scenario(const ScenarioConfig& config, bool write_files = true);

void write_certificate_csv(const std::string& path, const CertificateReport& rep);

// nodes.csv (node,x,y) and edges.csv (u,v) under `dir`.
void write_graph_csvs(const Instance& inst, const std::string& dir);

// Rebuilds the data of `config` and certifies the l_hat, q_hat, a_hat CSVs
// found in `dir`.
CertificateReport certify_estimates(const ScenarioConfig& config, const std::string& dir);

}  // namespace dsrm

#endif  // DSRM_SCENARIO_HPP_
