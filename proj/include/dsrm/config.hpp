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

// Scenario configuration files.
//
// Grammar: one `key = value` per line, `#` starts a comment, blank lines
// are ignored. Unknown or repeated keys are errors.

#ifndef DSRM_CONFIG_HPP_
#define DSRM_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "dsrm/synth.hpp"

namespace dsrm {

enum class Topology { kGeometric, kPath, kStar, kComplete };

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::kDuna;
  Topology topology = Topology::kGeometric;
  int n_agents = 10;
  int t_cols = 60;
  int f_flows = 0;  // 0: N(N-1) OD flows for duna and routed dlasso, 60 otherwise
  int l_rows = 0;   // dlasso only: > 0 selects a Gaussian design with this many rows
  int rank_true = 3;
  int rho = 3;
  double sigma = 0.01;
  double pi = 0.02;
  double p_obs = 1.0;
  double comm_range = 0.5;
  std::optional<double> lambda_star;  // default lambda_star_frac * ||Y||
  std::optional<double> lambda_1;     // default lambda_1_frac * ||R'Y||_inf
  double lambda_star_frac = 0.3;
  double lambda_1_frac = 0.1;
  double c = 0.1;
  double mu = 0.1;
  double tol = 1e-8;
  int max_rounds = 1000;
  std::uint64_t seed = 1;
  std::string out_path = "out";
  double oracle_tol = 1e-10;
  int oracle_max_iter = 50000;
  int threads = 1;
  int roc_thresholds = 200;
  double cert_slack = 1e-4;

  // Rows of the sparse block / columns of R.
  int resolved_f() const;
  // Throws ValidationError naming the first offending field.
  void validate() const;
};

// Throws ParseError (with line number) on malformed lines and
// ValidationError on missing `scenario` or out-of-range values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

std::string to_string(Topology t);

}  // namespace dsrm

#endif  // DSRM_CONFIG_HPP_
