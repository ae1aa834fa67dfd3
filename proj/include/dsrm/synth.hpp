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

// Synthetic ground truth and per-application observations.

#ifndef DSRM_SYNTH_HPP_
#define DSRM_SYNTH_HPP_

#include <cstdint>
#include <string>

#include "dsrm/network.hpp"
#include "dsrm/numerics.hpp"
#include "dsrm/rng.hpp"

namespace dsrm {

enum class ScenarioKind { kDuna, kDrpca, kDmc, kDlasso };

std::string to_string(ScenarioKind kind);
// Throws ValidationError("scenario", ...) on an unknown name.
ScenarioKind parse_scenario_kind(const std::string& name);

struct GroundTruth {
  Matrix x0;  // low-rank component in observation space (zero-sized for dlasso)
  Matrix a0;  // sparse F x T component, entries in {-1, 0, 1} (zero-sized for dmc)
  Matrix z0;  // flow-level low-rank traffic, duna only (x0 = R z0)
  int true_rank = 0;
};

struct SampleMask {
  Matrix mask;  // entries in {0, 1}
};

// W * Z' with W rows x r ~ N(0, w_var) and Z cols x r ~ N(0, z_var).
Matrix gen_low_rank(int rows, int cols, int r, double w_var, double z_var, Rng& rng);

// i.i.d. entries: -1 and +1 with probability pi/2 each, 0 otherwise.
Matrix gen_sparse(int f, int t, double pi, Rng& rng);

Matrix gen_noise(int rows, int cols, double sigma, Rng& rng);

SampleMask gen_mask(int rows, int cols, double p, Rng& rng);

struct SynthParams {
  ScenarioKind kind = ScenarioKind::kDuna;
  int n_agents = 1;
  int t_cols = 1;
  int f_rows = 0;  // drpca/dmc: rows of Y; dlasso: columns of R; duna: must match routing
  int l_rows = 0;  // dlasso with a Gaussian design: rows of R
  int rank = 0;
  double sigma = 0.0;
  double pi = 0.0;
  double p_obs = 1.0;
  std::uint64_t seed = 0;
};

struct ScenarioData {
  ScenarioKind kind = ScenarioKind::kDuna;
  Matrix y;     // observations; masked (P_Omega(Y)) for dmc
  Matrix mask;  // same shape as y; all ones unless dmc
  Matrix r;     // duna/dlasso operator; zero-sized otherwise
  GroundTruth truth;
  RowPartition partition;  // agent row blocks of y (and r)
};

// Composes the generators per application:
//   duna   Y = R (Z0 + A0) + V, x0 := R Z0, rows split by link ownership
//   drpca  Y = X0 + A0 + V, equal row blocks
//   dmc    P(Y) = Omega .* (X0 + V), equal row blocks
//   dlasso Y = R A0 + V, R from `routing` (link ownership) or Gaussian
//          N(0, 1/l_rows) entries with equal row blocks
// Each generator draws from its own substream of params.seed.
ScenarioData build_scenario_data(const SynthParams& params, const Graph* graph = nullptr,
                                 const RoutingMatrix* routing = nullptr);

}  // namespace dsrm

#endif  // DSRM_SYNTH_HPP_
