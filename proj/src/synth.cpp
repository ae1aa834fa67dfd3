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

#include "dsrm/synth.hpp"

#include <cmath>
#include <random>

#include "dsrm/errors.hpp"

namespace dsrm {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kDuna:
      return "duna";
    case ScenarioKind::kDrpca:
      return "drpca";
    case ScenarioKind::kDmc:
      return "dmc";
    case ScenarioKind::kDlasso:
      return "dlasso";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& name) {
  if (name == "duna") return ScenarioKind::kDuna;
  if (name == "drpca") return ScenarioKind::kDrpca;
  if (name == "dmc") return ScenarioKind::kDmc;
  if (name == "dlasso") return ScenarioKind::kDlasso;
  throw ValidationError("scenario", "unknown scenario '" + name + "'");
}

namespace {

Matrix gaussian(int rows, int cols, double variance, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

}  // namespace

Matrix gen_low_rank(int rows, int cols, int r, double w_var, double z_var, Rng& rng) {
  if (r < 0 || r > std::min(rows, cols)) throw ShapeMismatch("gen_low_rank: rank out of range");
  if (r == 0) return Matrix::Zero(rows, cols);
  const Matrix w = gaussian(rows, r, w_var, rng);
  const Matrix z = gaussian(cols, r, z_var, rng);
  return w * z.transpose();
}

Matrix gen_sparse(int f, int t, double pi, Rng& rng) {
  if (pi < 0.0 || pi > 1.0) throw ShapeMismatch("gen_sparse: pi must lie in [0, 1]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix a(f, t);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double u = unit(rng);
    a.data()[i] = u < 0.5 * pi ? -1.0 : (u < pi ? 1.0 : 0.0);
  }
  return a;
}

Matrix gen_noise(int rows, int cols, double sigma, Rng& rng) {
  if (sigma < 0.0) throw ShapeMismatch("gen_noise: sigma must be >= 0");
  if (sigma == 0.0) return Matrix::Zero(rows, cols);
  return gaussian(rows, cols, sigma * sigma, rng);
}

SampleMask gen_mask(int rows, int cols, double p, Rng& rng) {
  if (p < 0.0 || p > 1.0) throw ShapeMismatch("gen_mask: p must lie in [0, 1]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleMask out{Matrix(rows, cols)};
  for (Eigen::Index i = 0; i < out.mask.size(); ++i) {
    out.mask.data()[i] = unit(rng) < p ? 1.0 : 0.0;
  }
  return out;
}

ScenarioData build_scenario_data(const SynthParams& p, const Graph* graph,
                                 const RoutingMatrix* routing) {
  if (p.n_agents < 1 || p.t_cols < 1) throw ShapeMismatch("build_scenario_data: bad dimensions");
  ScenarioData out;
  out.kind = p.kind;
  out.truth.true_rank = p.rank;
  const int t = p.t_cols;
  Rng low_rank_rng = make_rng(p.seed, Stream::kLowRank);
  Rng sparse_rng = make_rng(p.seed, Stream::kSparse);
  Rng noise_rng = make_rng(p.seed, Stream::kNoise);

  switch (p.kind) {
    case ScenarioKind::kDuna: {
      if (routing == nullptr || graph == nullptr) {
        throw ShapeMismatch("duna: routing matrix and graph required");
      }
      if (graph->n_nodes != p.n_agents) throw ShapeMismatch("duna: graph size != n_agents");
      const int f = routing->num_flows();
      const int l = routing->num_links();
      if (p.f_rows != 0 && p.f_rows != f) {
        throw ShapeMismatch("duna: f_flows=" + std::to_string(p.f_rows) +
                            " but routing has " + std::to_string(f) + " flows");
      }
      out.r = routing->entries;
      out.truth.z0 = gen_low_rank(f, t, p.rank, 100.0 / f, 100.0 / t, low_rank_rng);
      out.truth.x0 = out.r * out.truth.z0;
      out.truth.a0 = gen_sparse(f, t, p.pi, sparse_rng);
      out.y = out.truth.x0 + out.r * out.truth.a0 + gen_noise(l, t, p.sigma, noise_rng);
      out.mask = Matrix::Ones(l, t);
      out.partition = partition_rows(*graph, *routing);
      break;
    }
    case ScenarioKind::kDrpca: {
      const int f = p.f_rows;
      if (f < 1) throw ShapeMismatch("drpca: f_flows must be >= 1");
      out.truth.x0 = gen_low_rank(f, t, p.rank, 100.0 / f, 100.0 / t, low_rank_rng);
      out.truth.a0 = gen_sparse(f, t, p.pi, sparse_rng);
      out.y = out.truth.x0 + out.truth.a0 + gen_noise(f, t, p.sigma, noise_rng);
      out.mask = Matrix::Ones(f, t);
      out.partition = equal_partition(f, p.n_agents);
      break;
    }
    case ScenarioKind::kDmc: {
      const int l = p.f_rows;
      if (l < 1) throw ShapeMismatch("dmc: row count must be >= 1");
      Rng mask_rng = make_rng(p.seed, Stream::kMask);
      out.truth.x0 = gen_low_rank(l, t, p.rank, 100.0 / l, 100.0 / t, low_rank_rng);
      out.mask = gen_mask(l, t, p.p_obs, mask_rng).mask;
      out.y = out.mask.cwiseProduct(out.truth.x0 + gen_noise(l, t, p.sigma, noise_rng));
      out.partition = equal_partition(l, p.n_agents);
      break;
    }
    case ScenarioKind::kDlasso: {
      int f = p.f_rows;
      if (routing != nullptr) {
        if (graph == nullptr) throw ShapeMismatch("dlasso: routed design needs the graph");
        if (f != 0 && f != routing->num_flows()) throw ShapeMismatch("dlasso: f_flows != flows");
        f = routing->num_flows();
        out.r = routing->entries;
        out.partition = partition_rows(*graph, *routing);
      } else {
        if (f < 1 || p.l_rows < 1) throw ShapeMismatch("dlasso: f_flows and l_rows must be >= 1");
        Rng design_rng = make_rng(p.seed, Stream::kDesign);
        out.r = gaussian(p.l_rows, f, 1.0 / p.l_rows, design_rng);
        out.partition = equal_partition(p.l_rows, p.n_agents);
      }
      const int l = static_cast<int>(out.r.rows());
      out.truth.a0 = gen_sparse(f, t, p.pi, sparse_rng);
      out.truth.true_rank = 0;
      out.y = out.r * out.truth.a0 + gen_noise(l, t, p.sigma, noise_rng);
      out.mask = Matrix::Ones(l, t);
      break;
    }
  }
  if (out.partition.num_agents() != p.n_agents) {
    throw ShapeMismatch("build_scenario_data: partition does not cover n_agents");
  }
  if (out.partition.total_rows() != out.y.rows()) {
    throw ShapeMismatch("build_scenario_data: partition does not cover all rows");
  }
  return out;
}

}  // namespace dsrm
