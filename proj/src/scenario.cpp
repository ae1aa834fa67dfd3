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

#include "dsrm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "dsrm/csv.hpp"
#include "dsrm/errors.hpp"
#include "dsrm/network.hpp"
#include "dsrm/solvers.hpp"

namespace dsrm {

namespace {

GeometricGraph build_graph(const ScenarioConfig& cfg) {
  switch (cfg.topology) {
    case Topology::kGeometric:
      return random_geometric_graph(cfg.n_agents, cfg.comm_range, cfg.seed);
    case Topology::kPath:
      return GeometricGraph{path_graph(cfg.n_agents), {}, 1};
    case Topology::kStar:
      return GeometricGraph{star_graph(cfg.n_agents), {}, 1};
    case Topology::kComplete:
      return GeometricGraph{complete_graph(cfg.n_agents), {}, 1};
  }
  throw ValidationError("topology", "unknown topology");
}

bool uses_routing(const ScenarioConfig& cfg) {
  return cfg.scenario == ScenarioKind::kDuna ||
         (cfg.scenario == ScenarioKind::kDlasso && cfg.l_rows == 0);
}

P1Data pooled_data(const ScenarioData& d) {
  P1Data p;
  p.y = d.y;
  switch (d.kind) {
    case ScenarioKind::kDuna:
      p.design = Design::kGeneral;
      p.r = d.r;
      break;
    case ScenarioKind::kDrpca:
      p.design = Design::kIdentity;
      break;
    case ScenarioKind::kDmc:
      p.design = Design::kNone;
      p.mask = d.mask;
      break;
    case ScenarioKind::kDlasso:
      p.design = Design::kGeneral;
      p.r = d.r;
      p.low_rank = false;
      break;
  }
  return p;
}

double distance_scaled(const Matrix& est, const Matrix& ref) {
  return frobenius_norm(est - ref) / (1.0 + frobenius_norm(ref));
}

class MetricsRecorder final : public RoundObserver {
 public:
  explicit MetricsRecorder(const Instance& inst) : inst_(inst) {}
  void on_round(int round, const std::vector<AgentState>& states) override {
    rows.push_back(metrics_row(inst_, round, states));
  }
  std::vector<MetricsRow> rows;

 private:
  const Instance& inst_;
};

}  // namespace

Instance build_instance(const ScenarioConfig& config) {
  config.validate();
  Instance inst;
  inst.config = config;
  inst.graph = build_graph(config);
  if (!is_connected(inst.graph.graph)) throw ConnectivityFailure("agent graph is not connected");
  if (uses_routing(config)) {
    inst.routing = shortest_path_routing(inst.graph.graph, od_flows(config.n_agents));
  }

  SynthParams sp;
  sp.kind = config.scenario;
  sp.n_agents = config.n_agents;
  sp.t_cols = config.t_cols;
  sp.f_rows = config.resolved_f();
  sp.l_rows = config.l_rows;
  sp.rank = config.rank_true;
  sp.sigma = config.sigma;
  sp.pi = config.pi;
  sp.p_obs = config.scenario == ScenarioKind::kDmc ? config.p_obs : 1.0;
  sp.seed = config.seed;
  inst.data = build_scenario_data(sp, &inst.graph.graph, inst.routing ? &*inst.routing : nullptr);
  inst.pooled = pooled_data(inst.data);

  Hyperparams& hp = inst.hp;
  hp.c = config.c;
  hp.mu = config.mu;
  hp.rho = config.rho;
  hp.max_rounds = config.max_rounds;
  hp.tol = config.tol;
  if (inst.pooled.low_rank) {
    hp.lambda_star = config.lambda_star ? *config.lambda_star
                                        : config.lambda_star_frac * spectral_norm(inst.data.y);
  }
  if (inst.pooled.design != Design::kNone) {
    const Matrix ry = adjoint_residual(inst.pooled, inst.data.y);
    hp.lambda_1 = config.lambda_1 ? *config.lambda_1 : config.lambda_1_frac * linf_norm(ry);
  }

  inst.problem.graph = inst.graph.graph;
  inst.problem.t_cols = config.t_cols;
  const ScenarioData& d = inst.data;
  for (int n = 0; n < config.n_agents; ++n) {
    AgentData ad;
    ad.y = agent_block(d.y, d.partition, n);
    if (d.r.size() > 0) ad.r = agent_block(d.r, d.partition, n);
    if (d.kind == ScenarioKind::kDmc) ad.mask = agent_block(d.mask, d.partition, n);
    inst.problem.agents.push_back(std::move(ad));
  }
  return inst;
}

Estimates network_estimates(const Instance& inst, const std::vector<AgentState>& states) {
  Estimates e;
  const ScenarioKind kind = inst.config.scenario;
  if (kind == ScenarioKind::kDlasso) {
    e.l = Matrix(0, 0);
    e.q = Matrix(0, 0);
    e.x = Matrix::Zero(inst.data.y.rows(), inst.data.y.cols());
    e.a = average_a(states);
    return e;
  }
  e.l = stack_l(states);
  e.q = average_q(states);
  e.x = e.l * e.q.transpose();
  switch (kind) {
    case ScenarioKind::kDuna:
      e.a = average_a(states);
      break;
    case ScenarioKind::kDrpca:
      e.a = stack_a(states);
      break;
    default:
      e.a = Matrix::Zero(0, inst.data.y.cols());
      break;
  }
  return e;
}

MetricsRow metrics_row(const Instance& inst, int round, const std::vector<AgentState>& states) {
  const Estimates e = network_estimates(inst, states);
  const GroundTruth& truth = inst.data.truth;
  const ScenarioKind kind = inst.config.scenario;
  MetricsRow row;
  row.round = round;
  if (kind != ScenarioKind::kDlasso) {
    row.consensus_q = consensus_error(states, ConsensusBlock::kQ).max();
    row.rel_err_x = relative_or_absolute_error(e.x, truth.x0);
  }
  if (kind == ScenarioKind::kDuna || kind == ScenarioKind::kDlasso) {
    row.consensus_a = consensus_error(states, ConsensusBlock::kA).max();
  }
  if (kind != ScenarioKind::kDmc) row.rel_err_a = relative_or_absolute_error(e.a, truth.a0);
  row.cost = p3_cost(inst.pooled, e.l, e.q, e.a, inst.hp.lambda_star, inst.hp.lambda_1);
  return row;
}

double ScenarioResult::cost_gap() const {
  const double denom = std::abs(cost_centralized);
  const double diff = std::abs(cost_distributed - cost_centralized);
  return denom == 0.0 ? diff : diff / denom;
}

std::vector<std::pair<std::string, double>> ScenarioResult::summary() const {
  std::vector<std::pair<std::string, double>> s = {
      {"rounds", static_cast<double>(run.rounds)},
      {"converged", run.converged ? 1.0 : 0.0},
      {"consensus_q", metrics.empty() ? 0.0 : metrics.back().consensus_q},
      {"consensus_a", metrics.empty() ? 0.0 : metrics.back().consensus_a},
      {"cost_distributed", cost_distributed},
      {"cost_centralized", cost_centralized},
      {"cost_gap", cost_gap()},
      {"rel_err_x", rel_err_x},
      {"rel_err_a", rel_err_a},
      {"rel_err_x_centralized", rel_err_x_centralized},
      {"rel_err_a_centralized", rel_err_a_centralized},
      {"x_distance_to_centralized", x_distance_to_centralized},
      {"max_agent_a_distance", max_agent_a_distance},
      {"max_agent_q_distance", max_agent_q_distance},
      {"oracle_iterations", static_cast<double>(centralized.iterations)},
      {"oracle_converged", centralized.converged ? 1.0 : 0.0},
      {"condition_met", certificate.condition_met ? 1.0 : 0.0},
      {"condition_met_centralized", centralized_certificate.condition_met ? 1.0 : 0.0},
  };
  if (auc) s.emplace_back("auc", *auc);
  return s;
}

void write_certificate_csv(const std::string& path, const CertificateReport& rep) {
  write_csv(path,
            {"spectral_residual", "lambda_star", "condition_met", "res_eq13", "res_eq14",
             "res_eq15"},
            std::vector<std::vector<std::string>>{
                {format_real(rep.spectral_residual), format_real(rep.lambda_star),
                 rep.condition_met ? "1" : "0", format_real(rep.res_eq13),
                 format_real(rep.res_eq14), format_real(rep.res_eq15)}});
}

ScenarioResult run_scenario(const ScenarioConfig& config, bool write_files) {
  Instance inst = build_instance(config);
  const ScenarioKind kind = config.scenario;
  const double ls = inst.hp.lambda_star;
  const double l1 = inst.hp.lambda_1;

  ScenarioResult res;
  const auto rules = make_rules(kind);
  MetricsRecorder recorder(inst);
  RoundOptions opts;
  opts.threads = config.threads;
  res.run = run(inst.problem, *rules, inst.hp, config.seed, &recorder, opts);
  res.metrics = std::move(recorder.rows);
  res.distributed = network_estimates(inst, res.run.states);
  const Estimates& e = res.distributed;

  res.centralized = solve_p1_centralized(inst.pooled, ls, l1, config.oracle_tol,
                                         config.oracle_max_iter);
  res.centralized_factors = balanced_factors(res.centralized.x, config.rho);

  res.certificate = prop1_certificate(inst.pooled, e.l, e.q, e.a, ls, l1, config.cert_slack);
  const Factorization& cf = res.centralized_factors;
  if (inst.pooled.low_rank) {
    res.centralized_certificate =
        prop1_certificate(inst.pooled, cf.l, cf.q, res.centralized.a, ls, l1, config.cert_slack);
  } else {
    res.centralized_certificate = prop1_certificate(inst.pooled, Matrix(), Matrix(),
                                                    res.centralized.a, ls, l1, config.cert_slack);
  }
  res.cost_distributed = p3_cost(inst.pooled, e.l, e.q, e.a, ls, l1);
  res.cost_centralized = p1_cost(inst.pooled, res.centralized.x, res.centralized.a, ls, l1);

  const GroundTruth& truth = inst.data.truth;
  if (kind != ScenarioKind::kDlasso) {
    res.rel_err_x = relative_or_absolute_error(e.x, truth.x0);
    res.rel_err_x_centralized = relative_or_absolute_error(res.centralized.x, truth.x0);
    res.x_distance_to_centralized = distance_scaled(e.x, res.centralized.x);
    for (const auto& s : res.run.states) {
      res.max_agent_q_distance =
          std::max(res.max_agent_q_distance,
                   distance_scaled(e.l * s.q.transpose(), res.centralized.x));
    }
  }
  if (kind != ScenarioKind::kDmc) {
    res.rel_err_a = relative_or_absolute_error(e.a, truth.a0);
    res.rel_err_a_centralized = relative_or_absolute_error(res.centralized.a, truth.a0);
  }
  if (kind == ScenarioKind::kDuna || kind == ScenarioKind::kDlasso) {
    for (const auto& s : res.run.states) {
      res.max_agent_a_distance =
          std::max(res.max_agent_a_distance, distance_scaled(s.a, res.centralized.a));
    }
  }
  if ((kind == ScenarioKind::kDuna || kind == ScenarioKind::kDrpca) &&
      (truth.a0.array() != 0.0).any()) {
    res.roc = roc_curve(e.a, truth.a0, config.roc_thresholds);
    res.auc = auc(res.roc);
  }

  if (write_files) {
    const std::string& dir = config.out_path;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
    std::vector<std::vector<double>> rows;
    for (const MetricsRow& m : res.metrics) rows.push_back(to_fields(m));
    write_csv(dir + "/metrics.csv", metrics_header(), rows);
    write_matrix_csv(dir + "/x_hat.csv", e.x);
    write_matrix_csv(dir + "/a_hat.csv", e.a);
    write_matrix_csv(dir + "/l_hat.csv", e.l);
    write_matrix_csv(dir + "/q_hat.csv", e.q);
    if (!res.roc.empty()) {
      rows.clear();
      for (const RocPoint& p : res.roc) rows.push_back({p.threshold, p.p_fa, p.p_d});
      write_csv(dir + "/roc.csv", {"threshold", "p_fa", "p_d"}, rows);
    }
    write_certificate_csv(dir + "/certificate.csv", res.certificate);
    write_certificate_csv(dir + "/certificate_centralized.csv", res.centralized_certificate);
    std::vector<std::vector<std::string>> kv;
    for (const auto& [k, v] : res.summary()) kv.push_back({k, format_real(v)});
    write_csv(dir + "/summary.csv", {"key", "value"}, kv);
  }
  return res;
}

void write_graph_csvs(const Instance& inst, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir + "': " + ec.message());
  const Graph& g = inst.graph.graph;
  std::vector<std::vector<std::string>> nodes;
  for (int i = 0; i < g.n_nodes; ++i) {
    const bool placed = static_cast<int>(inst.graph.positions.size()) == g.n_nodes;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    nodes.push_back({std::to_string(i), format_real(placed ? inst.graph.positions[i].x : nan),
                     format_real(placed ? inst.graph.positions[i].y : nan)});
  }
  write_csv(dir + "/nodes.csv", {"node", "x", "y"}, nodes);
  std::vector<std::vector<std::string>> edges;
  for (const auto& [u, v] : g.edges) edges.push_back({std::to_string(u), std::to_string(v)});
  write_csv(dir + "/edges.csv", {"u", "v"}, edges);
}

CertificateReport certify_estimates(const ScenarioConfig& config, const std::string& dir) {
  const Instance inst = build_instance(config);
  const Matrix a = read_matrix_csv(dir + "/a_hat.csv");
  Matrix l = read_matrix_csv(dir + "/l_hat.csv");
  Matrix q = read_matrix_csv(dir + "/q_hat.csv");
  Matrix a_checked = a;
  if (inst.pooled.design == Design::kNone) a_checked = Matrix::Zero(0, inst.data.y.cols());
  return prop1_certificate(inst.pooled, l, q, a_checked, inst.hp.lambda_star, inst.hp.lambda_1,
                           config.cert_slack);
}

}  // namespace dsrm
