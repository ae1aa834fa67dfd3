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

#include "dsrm/admm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "dsrm/errors.hpp"
#include "dsrm/rng.hpp"

namespace dsrm {

void Hyperparams::validate() const {
  if (!(lambda_star >= 0.0)) throw ValidationError("lambda_star", "must be >= 0");
  if (!(lambda_1 >= 0.0)) throw ValidationError("lambda_1", "must be >= 0");
  if (!(c > 0.0)) throw ValidationError("c", "must be > 0");
  if (!(mu > 0.0)) throw ValidationError("mu", "must be > 0");
  if (rho < 1) throw ValidationError("rho", "must be >= 1");
  if (max_rounds < 0) throw ValidationError("max_rounds", "must be >= 0");
  if (!(tol > 0.0)) throw ValidationError("tol", "must be > 0");
}

void UpdateRules::prepare(AgentData&, const Hyperparams&) const {}

namespace {

Matrix standard_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

}  // namespace

std::vector<AgentState> init_agents(const Problem& problem, const UpdateRules& rules,
                                    const Hyperparams& hp, std::uint64_t seed) {
  hp.validate();
  const int n = problem.n_agents();
  if (problem.graph.n_nodes != n) throw ShapeMismatch("init_agents: graph size != agent count");
  const BlockSet blocks = rules.blocks();
  const auto adj = problem.graph.neighbors();
  const Eigen::Index t = problem.t_cols;
  Eigen::Index f = -1;

  std::vector<AgentState> states(n);
  for (int i = 0; i < n; ++i) {
    const AgentData& d = problem.agents[i];
    if (d.y.cols() != t) throw ShapeMismatch("init_agents: agent " + std::to_string(i) + " y has wrong column count");
    if (d.r.size() > 0 && d.r.rows() != d.y.rows()) throw ShapeMismatch("init_agents: R_n rows != Y_n rows");
    if (d.mask.size() > 0 && (d.mask.rows() != d.y.rows() || d.mask.cols() != t)) {
      throw ShapeMismatch("init_agents: mask shape != Y_n shape");
    }
    AgentState& s = states[i];
    s.id = i;
    s.neighbor_ids = adj[i];
    Rng rng = make_rng(seed, Stream::kInit, static_cast<std::uint32_t>(i));
    if (blocks.l) s.l = standard_gaussian(d.y.rows(), hp.rho, rng);
    if (blocks.q) s.q = standard_gaussian(t, hp.rho, rng);
    const Eigen::Index a_rows = rules.a_rows(d);
    if (blocks.p) {
      if (f >= 0 && a_rows != f) throw ShapeMismatch("init_agents: agents disagree on F");
      f = a_rows;
    }
    if (blocks.a) s.a = Matrix::Zero(a_rows, t);
    if (blocks.b) s.b = Matrix::Zero(a_rows, t);
    if (blocks.m) s.m = Matrix::Zero(a_rows, t);
    if (blocks.o) s.o = Matrix::Zero(t, hp.rho);
    if (blocks.p) s.p = Matrix::Zero(a_rows, t);
  }
  return states;
}

void dual_step(AgentState& s, const Inbox& inbox, double step) {
  if (inbox.size() != s.neighbor_ids.size()) {
    throw MissingMessage("agent " + std::to_string(s.id) + ": expected " +
                         std::to_string(s.neighbor_ids.size()) + " messages, got " +
                         std::to_string(inbox.size()));
  }
  for (std::size_t j = 0; j < inbox.size(); ++j) {
    if (inbox[j] == nullptr || inbox[j]->sender != s.neighbor_ids[j]) {
      throw MissingMessage("agent " + std::to_string(s.id) + ": no message from neighbor " +
                           std::to_string(s.neighbor_ids[j]));
    }
  }
  if (s.m.size() > 0) s.m += step * (s.b - s.a);
  if (s.o.size() > 0) {
    Matrix diff = Matrix::Zero(s.q.rows(), s.q.cols());
    for (const NeighborMessage* msg : inbox) diff += s.q - msg->q;
    s.o += step * diff;
  }
  if (s.p.size() > 0) {
    Matrix diff = Matrix::Zero(s.a.rows(), s.a.cols());
    for (const NeighborMessage* msg : inbox) diff += s.a - msg->a;
    s.p += step * diff;
  }
}

std::vector<NeighborMessage> collect_messages(const std::vector<AgentState>& states,
                                              const UpdateRules& rules) {
  std::vector<NeighborMessage> board(states.size());
  const bool q = rules.consents_q();
  const bool a = rules.consents_a();
  for (std::size_t i = 0; i < states.size(); ++i) {
    board[i].sender = states[i].id;
    if (q) board[i].q = states[i].q;
    if (a) board[i].a = states[i].a;
  }
  return board;
}

void run_round(std::vector<AgentState>& states, const UpdateRules& rules, const Problem& problem,
               const Hyperparams& hp, const RoundOptions& options) {
  const int n = static_cast<int>(states.size());
  if (n != problem.n_agents()) throw ShapeMismatch("run_round: state count != agent count");
  const std::vector<NeighborMessage> board = collect_messages(states, rules);
  const double step = rules.dual_step_size(hp);

  std::vector<int> order = options.visit_order;
  if (order.empty()) {
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
  }
  if (static_cast<int>(order.size()) != n) throw ShapeMismatch("run_round: bad visit order");

  auto advance = [&](int i) {
    AgentState& s = states[i];
    Inbox inbox;
    inbox.reserve(s.neighbor_ids.size());
    for (int m : s.neighbor_ids) inbox.push_back(&board.at(m));
    dual_step(s, inbox, step);
    rules.primal_update(s, inbox, problem.agents[i], hp, n);
  };

  const int threads = std::clamp(options.threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i : order) advance(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int k = w; k < n; k += threads) advance(order[k]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double ConsensusReport::max() const {
  double m = 0.0;
  for (double e : errors) m = std::max(m, e);
  return m;
}

namespace {

const Matrix& block_of(const AgentState& s, ConsensusBlock which) {
  return which == ConsensusBlock::kQ ? s.q : s.a;
}

}  // namespace

ConsensusReport consensus_error(const std::vector<AgentState>& states, ConsensusBlock which) {
  ConsensusReport report;
  if (states.empty()) return report;
  Matrix avg = Matrix::Zero(block_of(states[0], which).rows(), block_of(states[0], which).cols());
  for (const auto& s : states) avg += block_of(s, which);
  avg /= static_cast<double>(states.size());
  const double scale = avg.norm();
  report.degenerate = !(scale > 0.0);
  for (const auto& s : states) {
    const double abs_err = (block_of(s, which) - avg).norm();
    report.errors.push_back(report.degenerate ? abs_err : abs_err / scale);
  }
  return report;
}

namespace {

double block_change(const Matrix& prev, const Matrix& cur) {
  if (cur.size() == 0) return 0.0;
  return (cur - prev).norm() / (1.0 + cur.norm());
}

double state_change(const AgentState& prev, const AgentState& cur) {
  return std::max({block_change(prev.l, cur.l), block_change(prev.q, cur.q),
                   block_change(prev.a, cur.a), block_change(prev.b, cur.b),
                   block_change(prev.m, cur.m), block_change(prev.o, cur.o),
                   block_change(prev.p, cur.p)});
}

bool state_finite(const AgentState& s) {
  return s.l.allFinite() && s.q.allFinite() && s.a.allFinite() && s.b.allFinite() &&
         s.m.allFinite() && s.o.allFinite() && s.p.allFinite();
}

}  // namespace

bool has_converged(const std::vector<AgentState>& prev, const std::vector<AgentState>& cur,
                   double tol) {
  if (prev.size() != cur.size()) throw ShapeMismatch("has_converged: state count differs");
  double worst = 0.0;
  for (std::size_t i = 0; i < cur.size(); ++i) {
    worst = std::max(worst, state_change(prev[i], cur[i]));
  }
  return worst < tol;
}

RunResult run_from(std::vector<AgentState> states, const Problem& problem,
                   const UpdateRules& rules, const Hyperparams& hp, RoundObserver* observer,
                   const RoundOptions& options) {
  RunResult result;
  result.states = std::move(states);
  for (int k = 1; k <= hp.max_rounds; ++k) {
    std::vector<AgentState> prev = result.states;
    run_round(result.states, rules, problem, hp, options);
    for (const auto& s : result.states) {
      if (!state_finite(s)) {
        throw NonFinite("round " + std::to_string(k) + ": agent " + std::to_string(s.id) +
                        " state is not finite");
      }
    }
    result.rounds = k;
    if (observer != nullptr) observer->on_round(k, result.states);
    if (has_converged(prev, result.states, hp.tol)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

RunResult run(Problem& problem, const UpdateRules& rules, const Hyperparams& hp,
              std::uint64_t seed, RoundObserver* observer, const RoundOptions& options) {
  hp.validate();
  if (!is_connected(problem.graph)) throw ConnectivityFailure("run: agent graph is not connected");
  for (auto& d : problem.agents) rules.prepare(d, hp);
  return run_from(init_agents(problem, rules, hp, seed), problem, rules, hp, observer, options);
}

Matrix average_q(const std::vector<AgentState>& states) {
  Matrix avg = Matrix::Zero(states.at(0).q.rows(), states.at(0).q.cols());
  for (const auto& s : states) avg += s.q;
  return avg / static_cast<double>(states.size());
}

Matrix average_a(const std::vector<AgentState>& states) {
  Matrix avg = Matrix::Zero(states.at(0).a.rows(), states.at(0).a.cols());
  for (const auto& s : states) avg += s.a;
  return avg / static_cast<double>(states.size());
}

namespace {

Matrix stack_rows(const std::vector<AgentState>& states, Matrix AgentState::*block) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& s : states) {
    rows += (s.*block).rows();
    if ((s.*block).rows() > 0) cols = (s.*block).cols();
  }
  Matrix out(rows, cols);
  Eigen::Index off = 0;
  for (const auto& s : states) {
    const Matrix& b = s.*block;
    if (b.rows() > 0) out.middleRows(off, b.rows()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace

Matrix stack_l(const std::vector<AgentState>& states) { return stack_rows(states, &AgentState::l); }

Matrix stack_a(const std::vector<AgentState>& states) { return stack_rows(states, &AgentState::a); }

}  // namespace dsrm
