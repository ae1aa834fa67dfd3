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

#include "dsrm/solvers.hpp"

#include "dsrm/errors.hpp"

namespace dsrm {

namespace {

// c * sum_m (X_n + X_m)
Matrix pair_sum(const Matrix& own, const Inbox& inbox, Matrix NeighborMessage::*field, double c) {
  Matrix acc = static_cast<double>(inbox.size()) * own;
  for (const NeighborMessage* msg : inbox) acc += msg->*field;
  return c * acc;
}

// Q = {E'L - O + c sum_m (Q_n + Q_m)} [L'L + shift I]^{-1}
Matrix consensus_q_update(const Matrix& e, const AgentState& s, const Inbox& inbox,
                          const Hyperparams& hp, int n_agents) {
  const double deg = static_cast<double>(inbox.size());
  const double shift = hp.lambda_star / n_agents + 2.0 * hp.c * deg;
  const Eigen::Index rho = s.q.cols();
  const Matrix gram = s.l.transpose() * s.l + shift * Matrix::Identity(rho, rho);
  const Matrix rhs = e.transpose() * s.l - s.o + pair_sum(s.q, inbox, &NeighborMessage::q, hp.c);
  return solve_sym_pd(gram, rhs.transpose()).transpose();
}

// L = E Q [Q'Q + lambda* I]^{-1}
Matrix ridge_l_update(const Matrix& e, const Matrix& q, double lambda_star) {
  const Eigen::Index rho = q.cols();
  const Matrix gram = q.transpose() * q + lambda_star * Matrix::Identity(rho, rho);
  return solve_sym_pd(gram, (e * q).transpose()).transpose();
}

Matrix consensus_a_update(const AgentState& s, const Inbox& inbox, const Hyperparams& hp,
                          int n_agents) {
  const double deg = static_cast<double>(inbox.size());
  const Matrix v = s.m + hp.c * s.b - s.p + pair_sum(s.a, inbox, &NeighborMessage::a, hp.c);
  return soft_threshold(v, hp.lambda_1 / n_agents) / (hp.c * (1.0 + 2.0 * deg));
}

void require(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

}  // namespace

void duna_updates(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                  int n_agents) {
  require(d.gram_inv.rows() == s.b.rows(), "duna: (R'R + cI)^{-1} not prepared");
  const Matrix e = d.y - d.r * s.b;  // uses B_n[k]
  Matrix q_next = consensus_q_update(e, s, inbox, hp, n_agents);
  Matrix a_next = consensus_a_update(s, inbox, hp, n_agents);
  Matrix l_next = ridge_l_update(e, q_next, hp.lambda_star);
  s.b = d.gram_inv *
        (d.r.transpose() * (d.y - l_next * q_next.transpose()) - s.m + hp.c * a_next);
  s.q = std::move(q_next);
  s.a = std::move(a_next);
  s.l = std::move(l_next);
}

void drpca_updates(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                   int n_agents) {
  const Matrix e = d.y - s.a;  // uses A_n[k]
  s.q = consensus_q_update(e, s, inbox, hp, n_agents);
  s.l = ridge_l_update(e, s.q, hp.lambda_star);
  s.a = soft_threshold(d.y - s.l * s.q.transpose(), hp.lambda_1);
}

void dmc_updates(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                 int n_agents) {
  require(d.mask.rows() == d.y.rows() && d.mask.cols() == d.y.cols(), "dmc: mask shape");
  const Eigen::Index rho = s.q.cols();
  const Eigen::Index t_cols = d.y.cols();
  const double deg = static_cast<double>(inbox.size());
  const Matrix eye = Matrix::Identity(rho, rho);

  // Column t: [L' diag(w_t) L + (lambda*/N + 2c deg) I] q_t
  //             = L'(w_t .* y_t) - o_t + c sum_m (q_{n,t} + q_{m,t})
  const Matrix coupling = pair_sum(s.q, inbox, &NeighborMessage::q, hp.c) - s.o;
  const double q_shift = hp.lambda_star / n_agents + 2.0 * hp.c * deg;
  Matrix q_next(t_cols, rho);
  for (Eigen::Index t = 0; t < t_cols; ++t) {
    Matrix gram = q_shift * eye;
    Matrix rhs = coupling.row(t).transpose();
    for (Eigen::Index i = 0; i < d.y.rows(); ++i) {
      if (d.mask(i, t) == 0.0) continue;
      gram.noalias() += s.l.row(i).transpose() * s.l.row(i);
      rhs.noalias() += s.l.row(i).transpose() * d.y(i, t);
    }
    q_next.row(t) = solve_sym_pd(gram, rhs).transpose();
  }

  // Row i: [Q' diag(w_i) Q + lambda* I] l_i = Q'(w_i .* y_i)
  Matrix l_next(d.y.rows(), rho);
  for (Eigen::Index i = 0; i < d.y.rows(); ++i) {
    Matrix gram = hp.lambda_star * eye;
    Matrix rhs = Matrix::Zero(rho, 1);
    for (Eigen::Index t = 0; t < t_cols; ++t) {
      if (d.mask(i, t) == 0.0) continue;
      gram.noalias() += q_next.row(t).transpose() * q_next.row(t);
      rhs.noalias() += q_next.row(t).transpose() * d.y(i, t);
    }
    l_next.row(i) = solve_sym_pd(gram, rhs).transpose();
  }
  s.q = std::move(q_next);
  s.l = std::move(l_next);
}

void dlasso_updates(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                    int n_agents) {
  require(d.gram_inv.rows() == s.b.rows(), "dlasso: (R'R + cI)^{-1} not prepared");
  s.a = consensus_a_update(s, inbox, hp, n_agents);
  s.b = d.gram_inv * (d.r.transpose() * d.y - s.m + hp.c * s.a);
}

namespace {

class DunaRules final : public UpdateRules {
 public:
  const char* name() const override { return "duna"; }
  BlockSet blocks() const override { return {true, true, true, true, true, true, true}; }
  Eigen::Index a_rows(const AgentData& d) const override { return d.r.cols(); }
  void prepare(AgentData& d, const Hyperparams& hp) const override {
    d.gram_inv = inv_regularized_gram(d.r, hp.c);
  }
  void primal_update(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                     int n) const override {
    duna_updates(s, inbox, d, hp, n);
  }
};

class DrpcaRules final : public UpdateRules {
 public:
  const char* name() const override { return "drpca"; }
  BlockSet blocks() const override {
    BlockSet b;
    b.l = b.q = b.a = b.o = true;
    return b;
  }
  Eigen::Index a_rows(const AgentData& d) const override { return d.y.rows(); }
  void primal_update(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                     int n) const override {
    drpca_updates(s, inbox, d, hp, n);
  }
};

class DmcRules final : public UpdateRules {
 public:
  const char* name() const override { return "dmc"; }
  BlockSet blocks() const override {
    BlockSet b;
    b.l = b.q = b.o = true;
    return b;
  }
  Eigen::Index a_rows(const AgentData&) const override { return 0; }
  void primal_update(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                     int n) const override {
    dmc_updates(s, inbox, d, hp, n);
  }
};

class DlassoRules final : public UpdateRules {
 public:
  const char* name() const override { return "dlasso"; }
  BlockSet blocks() const override {
    BlockSet b;
    b.a = b.b = b.m = b.p = true;
    return b;
  }
  Eigen::Index a_rows(const AgentData& d) const override { return d.r.cols(); }
  // Duals move with the penalty coefficient itself.
  double dual_step_size(const Hyperparams& hp) const override { return hp.c; }
  void prepare(AgentData& d, const Hyperparams& hp) const override {
    d.gram_inv = inv_regularized_gram(d.r, hp.c);
  }
  void primal_update(AgentState& s, const Inbox& inbox, const AgentData& d, const Hyperparams& hp,
                     int n) const override {
    dlasso_updates(s, inbox, d, hp, n);
  }
};

}  // namespace

std::unique_ptr<UpdateRules> make_rules(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kDuna:
      return std::make_unique<DunaRules>();
    case ScenarioKind::kDrpca:
      return std::make_unique<DrpcaRules>();
    case ScenarioKind::kDmc:
      return std::make_unique<DmcRules>();
    case ScenarioKind::kDlasso:
      return std::make_unique<DlassoRules>();
  }
  throw ValidationError("scenario", "unknown kind");
}

}  // namespace dsrm
