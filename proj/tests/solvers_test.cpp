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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dsrm/errors.hpp"
#include "dsrm/scenario.hpp"
#include "dsrm/solvers.hpp"
#include "support/subproblems.hpp"

using namespace dsrm;
using dsrm::testing::gaussian_matrix;
using dsrm::testing::max_abs_diff;
using dsrm::testing::minimize_coordinatewise;
using dsrm::testing::minimize_quadratic;
using dsrm::testing::numeric_gradient;

using namespace dsrm::testing;


TEST_CASE("duna blocks minimize their subproblems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    for (const BlockCheck& c : check_blocks(ScenarioKind::kDuna, seed)) {
      CAPTURE(c.block);
      CHECK(c.deviation <= 1e-6);
      CHECK(c.stationarity <= 1e-8);
    }
  }
}

TEST_CASE("duna examples") {
  SUBCASE("all zero without neighbors") {
    AgentState s;
    s.l = Matrix::Zero(2, 2);
    s.q = Matrix::Zero(3, 2);
    s.o = Matrix::Zero(3, 2);
    s.a = s.b = s.m = s.p = Matrix::Zero(4, 3);
    AgentData d;
    d.y = Matrix::Zero(2, 3);
    d.r = Matrix::Zero(2, 4);
    Hyperparams hp;
    hp.rho = 2;
    hp.lambda_star = 0.1;
    d.gram_inv = inv_regularized_gram(d.r, hp.c);
    duna_updates(s, {}, d, hp, 1);
    CHECK(s.q.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.a.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.l.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.b.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("scalar A update with one neighbor") {
    AgentState s;
    s.l = Matrix::Ones(1, 1);
    s.q = Matrix::Ones(1, 1);
    s.o = Matrix::Zero(1, 1);
    s.a = Matrix::Constant(1, 1, 0.5);
    s.b = Matrix::Constant(1, 1, 2.0);
    s.m = Matrix::Constant(1, 1, 0.3);
    s.p = Matrix::Constant(1, 1, 0.1);
    NeighborMessage msg;
    msg.sender = 1;
    msg.q = Matrix::Ones(1, 1);
    msg.a = Matrix::Constant(1, 1, 1.5);
    s.neighbor_ids = {1};
    AgentData d;
    d.y = Matrix::Ones(1, 1);
    d.r = Matrix::Ones(1, 1);
    Hyperparams hp;
    hp.rho = 1;
    hp.c = 0.5;
    hp.lambda_1 = 0.4;
    hp.lambda_star = 0.1;
    d.gram_inv = inv_regularized_gram(d.r, hp.c);
    duna_updates(s, {&msg}, d, hp, 2);
    const double sum = 0.3 + 0.5 * 2.0 - 0.1 + 0.5 * (0.5 + 1.5);
    CHECK(s.a(0, 0) == doctest::Approx((sum - 0.2) / (3 * 0.5)).epsilon(1e-14));
  }
  SUBCASE("missing inverse is reported") {
    Case k = random_case(ScenarioKind::kDuna, 1);
    k.d.gram_inv.resize(0, 0);
    AgentState out = k.s;
    CHECK_THROWS_AS(duna_updates(out, k.inbox(), k.d, k.hp, kAgents), ShapeMismatch);
  }
}

TEST_CASE("drpca blocks minimize their subproblems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    for (const BlockCheck& c : check_blocks(ScenarioKind::kDrpca, seed)) {
      CAPTURE(c.block);
      CHECK(c.deviation <= 1e-6);
      CHECK(c.stationarity <= 1e-8);
    }
    // Scalar prox per entry.
    const Case k = random_case(ScenarioKind::kDrpca, seed);
    AgentState out = k.s;
    drpca_updates(out, k.inbox(), k.d, k.hp, kAgents);
    const Matrix resid = k.d.y - out.l * out.q.transpose();
    for (Eigen::Index i = 0; i < resid.size(); ++i) {
      const double v = resid.data()[i];
      auto phi = [&](double a) { return 0.5 * (v - a) * (v - a) + k.hp.lambda_1 * std::abs(a); };
      CHECK(std::abs(golden_section(phi, -20.0, 20.0) - out.a.data()[i]) <= 1e-6);
    }
  }
}

TEST_CASE("drpca examples") {
  Rng rng = make_rng(3, Stream::kScratch);
  AgentState s;
  s.l = gaussian_matrix(4, 2, rng);
  s.q = gaussian_matrix(5, 2, rng);
  s.o = Matrix::Zero(5, 2);
  s.a = Matrix::Zero(4, 5);
  AgentData d;
  d.y = s.l * s.q.transpose();
  Hyperparams hp;
  hp.rho = 2;
  hp.lambda_star = 0.0;
  hp.lambda_1 = 1e-6;
  AgentState exact = s;
  drpca_updates(exact, {}, d, hp, 1);
  CHECK(exact.a.cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_abs_diff(exact.l * exact.q.transpose(), d.y) <= 1e-10);

  d.y += gaussian_matrix(4, 5, rng);
  hp.lambda_star = 0.5;
  AgentState probe = s;
  drpca_updates(probe, {}, d, hp, 1);
  const Matrix resid = d.y - probe.l * probe.q.transpose();
  hp.lambda_1 = resid.cwiseAbs().maxCoeff();
  AgentState shrunk = s;
  drpca_updates(shrunk, {}, d, hp, 1);
  CHECK(shrunk.a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dmc blocks minimize their subproblems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    for (const BlockCheck& c : check_blocks(ScenarioKind::kDmc, seed)) {
      CAPTURE(c.block);
      CHECK(c.deviation <= 1e-6);
      CHECK(c.stationarity <= 1e-8);
    }
  }
}

TEST_CASE("dmc per-slice solves equal the Kronecker normal equations") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    const KroneckerCheck k = dmc_kronecker_check(seed);
    CHECK(k.off_block == 0.0);
    CHECK(k.q_deviation <= 1e-10);
    CHECK(k.l_deviation <= 1e-10);
  }
}

TEST_CASE("dmc examples") {
  Case k = random_case(ScenarioKind::kDmc, 4);
  SUBCASE("full mask matches the dense formulas with no sparse block") {
    k.d.mask = Matrix::Ones(kRows, kT);
    AgentState mc = k.s;
    dmc_updates(mc, k.inbox(), k.d, k.hp, kAgents);
    AgentState dense = k.s;
    dense.a = Matrix::Zero(kRows, kT);
    AgentData dd;
    dd.y = k.d.y;
    drpca_updates(dense, k.inbox(), dd, k.hp, kAgents);
    CHECK(max_abs_diff(mc.q, dense.q) <= 1e-12);
    CHECK(max_abs_diff(mc.l, dense.l) <= 1e-12);
  }
  SUBCASE("unobserved row shrinks to zero") {
    k.d.mask.row(1).setZero();
    k.d.y.row(1).setZero();
    AgentState out = k.s;
    dmc_updates(out, k.inbox(), k.d, k.hp, kAgents);
    CHECK(out.l.row(1).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("mask shape mismatch") {
    k.d.mask = Matrix::Ones(kRows + 1, kT);
    AgentState out = k.s;
    CHECK_THROWS_AS(dmc_updates(out, k.inbox(), k.d, k.hp, kAgents), ShapeMismatch);
  }
}

TEST_CASE("dlasso blocks minimize their subproblems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    for (const BlockCheck& c : check_blocks(ScenarioKind::kDlasso, seed)) {
      CAPTURE(c.block);
      CHECK(c.deviation <= 1e-6);
      CHECK(c.stationarity <= 1e-8);
    }
  }
}

TEST_CASE("dlasso dual step is c and consents on A only") {
  auto rules = make_rules(ScenarioKind::kDlasso);
  Hyperparams hp;
  hp.c = 0.7;
  hp.mu = 0.2;
  CHECK(rules->dual_step_size(hp) == 0.7);
  CHECK(rules->consents_a());
  CHECK_FALSE(rules->consents_q());
  CHECK(make_rules(ScenarioKind::kDuna)->dual_step_size(hp) == 0.2);
  CHECK(make_rules(ScenarioKind::kDuna)->consents_q());
  CHECK(make_rules(ScenarioKind::kDuna)->consents_a());
  CHECK(make_rules(ScenarioKind::kDrpca)->consents_q());
  CHECK_FALSE(make_rules(ScenarioKind::kDrpca)->consents_a());
  CHECK_FALSE(make_rules(ScenarioKind::kDmc)->consents_a());
}

TEST_CASE("dlasso with a large lambda_1 settles at zero") {
  ScenarioConfig cfg;
  cfg.scenario = ScenarioKind::kDlasso;
  cfg.n_agents = 5;
  cfg.t_cols = 4;
  cfg.f_flows = 30;
  cfg.l_rows = 40;
  cfg.comm_range = 0.7;
  cfg.sigma = 0.1;
  cfg.pi = 0.1;
  cfg.max_rounds = 3000;
  Instance inst = build_instance(cfg);
  const double bound = linf_norm(adjoint_residual(inst.pooled, inst.pooled.y));
  inst.hp.lambda_1 = cfg.n_agents * bound;
  auto rules = make_rules(ScenarioKind::kDlasso);
  const RunResult r = run(inst.problem, *rules, inst.hp, 1);
  for (const auto& s : r.states) CHECK(frobenius_norm(s.a) <= 1e-6 * frobenius_norm(inst.pooled.y));
}

TEST_CASE("iterates stay bounded on the default scenarios") {
  for (ScenarioKind kind : {ScenarioKind::kDuna, ScenarioKind::kDrpca, ScenarioKind::kDmc,
                            ScenarioKind::kDlasso}) {
    CAPTURE(to_string(kind));
    ScenarioConfig cfg;
    cfg.scenario = kind;
    cfg.n_agents = 6;
    cfg.t_cols = 30;
    cfg.comm_range = 0.6;
    if (kind == ScenarioKind::kDmc) cfg.p_obs = 0.6;
    if (kind == ScenarioKind::kDlasso) {
      cfg.t_cols = 4;
      cfg.f_flows = 30;
      cfg.l_rows = 40;
    }
    cfg.max_rounds = 500;
    cfg.tol = 1e-300;
    Instance inst = build_instance(cfg);
    auto rules = make_rules(kind);
    double worst = 0.0;
    struct Tracker : RoundObserver {
      double* worst;
      void on_round(int, const std::vector<AgentState>& states) override {
        for (const auto& s : states) {
          for (const Matrix* m : {&s.l, &s.q, &s.a, &s.b}) {
            if (m->size() > 0) *worst = std::max(*worst, m->cwiseAbs().maxCoeff());
          }
        }
      }
    } tracker;
    tracker.worst = &worst;
    const RunResult r = run(inst.problem, *rules, inst.hp, cfg.seed, &tracker);
    CHECK(r.rounds == 500);
    CHECK(worst <= 100.0 * (1.0 + frobenius_norm(inst.pooled.y)));
  }
}
