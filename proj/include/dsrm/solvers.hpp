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

// Closed-form primal updates of the four specializations.
//
// Shared notation per agent n with neighbors J_n (|J_n| = deg):
//   Q-system:  L'L + (lambda*/N + 2c deg) I,  rhs  E'L - O + c sum_m (Q_n + Q_m)
//   L-system:  Q'Q + lambda* I
//   A-update:  S_{lambda_1/N}(M + cB - P + c sum_m (A_n + A_m)) / (c (1 + 2 deg))
// where E is the data term left after removing the sparse part.

#ifndef DSRM_SOLVERS_HPP_
#define DSRM_SOLVERS_HPP_

#include <memory>

#include "dsrm/admm.hpp"
#include "dsrm/synth.hpp"

namespace dsrm {

// Anomaly unveiling: Q, A, L, B with Y_n = L_n Q' + R_n B + noise.
void duna_updates(AgentState& state, const Inbox& inbox, const AgentData& data,
                  const Hyperparams& hp, int n_agents);

// Robust PCA: Q, L, then the local outlier block A_n = S_{lambda_1}(Y_n - L Q').
void drpca_updates(AgentState& state, const Inbox& inbox, const AgentData& data,
                   const Hyperparams& hp, int n_agents);

// Matrix completion: per-column Q systems and per-row L systems, the
// diagonal blocks of the Kronecker-form normal equations.
void dmc_updates(AgentState& state, const Inbox& inbox, const AgentData& data,
                 const Hyperparams& hp, int n_agents);

// Distributed Lasso: A then B = (R'R + cI)^{-1} (R'Y - M + cA).
void dlasso_updates(AgentState& state, const Inbox& inbox, const AgentData& data,
                    const Hyperparams& hp, int n_agents);

std::unique_ptr<UpdateRules> make_rules(ScenarioKind kind);

}  // namespace dsrm

#endif  // DSRM_SOLVERS_HPP_
