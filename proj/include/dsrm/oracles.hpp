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

// Centralized references for the distributed solvers:
//   (P1)  min_{X,A} 1/2 ||P(Y - X - R A)||_F^2 + lambda* ||X||_* + lambda_1 ||A||_1
//   (P3)  min_{L,Q,A} 1/2 ||P(Y - L Q' - R A)||_F^2
//                     + lambda*/2 (||L||_F^2 + ||Q||_F^2) + lambda_1 ||A||_1
// and the stationary-point certificate that promotes a (P3) point to a
// (P1) optimum.

#ifndef DSRM_ORACLES_HPP_
#define DSRM_ORACLES_HPP_

#include <vector>

#include "dsrm/numerics.hpp"

namespace dsrm {

// How the sparse block enters the model.
enum class Design {
  kGeneral,   // R given (duna, dlasso)
  kIdentity,  // R = I (drpca)
  kNone,      // no sparse block (dmc)
};

struct P1Data {
  Matrix y;           // rows x T, already masked where unobserved
  Matrix mask;        // empty = fully observed
  Design design = Design::kGeneral;
  Matrix r;           // rows x F, kGeneral only
  bool low_rank = true;  // false: Lasso, X is held at zero and lambda* ignored

  Eigen::Index a_rows() const;
  // Throws ShapeMismatch.
  void validate() const;
};

// P(Y - X - R A)
Matrix masked_residual(const P1Data& data, const Matrix& x, const Matrix& a);
// R' P(res), or P(res) for the identity design.
Matrix adjoint_residual(const P1Data& data, const Matrix& res);

double p1_cost(const P1Data& data, const Matrix& x, const Matrix& a, double lambda_star,
               double lambda_1);
double p3_cost(const P1Data& data, const Matrix& l, const Matrix& q, const Matrix& a,
               double lambda_star, double lambda_1);

struct ProxPoint {
  Matrix x;
  Matrix a;
};

// One forward-backward step from (x, a) with step size `step`:
//   x+ = svt(x + step P(res), step lambda*),  a+ = S(a + step R'P(res), step lambda_1).
ProxPoint p1_prox_step(const P1Data& data, const Matrix& x, const Matrix& a, double lambda_star,
                       double lambda_1, double step);

// Lipschitz bound of the smooth term's gradient in (X, A).
double p1_lipschitz(const P1Data& data);

struct P1Solution {
  Matrix x;
  Matrix a;
  std::vector<double> costs;  // one per accepted iterate, nonincreasing
  int iterations = 0;
  bool converged = false;
};

// Monotone accelerated proximal gradient with restart. Stops once both the
// relative cost change and the scaled prox-gradient step fall below tol;
// otherwise returns the best iterate with converged = false.
P1Solution solve_p1_centralized(const P1Data& data, double lambda_star, double lambda_1,
                                double tol, int max_iter);

struct CertificateReport {
  double spectral_residual = 0.0;  // ||P(Y - L Q' - R A)||
  double dual_residual = 0.0;      // half of it, the Schur-complement quantity
  double lambda_star = 0.0;        // +inf when there is no low-rank block
  bool condition_met = false;      // spectral_residual <= lambda_star (1 + slack)
  double res_eq13 = 0.0;           // l1 subgradient violation
  double res_eq14 = 0.0;           // ||P(res) Q - lambda* L||_F
  double res_eq15 = 0.0;           // ||L' P(res) - lambda* Q'||_F
};

// `rel_slack` absorbs rounding: at any stationary point with L != 0 the
// residual has lambda* as an exact singular value, so the test is an equality
// on the boundary. Entries with |a| <= support_tol * max(1, ||A||_inf) count
// as zero for the l1 subgradient check.
CertificateReport prop1_certificate(const P1Data& data, const Matrix& l, const Matrix& q,
                                    const Matrix& a, double lambda_star, double lambda_1,
                                    double rel_slack = 1e-4, double support_tol = 1e-6);

// L = U S^{1/2}, Q = V S^{1/2} truncated to the numerical rank, padded with
// zero columns up to `min_cols`.
struct Factorization {
  Matrix l;
  Matrix q;
};
Factorization balanced_factors(const Matrix& x, int min_cols = 0);

// |(||L||_F^2 + ||Q||_F^2)/2 - ||X||_*| for the balanced SVD factors.
double nuclear_variational_check(const Matrix& x);

}  // namespace dsrm

#endif  // DSRM_ORACLES_HPP_
