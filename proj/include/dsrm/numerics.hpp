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

// Dense matrix kernels shared by every other module: norms, thin SVD,
// entrywise and singular-value shrinkage, and small SPD solves.

#ifndef DSRM_NUMERICS_HPP_
#define DSRM_NUMERICS_HPP_

#include <Eigen/Dense>

namespace dsrm {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// m = u * diag(sigma) * v', with k = min(rows, cols) columns in u and v.
struct ThinSvd {
  Matrix u;
  Vector sigma;  // nonincreasing, nonnegative
  Matrix v;

  // Number of singular values above rel_cutoff * sigma(0).
  int rank(double rel_cutoff = 1e-12) const;
};

// Scalar prox of tau*|x|.
inline double soft_threshold(double x, double tau) {
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

// Entrywise sign(m_ij) * max(|m_ij| - tau, 0).
Matrix soft_threshold(const Matrix& m, double tau);

double frobenius_norm(const Matrix& m);
double l1_norm(const Matrix& m);
double linf_norm(const Matrix& m);

// Largest singular value by power iteration on m'm, starting from the
// normalized all-ones vector. Throws NonConvergence after max_iter sweeps.
double spectral_norm(const Matrix& m, double tol = 1e-12, int max_iter = 20000);

ThinSvd thin_svd(const Matrix& m);

double nuclear_norm(const Matrix& m);

// Solves a * x = b for symmetric positive definite a (Cholesky).
// Throws NotPositiveDefinite when a pivot is not positive or a is not symmetric.
Matrix solve_sym_pd(const Matrix& a, const Matrix& b);

// (r'r + c I)^{-1} through the SVD of r:
//   (1/c) [I - V diag(s_i^2 / (c + s_i^2)) V'].
// Cheap when r has far fewer rows than columns.
Matrix inv_regularized_gram(const Matrix& r, double c);

// Prox of tau * nuclear norm: soft-threshold the singular values.
Matrix svt_shrink(const Matrix& m, double tau);

bool all_finite(const Matrix& m);

}  // namespace dsrm

#endif  // DSRM_NUMERICS_HPP_
