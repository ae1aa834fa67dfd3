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

#include "dsrm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dsrm/errors.hpp"

namespace dsrm {

Eigen::Index P1Data::a_rows() const {
  switch (design) {
    case Design::kGeneral:
      return r.cols();
    case Design::kIdentity:
      return y.rows();
    case Design::kNone:
      return 0;
  }
  return 0;
}

void P1Data::validate() const {
  if (mask.size() != 0 && (mask.rows() != y.rows() || mask.cols() != y.cols())) {
    throw ShapeMismatch("mask shape differs from Y");
  }
  if (design == Design::kGeneral && r.rows() != y.rows()) {
    throw ShapeMismatch("R rows differ from Y rows");
  }
  if (!low_rank && design == Design::kNone) {
    throw ShapeMismatch("problem has neither a low-rank nor a sparse block");
  }
}

namespace {

Matrix apply_mask(const P1Data& data, const Matrix& m) {
  if (data.mask.size() == 0) return m;
  return m.cwiseProduct(data.mask);
}

Matrix apply_design(const P1Data& data, const Matrix& a) {
  switch (data.design) {
    case Design::kGeneral:
      return data.r * a;
    case Design::kIdentity:
      return a;
    case Design::kNone:
      break;
  }
  return Matrix::Zero(data.y.rows(), data.y.cols());
}

void check_shapes(const P1Data& data, const Matrix& x, const Matrix& a) {
  if (data.low_rank && (x.rows() != data.y.rows() || x.cols() != data.y.cols())) {
    throw ShapeMismatch("X shape differs from Y");
  }
  if (data.design != Design::kNone && (a.rows() != data.a_rows() || a.cols() != data.y.cols())) {
    throw ShapeMismatch("A shape does not match the design");
  }
}

double joint_norm(const Matrix& x, const Matrix& a) {
  return std::sqrt(x.squaredNorm() + a.squaredNorm());
}

// Sparse block held by problems without one: rows x T with zero rows.
Matrix empty_a(const P1Data& data) { return Matrix::Zero(data.a_rows(), data.y.cols()); }

}  // namespace

Matrix masked_residual(const P1Data& data, const Matrix& x, const Matrix& a) {
  check_shapes(data, x, a);
  Matrix res = data.y;
  if (data.low_rank) res -= x;
  if (data.design != Design::kNone) res -= apply_design(data, a);
  return apply_mask(data, res);
}

Matrix adjoint_residual(const P1Data& data, const Matrix& res) {
  switch (data.design) {
    case Design::kGeneral:
      return data.r.transpose() * res;
    case Design::kIdentity:
      return res;
    case Design::kNone:
      break;
  }
  return empty_a(data);
}

double p1_cost(const P1Data& data, const Matrix& x, const Matrix& a, double lambda_star,
               double lambda_1) {
  const Matrix res = masked_residual(data, x, a);
  double cost = 0.5 * res.squaredNorm();
  if (data.low_rank) cost += lambda_star * nuclear_norm(x);
  if (data.design != Design::kNone) cost += lambda_1 * l1_norm(a);
  return cost;
}

double p3_cost(const P1Data& data, const Matrix& l, const Matrix& q, const Matrix& a,
               double lambda_star, double lambda_1) {
  Matrix x = Matrix::Zero(data.y.rows(), data.y.cols());
  double reg = 0.0;
  if (data.low_rank) {
    if (l.rows() != data.y.rows() || q.rows() != data.y.cols() || l.cols() != q.cols()) {
      throw ShapeMismatch("L, Q do not factor a matrix shaped like Y");
    }
    x = l * q.transpose();
    reg = 0.5 * lambda_star * (l.squaredNorm() + q.squaredNorm());
  }
  const Matrix res = masked_residual(data, x, a);
  double cost = 0.5 * res.squaredNorm() + reg;
  if (data.design != Design::kNone) cost += lambda_1 * l1_norm(a);
  return cost;
}

ProxPoint p1_prox_step(const P1Data& data, const Matrix& x, const Matrix& a, double lambda_star,
                       double lambda_1, double step) {
  const Matrix res = masked_residual(data, x, a);
  ProxPoint out;
  if (data.low_rank) {
    out.x = svt_shrink(x + step * res, step * lambda_star);
  } else {
    out.x = x;
  }
  if (data.design != Design::kNone) {
    out.a = soft_threshold(a + step * adjoint_residual(data, res), step * lambda_1);
  } else {
    out.a = a;
  }
  return out;
}

double p1_lipschitz(const P1Data& data) {
  double r_sq = 0.0;
  switch (data.design) {
    case Design::kGeneral: {
      const double s = data.r.size() == 0 ? 0.0 : spectral_norm(data.r);
      r_sq = s * s;
      break;
    }
    case Design::kIdentity:
      r_sq = 1.0;
      break;
    case Design::kNone:
      return 1.0;
  }
  if (!data.low_rank) return std::max(r_sq, std::numeric_limits<double>::min());
  return std::max(1.0, r_sq) + 1.0;
}

P1Solution solve_p1_centralized(const P1Data& data, double lambda_star, double lambda_1,
                                double tol, int max_iter) {
  data.validate();
  if (!(tol > 0.0) || max_iter < 1) throw ValidationError("tol", "tol > 0 and max_iter >= 1");
  const double step = 1.0 / p1_lipschitz(data);

  Matrix x = Matrix::Zero(data.y.rows(), data.y.cols());
  Matrix a = empty_a(data);
  Matrix x_prev = x, a_prev = a;
  Matrix yx = x, ya = a;
  double t = 1.0;
  double cost = p1_cost(data, x, a, lambda_star, lambda_1);

  P1Solution sol;
  sol.costs.push_back(cost);
  for (int it = 1; it <= max_iter; ++it) {
    ProxPoint z = p1_prox_step(data, yx, ya, lambda_star, lambda_1, step);
    const double z_cost = p1_cost(data, z.x, z.a, lambda_star, lambda_1);
    const double move = joint_norm(z.x - yx, z.a - ya) / (1.0 + joint_norm(z.x, z.a));

    x_prev = x;
    a_prev = a;
    const double old_cost = cost;
    // Within a few ulps of the optimum the cost is flat and cannot rank
    // candidates; allow rises at that level so the iterate keeps moving.
    const bool accepted = z_cost <= cost + 1e-14 * std::max(1.0, std::abs(cost));
    if (accepted) {
      x = z.x;
      a = z.a;
      cost = z_cost;
    }
    sol.costs.push_back(cost);
    sol.iterations = it;

    const double change = std::abs(old_cost - cost) / std::max(std::abs(cost), 1e-300);
    // A rejected step still counts: near the optimum the cost can only
    // rise by rounding.
    if (change < tol && move < tol) {
      sol.converged = true;
      break;
    }
    if (!accepted) {
      // Restart the momentum from the best point.
      t = 1.0;
      yx = x;
      ya = a;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    yx = x + ((t - 1.0) / t_next) * (x - x_prev);
    ya = a + ((t - 1.0) / t_next) * (a - a_prev);
    t = t_next;
  }
  sol.x = std::move(x);
  sol.a = std::move(a);
  return sol;
}

CertificateReport prop1_certificate(const P1Data& data, const Matrix& l, const Matrix& q,
                                    const Matrix& a, double lambda_star, double lambda_1,
                                    double rel_slack, double support_tol) {
  data.validate();
  Matrix x = Matrix::Zero(data.y.rows(), data.y.cols());
  if (data.low_rank) {
    if (l.rows() != data.y.rows() || q.rows() != data.y.cols() || l.cols() != q.cols()) {
      throw ShapeMismatch("L, Q do not factor a matrix shaped like Y");
    }
    x = l * q.transpose();
  }
  const Matrix res = masked_residual(data, x, a);

  CertificateReport rep;
  rep.spectral_residual = res.size() == 0 ? 0.0 : thin_svd(res).sigma(0);
  rep.dual_residual = 0.5 * rep.spectral_residual;
  if (data.low_rank) {
    rep.lambda_star = lambda_star;
    rep.res_eq14 = frobenius_norm(res * q - lambda_star * l);
    rep.res_eq15 = frobenius_norm(l.transpose() * res - lambda_star * q.transpose());
  } else {
    rep.lambda_star = std::numeric_limits<double>::infinity();
  }
  rep.condition_met = rep.spectral_residual <= rep.lambda_star * (1.0 + rel_slack);

  if (data.design != Design::kNone) {
    const Matrix g = adjoint_residual(data, res);
    const double zero_below = support_tol * std::max(1.0, linf_norm(a));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        const double aij = a(i, j);
        double v;
        if (std::abs(aij) > zero_below) {
          v = std::abs(g(i, j) - lambda_1 * (aij > 0.0 ? 1.0 : -1.0));
        } else {
          v = std::max(std::abs(g(i, j)) - lambda_1, 0.0);
        }
        acc += v * v;
      }
    }
    rep.res_eq13 = std::sqrt(acc);
  }
  return rep;
}

Factorization balanced_factors(const Matrix& x, int min_cols) {
  Factorization f;
  if (x.size() == 0) {
    f.l = Matrix::Zero(x.rows(), min_cols);
    f.q = Matrix::Zero(x.cols(), min_cols);
    return f;
  }
  const ThinSvd svd = thin_svd(x);
  const int k = svd.sigma(0) > 0.0 ? svd.rank() : 0;
  const int cols = std::max(k, min_cols);
  f.l = Matrix::Zero(x.rows(), cols);
  f.q = Matrix::Zero(x.cols(), cols);
  for (int j = 0; j < k; ++j) {
    const double s = std::sqrt(svd.sigma(j));
    f.l.col(j) = s * svd.u.col(j);
    f.q.col(j) = s * svd.v.col(j);
  }
  return f;
}

double nuclear_variational_check(const Matrix& x) {
  const Factorization f = balanced_factors(x);
  const double surrogate = 0.5 * (f.l.squaredNorm() + f.q.squaredNorm());
  return std::abs(surrogate - nuclear_norm(x));
}

}  // namespace dsrm
