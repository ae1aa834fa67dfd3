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

#include "dsrm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dsrm/errors.hpp"

namespace dsrm {

int ThinSvd::rank(double rel_cutoff) const {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = rel_cutoff * sigma(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut) ++r;
  }
  return r;
}

Matrix soft_threshold(const Matrix& m, double tau) {
  return m.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
}

double frobenius_norm(const Matrix& m) { return m.norm(); }

double l1_norm(const Matrix& m) { return m.cwiseAbs().sum(); }

double linf_norm(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

namespace {

// Runs power iteration from v (unit norm). Returns a negative value if the
// start vector lies in the null space of m.
double power_iterate(const Matrix& m, Vector v, double tol, int max_iter) {
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector u = m * v;
    const double s = u.norm();
    if (s == 0.0) return -1.0;
    const Vector w = m.transpose() * u;
    const double wn = w.norm();
    if (wn == 0.0) return -1.0;
    v = w / wn;
    // ||m' m v|| / ||m v|| is a sharper estimate than ||m v|| at the same cost.
    const double est = wn / s;
    if (prev >= 0.0 && std::abs(est - prev) <= tol * est) return est;
    prev = est;
  }
  throw NonConvergence("spectral_norm: power iteration did not converge");
}

}  // namespace

double spectral_norm(const Matrix& m, double tol, int max_iter) {
  if (m.size() == 0) return 0.0;
  const double fro = m.norm();
  if (fro == 0.0) return 0.0;
  const Eigen::Index n = m.cols();
  const Vector ones = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double est = power_iterate(m, ones, tol, max_iter);
  // sigma_1 >= ||m||_F / sqrt(min(rows, cols)); falling below it means the
  // start vector missed the top singular direction.
  const double lower = fro / std::sqrt(static_cast<double>(std::min(m.rows(), m.cols())));
  if (est < lower * (1.0 - 1e-9)) {
    std::mt19937_64 gen(0x5eedULL);
    std::normal_distribution<double> normal;
    Vector start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = normal(gen);
    est = std::max(est, power_iterate(m, start.normalized(), tol, max_iter));
  }
  return est;
}

ThinSvd thin_svd(const Matrix& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw ShapeMismatch("thin_svd: empty matrix");
  }
  const Eigen::MatrixXd dense = m;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NonConvergence("thin_svd: SVD iteration failed");
  }
  ThinSvd out;
  out.u = svd.matrixU();
  out.sigma = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

double nuclear_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return thin_svd(m).sigma.sum();
}

Matrix solve_sym_pd(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw ShapeMismatch("solve_sym_pd: incompatible shapes");
  }
  const double scale = std::max(1.0, linf_norm(a));
  if (((a - a.transpose()).cwiseAbs().array() > 1e-10 * scale).any()) {
    throw NotPositiveDefinite("solve_sym_pd: matrix is not symmetric");
  }
  const Eigen::MatrixXd dense = a;
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("solve_sym_pd: nonpositive pivot");
  }
  const Eigen::MatrixXd rhs = b;
  return llt.solve(rhs);
}

Matrix inv_regularized_gram(const Matrix& r, double c) {
  const Eigen::Index f = r.cols();
  Matrix out = Matrix::Identity(f, f) / c;
  if (r.rows() == 0 || f == 0) return out;
  const ThinSvd svd = thin_svd(r);
  const int p = svd.rank();
  if (p == 0) return out;
  const Matrix vr = svd.v.leftCols(p);
  Vector shrink(p);
  for (int i = 0; i < p; ++i) {
    const double s2 = svd.sigma(i) * svd.sigma(i);
    shrink(i) = s2 / (c + s2);
  }
  out.noalias() -= (vr * shrink.asDiagonal() * vr.transpose()) / c;
  return out;
}

Matrix svt_shrink(const Matrix& m, double tau) {
  if (m.size() == 0) return m;
  const ThinSvd svd = thin_svd(m);
  Vector s = svd.sigma;
  for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::max(s(i) - tau, 0.0);
  return svd.u * s.asDiagonal() * svd.v.transpose();
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace dsrm
