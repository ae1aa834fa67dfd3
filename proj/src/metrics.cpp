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

#include "dsrm/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dsrm/errors.hpp"

namespace dsrm {

namespace {

void same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeMismatch(what);
}

}  // namespace

double relative_error(const Matrix& est, const Matrix& truth) {
  same_shape(est, truth, "relative_error: shapes differ");
  const double denom = frobenius_norm(truth);
  if (denom == 0.0) throw DegenerateTruth("relative_error: truth has zero norm");
  return frobenius_norm(est - truth) / denom;
}

double relative_or_absolute_error(const Matrix& est, const Matrix& truth) {
  same_shape(est, truth, "relative_error: shapes differ");
  const double denom = frobenius_norm(truth);
  const double diff = frobenius_norm(est - truth);
  return denom == 0.0 ? diff : diff / denom;
}

std::vector<RocPoint> roc_curve(const Matrix& a_hat, const Matrix& a0, int n_thresholds) {
  same_shape(a_hat, a0, "roc_curve: shapes differ");
  if (n_thresholds < 1) throw ShapeMismatch("roc_curve: need at least one threshold");
  Eigen::Index positives = 0;
  for (Eigen::Index i = 0; i < a0.size(); ++i) positives += a0.data()[i] != 0.0;
  if (positives == 0) throw NoAnomalies("roc_curve: a0 has no anomalies");
  const Eigen::Index negatives = a0.size() - positives;

  double hi = 0.0;
  double lo = 0.0;
  for (Eigen::Index i = 0; i < a_hat.size(); ++i) {
    const double v = std::abs(a_hat.data()[i]);
    if (v == 0.0) continue;
    hi = std::max(hi, v);
    lo = lo == 0.0 ? v : std::min(lo, v);
  }
  if (hi == 0.0) return {RocPoint{}};

  std::vector<double> thresholds;
  if (lo == hi || n_thresholds == 1) {
    thresholds.push_back(hi);
    if (lo != hi) thresholds.push_back(lo);
  } else {
    const double ratio = std::log(lo / hi);
    for (int i = 0; i < n_thresholds; ++i) {
      thresholds.push_back(i == n_thresholds - 1 ? lo
                                                 : hi * std::exp(ratio * i / (n_thresholds - 1)));
    }
  }

  std::vector<RocPoint> curve;
  curve.reserve(thresholds.size());
  for (double tau : thresholds) {
    Eigen::Index hits = 0;
    Eigen::Index false_alarms = 0;
    for (Eigen::Index i = 0; i < a_hat.size(); ++i) {
      if (std::abs(a_hat.data()[i]) < tau) continue;
      if (a0.data()[i] != 0.0) {
        ++hits;
      } else {
        ++false_alarms;
      }
    }
    RocPoint p;
    p.threshold = tau;
    p.p_d = static_cast<double>(hits) / positives;
    p.p_fa = negatives == 0 ? 0.0 : static_cast<double>(false_alarms) / negatives;
    curve.push_back(p);
  }
  return curve;
}

double auc(const std::vector<RocPoint>& curve) {
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  for (const RocPoint& p : curve) pts.emplace_back(p.p_fa, p.p_d);
  pts.emplace_back(1.0, 1.0);
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += 0.5 * (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second);
  }
  return area;
}

std::vector<std::string> metrics_header() {
  return {"round", "consensus_q", "consensus_a", "rel_err_x", "rel_err_a", "cost"};
}

std::vector<double> to_fields(const MetricsRow& row) {
  return {static_cast<double>(row.round), row.consensus_q, row.consensus_a,
          row.rel_err_x, row.rel_err_a, row.cost};
}

}  // namespace dsrm
