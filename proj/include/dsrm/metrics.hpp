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

// Estimation-quality metrics and per-round metric rows.

#ifndef DSRM_METRICS_HPP_
#define DSRM_METRICS_HPP_

#include <string>
#include <vector>

#include "dsrm/numerics.hpp"

namespace dsrm {

// ||est - truth||_F / ||truth||_F. Throws DegenerateTruth when truth is zero
// and ShapeMismatch on differing shapes.
double relative_error(const Matrix& est, const Matrix& truth);

// relative_error, or the absolute error ||est - truth||_F when truth is zero.
double relative_or_absolute_error(const Matrix& est, const Matrix& truth);

struct RocPoint {
  double threshold = 0.0;
  double p_fa = 0.0;
  double p_d = 0.0;
};

// Entry (f, t) is flagged iff |a_hat(f, t)| >= threshold. Thresholds sweep
// geometrically from max |a_hat| down to the smallest nonzero |a_hat|, so
// both rates are nonincreasing along the returned list. a_hat = 0 yields the
// single point (0, 0, 0). Throws NoAnomalies when a0 is all zero.
std::vector<RocPoint> roc_curve(const Matrix& a_hat, const Matrix& a0, int n_thresholds);

// Trapezoid area of the curve closed with (0, 0) and (1, 1).
double auc(const std::vector<RocPoint>& curve);

struct MetricsRow {
  int round = 0;
  double consensus_q = 0.0;
  double consensus_a = 0.0;
  double rel_err_x = 0.0;
  double rel_err_a = 0.0;
  double cost = 0.0;
};

std::vector<std::string> metrics_header();
std::vector<double> to_fields(const MetricsRow& row);

}  // namespace dsrm

#endif  // DSRM_METRICS_HPP_
