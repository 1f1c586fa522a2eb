// Copyright 2026 The readrank Authors.
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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "readrank/error.h"
#include "readrank/format.h"
#include "readrank/pairmodel.h"

namespace readrank {

namespace {

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LogisticProblem::LogisticProblem(std::vector<std::vector<double>> x, std::vector<double> weight_a,
                                 std::vector<double> weight_b, double l2)
    : x_(std::move(x)), wa_(std::move(weight_a)), wb_(std::move(weight_b)), l2_(l2) {
  if (x_.size() != wa_.size() || x_.size() != wb_.size()) {
    throw PreconditionError("logistic problem: row/weight size mismatch");
  }
  if (x_.empty()) throw PreconditionError("logistic problem: no rows");
  dim_ = x_[0].size();
  total_ =
      std::accumulate(wa_.begin(), wa_.end(), 0.0) + std::accumulate(wb_.begin(), wb_.end(), 0.0);
  if (!(total_ > 0)) throw PreconditionError("logistic problem: total weight must be > 0");
}

double LogisticProblem::loss(std::span<const double> theta) const {
  const auto w = theta.first(dim_);
  const double b = theta[dim_];
  double sum = 0.0;
  for (size_t i = 0; i < x_.size(); ++i) {
    const double z = dot(w, x_[i]) + b;
    sum += wa_[i] * softplus(-z) + wb_[i] * softplus(z);
  }
  return sum / total_ + 0.5 * l2_ * dot(w, w);
}

double LogisticProblem::loss_and_gradient(std::span<const double> theta,
                                          std::span<double> grad) const {
  const auto w = theta.first(dim_);
  const double b = theta[dim_];
  std::fill(grad.begin(), grad.end(), 0.0);
  double sum = 0.0;
  for (size_t i = 0; i < x_.size(); ++i) {
    const double z = dot(w, x_[i]) + b;
    sum += wa_[i] * softplus(-z) + wb_[i] * softplus(z);
    // d/dz [wa * softplus(-z) + wb * softplus(z)] = (wa + wb) * p - wa.
    const double g = ((wa_[i] + wb_[i]) * sigmoid(z) - wa_[i]) / total_;
    for (size_t k = 0; k < dim_; ++k) grad[k] += g * x_[i][k];
    grad[dim_] += g;
  }
  for (size_t k = 0; k < dim_; ++k) grad[k] += l2_ * w[k];
  return sum / total_ + 0.5 * l2_ * dot(w, w);
}

LogRegModel logreg_train(const PairMatrix& matrix, const CountedRows& rows,
                         std::span<const std::string> feature_names, const LogRegOptions& options,
                         uint64_t seed) {
  if (rows.size() == 0) throw PreconditionError("logreg: no training examples");
  if (!(options.l2 >= 0)) throw PreconditionError("logreg: l2 must be >= 0");
  const auto cols = matrix.columns(feature_names);
  const size_t d = cols.size();

  LogRegModel model;
  model.feature_names.assign(feature_names.begin(), feature_names.end());
  model.l2 = options.l2;
  model.seed = seed;
  model.means.assign(d, 0.0);
  model.scales.assign(d, 1.0);

  const double total = rows.total();
  for (size_t r = 0; r < rows.size(); ++r) {
    const double w = rows.count_a[r] + rows.count_b[r];
    for (size_t k = 0; k < d; ++k) {
      const double v = (*rows.x[r])[cols[k]];
      if (!std::isfinite(v)) {
        throw ValidationError("non-finite value of feature '" + model.feature_names[k] +
                              "' in pair '" + rows.pair_ids[r] + "'");
      }
      model.means[k] += w * v;
    }
  }
  for (auto& m : model.means) m /= total;
  for (size_t k = 0; k < d; ++k) {
    double var = 0.0;
    for (size_t r = 0; r < rows.size(); ++r) {
      const double diff = (*rows.x[r])[cols[k]] - model.means[k];
      var += (rows.count_a[r] + rows.count_b[r]) * diff * diff;
    }
    const double sd = std::sqrt(var / total);
    model.scales[k] = sd > 0.0 ? sd : 1.0;
  }

  std::vector<std::vector<double>> xs(rows.size(), std::vector<double>(d));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t k = 0; k < d; ++k) {
      xs[r][k] = ((*rows.x[r])[cols[k]] - model.means[k]) / model.scales[k];
    }
  }
  const LogisticProblem problem(std::move(xs), rows.count_a, rows.count_b, options.l2);

  std::vector<double> theta(d + 1, 0.0);
  std::vector<double> grad(d + 1);
  std::vector<double> candidate(d + 1);
  double loss = problem.loss_and_gradient(theta, grad);
  model.loss_trace.push_back(loss);
  double step = 1.0;
  int iter = 0;
  double gnorm = std::sqrt(dot(grad, grad));
  while (gnorm > options.tolerance && iter < options.max_iterations) {
    const double g2 = gnorm * gnorm;
    bool accepted = false;
    double cand_loss = 0.0;
    for (; step > 1e-20; step *= 0.5) {
      for (size_t k = 0; k <= d; ++k) candidate[k] = theta[k] - step * grad[k];
      cand_loss = problem.loss(candidate);
      if (cand_loss <= loss - 1e-4 * step * g2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    theta.swap(candidate);
    loss = problem.loss_and_gradient(theta, grad);
    model.loss_trace.push_back(loss);
    gnorm = std::sqrt(dot(grad, grad));
    ++iter;
    step = std::min(step * 2.0, 1e6);
  }
  model.weights.assign(theta.begin(), theta.begin() + d);
  model.bias = theta[d];
  model.iterations = iter;
  model.gradient_norm = gnorm;
  model.converged = gnorm <= options.tolerance;
  return model;
}

double predict_proba(const LogRegModel& model, std::span<const double> values) {
  if (values.size() != model.weights.size()) {
    throw PreconditionError("predict: expected " + std::to_string(model.weights.size()) +
                            " values");
  }
  double z = model.bias;
  for (size_t k = 0; k < values.size(); ++k) {
    z += model.weights[k] * (values[k] - model.means[k]) / model.scales[k];
  }
  return sigmoid(z);
}

double predict_row(const LogRegModel& model, std::span<const size_t> columns,
                   std::span<const double> row) {
  double z = model.bias;
  for (size_t k = 0; k < columns.size(); ++k) {
    z += model.weights[k] * (row[columns[k]] - model.means[k]) / model.scales[k];
  }
  return sigmoid(z);
}

}  // namespace readrank
