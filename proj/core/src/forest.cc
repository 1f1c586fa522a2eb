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
#include "readrank/pairmodel.h"
#include "readrank/parallel.h"
#include "readrank/random.h"

namespace readrank {

namespace {

double gini(double a, double b) {
  const double n = a + b;
  if (n <= 0.0) return 0.0;
  const double pa = a / n;
  const double pb = b / n;
  return 1.0 - pa * pa - pb * pb;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double decrease = 0.0;  // weighted impurity decrease, in judgment counts
};

// Grows one tree over column-major data `xc` (forest-local features) with
// bootstrap counts per row.
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<double>>& xc, const std::vector<double>& wa,
              const std::vector<double>& wb, const ForestParams& params, int mtry, uint64_t seed)
      : xc_(xc), wa_(wa), wb_(wb), params_(params), mtry_(mtry), rng_(seed) {}

  DecisionTree build() {
    std::vector<size_t> rows;
    for (size_t r = 0; r < wa_.size(); ++r) {
      if (wa_[r] + wb_[r] > 0) rows.push_back(r);
    }
    std::vector<int> active(xc_.size());
    std::iota(active.begin(), active.end(), 0);
    tree_.importance.assign(xc_.size(), 0.0);
    grow(rows, active, 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<size_t>& rows, const std::vector<int>& active, int depth) {
    TreeNode node;
    for (size_t r : rows) {
      node.count_a += wa_[r];
      node.count_b += wb_[r];
    }
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(node);
    const double n = node.count_a + node.count_b;
    const bool pure = node.count_a == 0.0 || node.count_b == 0.0;
    const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
    if (pure || depth_capped || n < 2.0 * params_.min_leaf) return id;

    std::vector<int> child_active;
    const Split best = find_split(rows, active, child_active);
    if (best.feature < 0) return id;

    const auto& col = xc_[best.feature];
    std::vector<size_t> left;
    std::vector<size_t> right;
    for (size_t r : rows) {
      if (col[r] <= best.threshold) {
        left.push_back(r);
      } else {
        right.push_back(r);
      }
    }
    tree_.importance[best.feature] += best.decrease;
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(left, child_active, depth + 1);
    const int r = grow(right, child_active, depth + 1);
    auto& self = tree_.nodes[id];
    self.feature = best.feature;
    self.threshold = best.threshold;
    self.left = l;
    self.right = r;
    return id;
  }

  // Visits features in random order, skipping those constant in the node,
  // until mtry non-constant features were evaluated. Features found constant
  // are dropped from `child_active`.
  Split find_split(const std::vector<size_t>& rows, const std::vector<int>& active,
                   std::vector<int>& child_active) {
    std::vector<int> order = active;
    std::vector<char> constant(order.size(), 0);
    Split best;
    double total_a = 0, total_b = 0;
    for (size_t r : rows) {
      total_a += wa_[r];
      total_b += wb_[r];
    }
    const double n = total_a + total_b;
    const double parent = n * gini(total_a, total_b);
    int visited = 0;
    std::vector<std::pair<double, size_t>> sorted(rows.size());
    for (size_t i = 0; i < order.size() && visited < mtry_; ++i) {
      const size_t j = i + rng_.uniform_int(order.size() - i);
      std::swap(order[i], order[j]);
      std::swap(constant[i], constant[j]);
      const auto& col = xc_[order[i]];
      double lo = col[rows[0]];
      double hi = lo;
      for (size_t r : rows) {
        lo = std::min(lo, col[r]);
        hi = std::max(hi, col[r]);
      }
      if (lo == hi) {
        constant[i] = 1;
        continue;
      }
      ++visited;
      for (size_t k = 0; k < rows.size(); ++k) sorted[k] = {col[rows[k]], rows[k]};
      std::sort(sorted.begin(), sorted.end());
      double la = 0, lb = 0;
      for (size_t k = 0; k + 1 < sorted.size(); ++k) {
        la += wa_[sorted[k].second];
        lb += wb_[sorted[k].second];
        if (sorted[k].first == sorted[k + 1].first) continue;
        const double nl = la + lb;
        const double nr = n - nl;
        if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
        const double decrease = parent - nl * gini(la, lb) - nr * gini(total_a - la, total_b - lb);
        if (decrease > best.decrease + 1e-12) {
          double threshold = 0.5 * (sorted[k].first + sorted[k + 1].first);
          if (threshold >= sorted[k + 1].first) threshold = sorted[k].first;
          best = {order[i], threshold, decrease};
        }
      }
    }
    child_active.clear();
    child_active.reserve(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
      if (!constant[i]) child_active.push_back(order[i]);
    }
    // Keep the column order canonical so child traversal depends only on rng.
    std::sort(child_active.begin(), child_active.end());
    return best;
  }

  const std::vector<std::vector<double>>& xc_;
  const std::vector<double>& wa_;
  const std::vector<double>& wb_;
  const ForestParams& params_;
  int mtry_;
  Rng rng_;
  DecisionTree tree_;
};

}  // namespace

Forest rf_train(const PairMatrix& matrix, const CountedRows& rows, std::span<const size_t> columns,
                const ForestParams& params, uint64_t seed) {
  if (params.n_trees < 1) throw PreconditionError("forest: n_trees must be >= 1");
  if (!(params.min_leaf >= 1.0)) throw PreconditionError("forest: min_leaf must be >= 1");
  double total_a = 0, total_b = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    total_a += rows.count_a[r];
    total_b += rows.count_b[r];
  }
  if (total_a == 0.0 || total_b == 0.0) {
    throw PreconditionError("forest: training data must contain both classes");
  }

  Forest forest;
  forest.params = params;
  forest.seed = seed;
  if (columns.empty()) {
    forest.columns.resize(matrix.names.size());
    std::iota(forest.columns.begin(), forest.columns.end(), size_t{0});
  } else {
    forest.columns.assign(columns.begin(), columns.end());
  }
  for (size_t c : forest.columns) forest.feature_names.push_back(matrix.names.at(c));

  const size_t d = forest.columns.size();
  std::vector<std::vector<double>> xc(d, std::vector<double>(rows.size()));
  for (size_t f = 0; f < d; ++f) {
    for (size_t r = 0; r < rows.size(); ++r) xc[f][r] = (*rows.x[r])[forest.columns[f]];
  }
  const int mtry = params.max_features > 0
                       ? params.max_features
                       : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));

  // Individual judgments as (row, label) for bootstrap sampling.
  std::vector<std::pair<size_t, bool>> judgments;
  for (size_t r = 0; r < rows.size(); ++r) {
    for (int k = 0; k < static_cast<int>(rows.count_a[r]); ++k) judgments.emplace_back(r, true);
    for (int k = 0; k < static_cast<int>(rows.count_b[r]); ++k) judgments.emplace_back(r, false);
  }

  forest.trees.resize(params.n_trees);
  parallel_for(forest.trees.size(), params.workers, [&](size_t t) {
    Rng rng(derive_seed(seed, 2 * t));
    std::vector<double> wa(rows.size(), 0.0);
    std::vector<double> wb(rows.size(), 0.0);
    for (size_t k = 0; k < judgments.size(); ++k) {
      const auto& [r, is_a] = judgments[rng.uniform_int(judgments.size())];
      (is_a ? wa : wb)[r] += 1.0;
    }
    TreeBuilder builder(xc, wa, wb, params, mtry, derive_seed(seed, 2 * t + 1));
    forest.trees[t] = builder.build();
  });
  return forest;
}

std::map<std::string, double> rf_importances(const Forest& forest) {
  const size_t d = forest.columns.size();
  std::vector<double> acc(d, 0.0);
  for (const auto& tree : forest.trees) {
    const double sum = std::accumulate(tree.importance.begin(), tree.importance.end(), 0.0);
    if (sum <= 0.0) continue;
    for (size_t f = 0; f < d; ++f) acc[f] += tree.importance[f] / sum;
  }
  const double total = std::accumulate(acc.begin(), acc.end(), 0.0);
  std::map<std::string, double> out;
  for (size_t f = 0; f < d; ++f) {
    out[forest.feature_names[f]] = total > 0.0 ? acc[f] / total : 0.0;
  }
  return out;
}

double forest_predict(const Forest& forest, std::span<const double> row) {
  double sum = 0.0;
  for (const auto& tree : forest.trees) {
    int id = 0;
    while (tree.nodes[id].feature >= 0) {
      const auto& node = tree.nodes[id];
      id = row[forest.columns[node.feature]] <= node.threshold ? node.left : node.right;
    }
    const auto& leaf = tree.nodes[id];
    sum += leaf.count_a / (leaf.count_a + leaf.count_b);
  }
  return sum / static_cast<double>(forest.trees.size());
}

}  // namespace readrank
