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

#ifndef READRANK_PAIRMODEL_H_
#define READRANK_PAIRMODEL_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "readrank/context.h"
#include "readrank/corpus.h"
#include "readrank/features.h"
#include "readrank/stats.h"

namespace readrank {

// ---------------------------------------------------------------------------
// Design matrix
// ---------------------------------------------------------------------------

enum class Label { kA, kB };

struct PairExample {
  std::string pair_id;
  std::string sent_a;
  std::string sent_b;
  std::vector<double> x;  // columns of PairMatrix::names
  Label label = Label::kA;
  double weight = 1.0;
};

// Columns are the "A:" block followed by the "B:" block over the same
// unprefixed names, so swapping the halves of a row swaps the sentences.
struct PairMatrix {
  std::vector<std::string> names;
  std::vector<FeatureGroup> groups;
  std::vector<PairExample> examples;

  size_t block_size() const { return names.size() / 2; }
  // Throws PreconditionError naming the missing column.
  size_t column(std::string_view name) const;
  std::vector<size_t> columns(std::span<const std::string> names) const;
};

// One example per non-draw, non-gold judgment. The label is the sentence
// chosen as more difficult, expressed against the canonical sent_a/sent_b
// so both presentation orders share one orientation. "ctx:" features are
// kept only when `with_context`; sparse features absent from a sentence are 0.
PairMatrix build_pair_matrix(std::span<const JudgmentRecord> judgments,
                             const FeatureStore& features, bool with_context);

// Distinct pairs with per-label judgment counts.
struct CountedRows {
  std::vector<std::string> pair_ids;
  std::vector<const std::vector<double>*> x;  // points into the source matrix
  std::vector<double> count_a;
  std::vector<double> count_b;

  size_t size() const { return x.size(); }
  double total() const;
};

// Rows of `example_indices` grouped by pair_id, in first-appearance order.
CountedRows count_rows(const PairMatrix& matrix, std::span<const size_t> example_indices);

// ---------------------------------------------------------------------------
// Random forest
// ---------------------------------------------------------------------------

struct ForestParams {
  int n_trees = 200;
  int max_depth = 0;      // 0 = unlimited
  double min_leaf = 2.0;  // minimum bootstrap judgments per leaf
  int max_features = 0;   // 0 = floor(sqrt(d)), at least 1
  unsigned workers = 1;
};

struct TreeNode {
  int feature = -1;        // index into Forest::columns; -1 for a leaf
  double threshold = 0.0;  // x <= threshold goes left
  int left = -1;
  int right = -1;
  double count_a = 0.0;
  double count_b = 0.0;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;     // nodes[0] is the root
  std::vector<double> importance;  // impurity decrease per forest column
};

struct Forest {
  std::vector<size_t> columns;             // matrix columns the trees may split on
  std::vector<std::string> feature_names;  // parallel to columns
  std::vector<DecisionTree> trees;
  ForestParams params;
  uint64_t seed = 0;
};

// Bootstraps individual judgments, grows CART trees with Gini splits over
// a random feature subset per node. `columns` limits the candidate features
// (empty = all). Throws PreconditionError when only one class is present.
Forest rf_train(const PairMatrix& matrix, const CountedRows& rows, std::span<const size_t> columns,
                const ForestParams& params, uint64_t seed);

// Mean decrease in Gini impurity: per-tree normalized, averaged over trees,
// then normalized to sum to 1. All zeros when no tree split.
std::map<std::string, double> rf_importances(const Forest& forest);

// Mean leaf probability that A is harder, over trees. `row` spans all
// matrix columns.
double forest_predict(const Forest& forest, std::span<const double> row);

// Top ceil(pct * d) names by importance, ties by name; when `symmetrize`
// the A:/B: counterpart of every selected name is added. Sorted by name.
std::vector<std::string> select_features(const std::map<std::string, double>& importances,
                                         double pct, bool symmetrize = true);

// Swaps an "A:"/"B:" prefix; other names are returned unchanged.
std::string counterpart(std::string_view name);

// ---------------------------------------------------------------------------
// Logistic regression
// ---------------------------------------------------------------------------

struct LogRegOptions {
  double l2 = 0.01;         // on the mean loss
  double tolerance = 1e-6;  // gradient norm
  int max_iterations = 5000;
};

struct LogRegModel {
  std::vector<std::string> feature_names;
  std::vector<double> weights;  // in standardized units
  double bias = 0.0;
  double l2 = 0.0;
  std::vector<double> means;
  std::vector<double> scales;
  // Metadata.
  std::string model_kind;
  TaskMode task_mode = TaskMode::kSentenceOnly;
  bool coref = false;
  uint64_t seed = 0;
  // Diagnostics.
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> loss_trace;  // initial loss, then every accepted step

  bool operator==(const LogRegModel&) const = default;
};

// Weighted binary cross-entropy over standardized rows, averaged over the
// total weight, plus (l2 / 2) * |w|^2. The bias is not penalized.
class LogisticProblem {
 public:
  // `x` rows are already standardized; y = 1 means A.
  LogisticProblem(std::vector<std::vector<double>> x, std::vector<double> weight_a,
                  std::vector<double> weight_b, double l2);

  size_t dim() const { return dim_; }
  // theta = (w_0..w_{d-1}, bias).
  double loss(std::span<const double> theta) const;
  double loss_and_gradient(std::span<const double> theta, std::span<double> grad) const;

 private:
  std::vector<std::vector<double>> x_;
  std::vector<double> wa_;
  std::vector<double> wb_;
  double l2_;
  double total_;
  size_t dim_;
};

// Full-batch gradient descent from zero with Armijo backtracking.
// Throws ValidationError naming feature and pair on non-finite values.
LogRegModel logreg_train(const PairMatrix& matrix, const CountedRows& rows,
                         std::span<const std::string> feature_names, const LogRegOptions& options,
                         uint64_t seed = 0);

// Probability that A is harder for raw feature values ordered as
// model.feature_names.
double predict_proba(const LogRegModel& model, std::span<const double> values);
// Same for a matrix row given the model's column indices.
double predict_row(const LogRegModel& model, std::span<const size_t> columns,
                   std::span<const double> row);
inline Label classify(double p) { return p >= 0.5 ? Label::kA : Label::kB; }

void save_model(std::ostream& out, const LogRegModel& model, std::string_view config_echo = {});
LogRegModel load_model(std::istream& in, std::string_view source);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// Fraction of examples whose label matches classify(predict).
double eval_accuracy(const LogRegModel& model, const PairMatrix& matrix,
                     std::span<const size_t> example_indices);
// Majority label per pair, charged the minority judgments. Pairs with a
// tied vote are charged half. Draws and gold judgments are ignored.
double oracle_accuracy(std::span<const JudgmentRecord> judgments);
double oracle_accuracy(const PairMatrix& matrix, std::span<const size_t> example_indices);
// Each test example gets label A with probability `p_a`.
double stratified_random(const PairMatrix& matrix, std::span<const size_t> example_indices,
                         double p_a, uint64_t seed);

enum class ModelKind { kAll, kAoaParse, kAoa };  // Models B, C, D
std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// Fixed feature lists of Models C and D (A: block then B: block).
std::vector<std::string> model_feature_names(ModelKind kind, bool with_context);

struct EvalConfig {
  int n_splits = 200;
  double fraction = 0.2;
  uint64_t seed = 0;
  double selection_pct = 0.02;
  bool with_context = false;
  ForestParams forest;
  LogRegOptions logreg;
  unsigned workers = 1;
  bool require_target = true;  // see SplitOptions
};

struct ModelAccuracy {
  std::string name;
  std::vector<double> per_split;
  double mean = 0.0;
  double sd = 0.0;                         // sample standard deviation
  std::optional<TTestResult> versus_next;  // paired test against the row below
};

struct EvalReport {
  ModelAccuracy oracle;
  ModelAccuracy model_b;
  ModelAccuracy model_c;
  ModelAccuracy model_d;
  ModelAccuracy strat_random;
  std::vector<size_t> selected_counts;  // Model B feature count per split
};

// Per split: sentence-disjoint 20% hold-out, features selected on the train
// side, models fit and scored on individual test judgments.
EvalReport repeated_eval(std::span<const JudgmentRecord> judgments, const FeatureStore& features,
                         const EvalConfig& config);

// Trains one Model-B/C/D classifier on every judgment.
LogRegModel train_model(std::span<const JudgmentRecord> judgments, const FeatureStore& features,
                        ModelKind kind, const EvalConfig& config);

struct GroupImportance {
  FeatureGroup group;
  double error_increase = 0.0;  // mean over splits
  double importance = 0.0;      // error_increase / max error_increase
};

// Reruns the Model-B pipeline with each group excluded from candidacy.
std::vector<GroupImportance> group_importance(std::span<const JudgmentRecord> judgments,
                                              const FeatureStore& features,
                                              const EvalConfig& config,
                                              std::span<const FeatureGroup> groups);

void write_eval_table(std::ostream& out, const EvalReport& report, std::string_view comment = {});
void write_eval_json(std::ostream& out, const EvalReport& report,
                     std::string_view config_echo = {});
void write_group_importance(std::ostream& out, std::span<const GroupImportance> rows,
                            std::string_view comment = {});

}  // namespace readrank

#endif  // READRANK_PAIRMODEL_H_
