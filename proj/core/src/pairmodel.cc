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

#include "readrank/pairmodel.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "json.hpp"
#include "readrank/error.h"
#include "readrank/format.h"
#include "readrank/parallel.h"
#include "readrank/random.h"

namespace readrank {

using nlohmann::ordered_json;

size_t PairMatrix::column(std::string_view name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw PreconditionError("pair matrix has no column '" + std::string(name) + "'");
}

std::vector<size_t> PairMatrix::columns(std::span<const std::string> wanted) const {
  std::unordered_map<std::string_view, size_t> index;
  for (size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  std::vector<size_t> out;
  out.reserve(wanted.size());
  for (const auto& n : wanted) {
    auto it = index.find(n);
    if (it == index.end()) {
      throw PreconditionError("pair matrix has no column '" + n + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

namespace {

// Dense names first, then pos_pct:*, then syn:*; sentence features before
// context features; alphabetical within each class.
std::tuple<int, int, std::string_view> column_key(std::string_view name) {
  const bool ctx = name.starts_with(kContextPrefix);
  const auto base = ctx ? name.substr(kContextPrefix.size()) : name;
  int kind = 0;
  if (base.starts_with(kPosPrefix)) {
    kind = 1;
  } else if (base.starts_with(kSubtreePrefix)) {
    kind = 2;
  }
  return {ctx ? 1 : 0, kind, name};
}

}  // namespace

PairMatrix build_pair_matrix(std::span<const JudgmentRecord> judgments,
                             const FeatureStore& features, bool with_context) {
  std::vector<std::string> missing;
  std::set<std::string> used;
  for (const auto& j : judgments) {
    if (j.is_gold || j.choice == Choice::kDraw) continue;
    for (const auto* id : {&j.sent_a, &j.sent_b}) {
      if (!features.count(*id)) {
        missing.push_back("judgment on pair '" + j.pair_id + "' references sentence '" + *id +
                          "' with no features");
      } else {
        used.insert(*id);
      }
    }
  }
  if (!missing.empty()) throw ValidationError(std::move(missing));

  std::map<std::string, FeatureGroup> base_names;
  for (const auto& id : used) {
    for (const auto& e : features.at(id).entries()) {
      if (!with_context && std::string_view(e.name).starts_with(kContextPrefix)) continue;
      base_names.emplace(e.name, e.group);
    }
  }
  std::vector<std::string> ordered;
  for (const auto& [name, group] : base_names) ordered.push_back(name);
  std::stable_sort(ordered.begin(), ordered.end(), [](const std::string& a, const std::string& b) {
    return column_key(a) < column_key(b);
  });

  PairMatrix m;
  const size_t d = ordered.size();
  for (const char* prefix : {"A:", "B:"}) {
    for (const auto& n : ordered) {
      m.names.push_back(prefix + n);
      m.groups.push_back(base_names.at(n));
    }
  }
  std::unordered_map<std::string, std::vector<double>> dense;
  for (const auto& id : used) {
    const auto& fv = features.at(id);
    std::vector<double> v(d);
    for (size_t k = 0; k < d; ++k) v[k] = fv.value_or_zero(ordered[k]);
    dense.emplace(id, std::move(v));
  }
  for (const auto& j : judgments) {
    if (j.is_gold || j.choice == Choice::kDraw) continue;
    PairExample ex;
    ex.pair_id = j.pair_id;
    ex.sent_a = j.sent_a;
    ex.sent_b = j.sent_b;
    ex.label = j.choice == Choice::kA ? Label::kA : Label::kB;
    const auto& a = dense.at(j.sent_a);
    const auto& b = dense.at(j.sent_b);
    ex.x.reserve(2 * d);
    ex.x.insert(ex.x.end(), a.begin(), a.end());
    ex.x.insert(ex.x.end(), b.begin(), b.end());
    m.examples.push_back(std::move(ex));
  }
  return m;
}

double CountedRows::total() const {
  return std::accumulate(count_a.begin(), count_a.end(), 0.0) +
         std::accumulate(count_b.begin(), count_b.end(), 0.0);
}

CountedRows count_rows(const PairMatrix& matrix, std::span<const size_t> example_indices) {
  CountedRows rows;
  std::unordered_map<std::string, size_t> index;
  for (size_t i : example_indices) {
    const auto& ex = matrix.examples.at(i);
    auto [it, inserted] = index.emplace(ex.pair_id, rows.size());
    if (inserted) {
      rows.pair_ids.push_back(ex.pair_id);
      rows.x.push_back(&ex.x);
      rows.count_a.push_back(0.0);
      rows.count_b.push_back(0.0);
    }
    (ex.label == Label::kA ? rows.count_a : rows.count_b)[it->second] += ex.weight;
  }
  return rows;
}

std::string counterpart(std::string_view name) {
  if (name.starts_with("A:")) return "B:" + std::string(name.substr(2));
  if (name.starts_with("B:")) return "A:" + std::string(name.substr(2));
  return std::string(name);
}

std::vector<std::string> select_features(const std::map<std::string, double>& importances,
                                         double pct, bool symmetrize) {
  if (!(pct > 0 && pct <= 1)) throw PreconditionError("select_features: pct must be in (0, 1]");
  std::vector<std::pair<std::string, double>> ranked(importances.begin(), importances.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const size_t d = ranked.size();
  const size_t k = std::min(
      d, std::max<size_t>(1, static_cast<size_t>(std::ceil(pct * static_cast<double>(d) - 1e-9))));
  std::set<std::string> chosen;
  for (size_t i = 0; i < k; ++i) {
    chosen.insert(ranked[i].first);
    if (symmetrize) chosen.insert(counterpart(ranked[i].first));
  }
  return {chosen.begin(), chosen.end()};
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double eval_accuracy(const LogRegModel& model, const PairMatrix& matrix,
                     std::span<const size_t> example_indices) {
  if (example_indices.empty()) throw PreconditionError("eval_accuracy: no test examples");
  const auto cols = matrix.columns(model.feature_names);
  double correct = 0.0;
  double total = 0.0;
  for (size_t i : example_indices) {
    const auto& ex = matrix.examples[i];
    if (classify(predict_row(model, cols, ex.x)) == ex.label) correct += ex.weight;
    total += ex.weight;
  }
  return correct / total;
}

double oracle_accuracy(std::span<const JudgmentRecord> judgments) {
  std::map<std::string, std::pair<double, double>> counts;
  for (const auto& j : judgments) {
    if (j.is_gold || j.choice == Choice::kDraw) continue;
    auto& c = counts[j.pair_id];
    (j.choice == Choice::kA ? c.first : c.second) += 1.0;
  }
  double best = 0.0;
  double total = 0.0;
  for (const auto& [id, c] : counts) {
    best += std::max(c.first, c.second);
    total += c.first + c.second;
  }
  if (total == 0.0) throw PreconditionError("oracle_accuracy: no non-draw judgments");
  return best / total;
}

double oracle_accuracy(const PairMatrix& matrix, std::span<const size_t> example_indices) {
  const auto rows = count_rows(matrix, example_indices);
  double best = 0.0;
  for (size_t r = 0; r < rows.size(); ++r) best += std::max(rows.count_a[r], rows.count_b[r]);
  const double total = rows.total();
  if (total == 0.0) throw PreconditionError("oracle_accuracy: no examples");
  return best / total;
}

double stratified_random(const PairMatrix& matrix, std::span<const size_t> example_indices,
                         double p_a, uint64_t seed) {
  if (example_indices.empty()) throw PreconditionError("stratified_random: no test examples");
  Rng rng(seed);
  double correct = 0.0;
  double total = 0.0;
  for (size_t i : example_indices) {
    const auto& ex = matrix.examples[i];
    const Label guess = rng.bernoulli(p_a) ? Label::kA : Label::kB;
    if (guess == ex.label) correct += ex.weight;
    total += ex.weight;
  }
  return correct / total;
}

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAll:
      return "B_all";
    case ModelKind::kAoaParse:
      return "C_aoa_parse";
    case ModelKind::kAoa:
      return "D_aoa";
  }
  return "";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "B_all") return ModelKind::kAll;
  if (name == "C_aoa_parse") return ModelKind::kAoaParse;
  if (name == "D_aoa") return ModelKind::kAoa;
  throw ValidationError("unknown model '" + std::string(name) +
                        "' (expected B_all, C_aoa_parse or D_aoa)");
}

std::vector<std::string> model_feature_names(ModelKind kind, bool with_context) {
  if (kind == ModelKind::kAll) {
    throw PreconditionError("Model B features are chosen by forest importance");
  }
  std::vector<std::string> base = {"aoa_avg", "aoa_max", "aoa_std"};
  if (kind == ModelKind::kAoaParse) {
    base.push_back("parse_loglik");
    base.push_back("reranker_loglik");
  }
  std::vector<std::string> names;
  for (const char* side : {"A:", "B:"}) {
    for (const auto& b : base) names.push_back(side + b);
    if (with_context) {
      for (const auto& b : base) names.push_back(side + std::string(kContextPrefix) + b);
    }
  }
  return names;
}

namespace {

struct PreparedData {
  std::vector<JudgmentRecord> judgments;  // non-gold
  PairMatrix matrix;
  std::vector<SentencePair> pairs;
  std::unordered_map<std::string, std::vector<size_t>> examples_by_pair;
};

PreparedData prepare(std::span<const JudgmentRecord> judgments, const FeatureStore& features,
                     bool with_context) {
  PreparedData data;
  for (const auto& j : judgments) {
    if (!j.is_gold) data.judgments.push_back(j);
  }
  data.matrix = build_pair_matrix(data.judgments, features, with_context);
  if (data.matrix.examples.empty()) {
    throw ValidationError("no non-draw, non-gold judgments to train on");
  }
  data.pairs = pairs_from_judgments(data.judgments);
  for (size_t i = 0; i < data.matrix.examples.size(); ++i) {
    data.examples_by_pair[data.matrix.examples[i].pair_id].push_back(i);
  }
  return data;
}

std::vector<size_t> examples_of(const PreparedData& data, std::span<const SentencePair> pairs) {
  std::vector<size_t> out;
  for (const auto& p : pairs) {
    auto it = data.examples_by_pair.find(p.pair_id);
    if (it != data.examples_by_pair.end())
      out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Columns that vary over the training rows and are not in an excluded group.
std::vector<size_t> candidate_columns(const PairMatrix& m, const CountedRows& rows,
                                      std::optional<FeatureGroup> excluded) {
  std::vector<size_t> out;
  for (size_t c = 0; c < m.names.size(); ++c) {
    if (excluded && m.groups[c] == *excluded) continue;
    const double first = (*rows.x[0])[c];
    bool varies = false;
    for (size_t r = 1; r < rows.size() && !varies; ++r) varies = (*rows.x[r])[c] != first;
    if (varies) out.push_back(c);
  }
  return out;
}

LogRegModel fit_model_b(const PairMatrix& m, const CountedRows& rows,
                        std::optional<FeatureGroup> excluded, const EvalConfig& config,
                        uint64_t seed, unsigned forest_workers) {
  const auto cols = candidate_columns(m, rows, excluded);
  if (cols.empty()) throw PreconditionError("Model B: no varying candidate features");
  ForestParams fp = config.forest;
  fp.workers = forest_workers;
  const auto forest = rf_train(m, rows, cols, fp, seed);
  const auto selected = select_features(rf_importances(forest), config.selection_pct, true);
  auto model = logreg_train(m, rows, selected, config.logreg, seed);
  model.model_kind = model_kind_name(ModelKind::kAll);
  return model;
}

LogRegModel fit_fixed(const PairMatrix& m, const CountedRows& rows, ModelKind kind,
                      const EvalConfig& config, uint64_t seed) {
  const auto names = model_feature_names(kind, config.with_context);
  auto model = logreg_train(m, rows, names, config.logreg, seed);
  model.model_kind = model_kind_name(kind);
  return model;
}

Split make_split(const PreparedData& data, const EvalConfig& config, size_t s) {
  SplitOptions so;
  so.fraction = config.fraction;
  so.seed = derive_seed(config.seed, s);
  so.require_target = config.require_target;
  return split_by_sentence(data.pairs, so);
}

void summarize(ModelAccuracy& m) {
  m.mean = mean(m.per_split);
  m.sd = m.per_split.size() > 1 ? sample_stddev(m.per_split) : 0.0;
}

}  // namespace

EvalReport repeated_eval(std::span<const JudgmentRecord> judgments, const FeatureStore& features,
                         const EvalConfig& config) {
  if (config.n_splits < 1) throw PreconditionError("repeated_eval: n_splits must be >= 1");
  const auto data = prepare(judgments, features, config.with_context);
  const size_t n = static_cast<size_t>(config.n_splits);
  EvalReport report;
  report.oracle.name = "Oracle (A)";
  report.model_b.name = "All Features (B)";
  report.model_c.name = "AoA + Parse L. (C)";
  report.model_d.name = "AoA (D)";
  report.strat_random.name = "Strat. Random";
  for (auto* m :
       {&report.oracle, &report.model_b, &report.model_c, &report.model_d, &report.strat_random}) {
    m->per_split.assign(n, 0.0);
  }
  report.selected_counts.assign(n, 0);

  parallel_for(n, config.workers, [&](size_t s) {
    const auto split = make_split(data, config, s);
    const auto train_idx = examples_of(data, split.train);
    const auto test_idx = examples_of(data, split.test);
    if (train_idx.empty() || test_idx.empty()) {
      throw PreconditionError("repeated_eval: split " + std::to_string(s) +
                              " has an empty train or test side");
    }
    const auto rows = count_rows(data.matrix, train_idx);
    const uint64_t split_seed = derive_seed(config.seed ^ 0x5eedULL, s);
    const auto b = fit_model_b(data.matrix, rows, std::nullopt, config, split_seed, 1);
    report.selected_counts[s] = b.feature_names.size();
    report.model_b.per_split[s] = eval_accuracy(b, data.matrix, test_idx);
    report.model_c.per_split[s] =
        eval_accuracy(fit_fixed(data.matrix, rows, ModelKind::kAoaParse, config, split_seed),
                      data.matrix, test_idx);
    report.model_d.per_split[s] = eval_accuracy(
        fit_fixed(data.matrix, rows, ModelKind::kAoa, config, split_seed), data.matrix, test_idx);
    report.oracle.per_split[s] = oracle_accuracy(data.matrix, test_idx);
    const double p_a =
        std::accumulate(rows.count_a.begin(), rows.count_a.end(), 0.0) / rows.total();
    report.strat_random.per_split[s] =
        stratified_random(data.matrix, test_idx, p_a, derive_seed(split_seed, 1));
  });

  for (auto* m :
       {&report.oracle, &report.model_b, &report.model_c, &report.model_d, &report.strat_random}) {
    summarize(*m);
  }
  if (n < 2) return report;
  report.model_b.versus_next = paired_t_test(report.model_b.per_split, report.model_c.per_split);
  report.model_c.versus_next = paired_t_test(report.model_c.per_split, report.model_d.per_split);
  report.model_d.versus_next =
      paired_t_test(report.model_d.per_split, report.strat_random.per_split);
  return report;
}

LogRegModel train_model(std::span<const JudgmentRecord> judgments, const FeatureStore& features,
                        ModelKind kind, const EvalConfig& config) {
  const auto data = prepare(judgments, features, config.with_context);
  std::vector<size_t> all(data.matrix.examples.size());
  std::iota(all.begin(), all.end(), size_t{0});
  const auto rows = count_rows(data.matrix, all);
  auto model = kind == ModelKind::kAll ? fit_model_b(data.matrix, rows, std::nullopt, config,
                                                     config.seed, config.workers)
                                       : fit_fixed(data.matrix, rows, kind, config, config.seed);
  model.coref = config.with_context;
  model.task_mode = config.with_context ? TaskMode::kInPassage : TaskMode::kSentenceOnly;
  return model;
}

std::vector<GroupImportance> group_importance(std::span<const JudgmentRecord> judgments,
                                              const FeatureStore& features,
                                              const EvalConfig& config,
                                              std::span<const FeatureGroup> groups) {
  if (config.n_splits < 1) throw PreconditionError("group_importance: n_splits must be >= 1");
  const auto data = prepare(judgments, features, config.with_context);
  const size_t n = static_cast<size_t>(config.n_splits);
  // errors[s][0] is the full model; errors[s][g + 1] excludes groups[g].
  std::vector<std::vector<double>> errors(n, std::vector<double>(groups.size() + 1, 0.0));
  parallel_for(n, config.workers, [&](size_t s) {
    const auto split = make_split(data, config, s);
    const auto train_idx = examples_of(data, split.train);
    const auto test_idx = examples_of(data, split.test);
    const auto rows = count_rows(data.matrix, train_idx);
    const uint64_t split_seed = derive_seed(config.seed ^ 0x5eedULL, s);
    for (size_t g = 0; g <= groups.size(); ++g) {
      std::optional<FeatureGroup> excluded;
      if (g > 0) excluded = groups[g - 1];
      const auto model = fit_model_b(data.matrix, rows, excluded, config, split_seed, 1);
      errors[s][g] = 1.0 - eval_accuracy(model, data.matrix, test_idx);
    }
  });
  std::vector<GroupImportance> out;
  double max_increase = 0.0;
  for (size_t g = 0; g < groups.size(); ++g) {
    double sum = 0.0;
    for (size_t s = 0; s < n; ++s) sum += errors[s][g + 1] - errors[s][0];
    GroupImportance gi{groups[g], sum / static_cast<double>(n), 0.0};
    max_increase = std::max(max_increase, gi.error_increase);
    out.push_back(gi);
  }
  for (auto& gi : out) gi.importance = max_increase > 0.0 ? gi.error_increase / max_increase : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Reports and artifacts
// ---------------------------------------------------------------------------

namespace {

std::string pct(double v) { return format_fixed(100.0 * v, 2) + "%"; }

std::string p_cell(const std::optional<TTestResult>& t) {
  if (!t) return "---";
  std::string s = format_fixed(t->p, 4);
  if (t->degenerate_variance) s += " (zero-variance)";
  return s;
}

ordered_json accuracy_json(const ModelAccuracy& m) {
  ordered_json j;
  j["name"] = m.name;
  j["mean"] = m.mean;
  j["sd"] = m.sd;
  if (m.versus_next) {
    j["t"] = std::isfinite(m.versus_next->t) ? ordered_json(m.versus_next->t)
                                             : ordered_json(m.versus_next->t > 0 ? "inf" : "-inf");
    j["p"] = m.versus_next->p;
    j["df"] = m.versus_next->df;
    j["degenerate_variance"] = m.versus_next->degenerate_variance;
  }
  j["per_split"] = m.per_split;
  return j;
}

ordered_json echo_json(std::string_view config_echo) {
  if (config_echo.empty()) return ordered_json::object();
  try {
    return ordered_json::parse(config_echo);
  } catch (const nlohmann::json::exception&) {
    return ordered_json(std::string(config_echo));
  }
}

}  // namespace

void write_eval_table(std::ostream& out, const EvalReport& report, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "model,acc,sd,p_value\n";
  for (const auto* m :
       {&report.oracle, &report.model_b, &report.model_c, &report.model_d, &report.strat_random}) {
    out << m->name << ',' << pct(m->mean) << ',' << pct(m->sd) << ',' << p_cell(m->versus_next)
        << '\n';
  }
  out << "# p_value: paired t-test against the next row; splits=" << report.oracle.per_split.size()
      << '\n';
}

void write_eval_json(std::ostream& out, const EvalReport& report, std::string_view config_echo) {
  ordered_json j;
  j["config"] = echo_json(config_echo);
  j["models"] = ordered_json::array();
  for (const auto* m :
       {&report.oracle, &report.model_b, &report.model_c, &report.model_d, &report.strat_random}) {
    j["models"].push_back(accuracy_json(*m));
  }
  j["model_b_selected_counts"] = report.selected_counts;
  out << j.dump(2) << '\n';
}

void write_group_importance(std::ostream& out, std::span<const GroupImportance> rows,
                            std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "group,importance,error_increase\n";
  std::vector<GroupImportance> sorted(rows.begin(), rows.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.importance > b.importance; });
  for (const auto& r : sorted) {
    out << group_name(r.group) << ',' << format_fixed(r.importance, 4) << ','
        << format_double(r.error_increase) << '\n';
  }
}

void save_model(std::ostream& out, const LogRegModel& model, std::string_view config_echo) {
  ordered_json j;
  j["format"] = "readrank-logreg";
  j["version"] = 1;
  j["model_kind"] = model.model_kind;
  j["task_mode"] = std::string(task_mode_name(model.task_mode));
  j["coref"] = model.coref;
  j["seed"] = model.seed;
  j["l2"] = model.l2;
  j["bias"] = model.bias;
  j["features"] = ordered_json::array();
  for (size_t k = 0; k < model.feature_names.size(); ++k) {
    ordered_json f;
    f["name"] = model.feature_names[k];
    f["weight"] = model.weights[k];
    f["mean"] = model.means[k];
    f["scale"] = model.scales[k];
    j["features"].push_back(std::move(f));
  }
  j["diagnostics"] = {{"iterations", model.iterations},
                      {"gradient_norm", model.gradient_norm},
                      {"converged", model.converged}};
  j["config"] = echo_json(config_echo);
  out << j.dump(2) << '\n';
}

LogRegModel load_model(std::istream& in, std::string_view source) {
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format") != "readrank-logreg" || j.at("version") != 1) {
      throw ValidationError(std::string(source) + ": not a readrank-logreg v1 model");
    }
    LogRegModel m;
    m.model_kind = j.at("model_kind").get<std::string>();
    m.task_mode = parse_task_mode(j.at("task_mode").get<std::string>());
    m.coref = j.at("coref").get<bool>();
    m.seed = j.at("seed").get<uint64_t>();
    m.l2 = j.at("l2").get<double>();
    m.bias = j.at("bias").get<double>();
    for (const auto& f : j.at("features")) {
      m.feature_names.push_back(f.at("name").get<std::string>());
      m.weights.push_back(f.at("weight").get<double>());
      m.means.push_back(f.at("mean").get<double>());
      const double scale = f.at("scale").get<double>();
      if (!(scale > 0)) throw ValidationError(std::string(source) + ": scale must be > 0");
      m.scales.push_back(scale);
    }
    const auto& d = j.at("diagnostics");
    m.iterations = d.at("iterations").get<int>();
    m.gradient_norm = d.at("gradient_norm").get<double>();
    m.converged = d.at("converged").get<bool>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string(source) + ": malformed model: " + e.what());
  }
}

}  // namespace readrank
