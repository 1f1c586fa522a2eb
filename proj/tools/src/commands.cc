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

#include "commands.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.h"
#include "feature_io.h"
#include "json.hpp"
#include "readrank/analysis.h"
#include "readrank/context.h"
#include "readrank/corpus.h"
#include "readrank/error.h"
#include "readrank/format.h"
#include "readrank/ngramlm.h"
#include "readrank/pairmodel.h"
#include "readrank/parallel.h"
#include "readrank/qc.h"
#include "readrank/random.h"
#include "readrank/ranking.h"
#include "readrank/simulate.h"
#include "readrank/synfeat.h"
#include "readrank/trueskill.h"

namespace readrank::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kSeedVariable = "READRANK_SEED";

// A path argument where "-" means the standard stream.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw ValidationError("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  void close() {
    stream().flush();
    if (!stream()) throw Error("write failed for '" + path_ + "'");
    if (file_.is_open()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  return in;
}

std::vector<JudgmentRecord> read_judgments_arg(const std::string& path) {
  if (path == "-") return read_judgments(std::cin, "<stdin>");
  return load_judgments(path);
}

// "config {...}" for CSV/JSONL comment lines.
std::string echo_comment(const std::string& echo) { return "config " + echo; }

template <typename Enum>
std::map<std::string, Enum> enum_map(std::initializer_list<Enum> values,
                                     std::string_view (*name)(Enum)) {
  std::map<std::string, Enum> m;
  for (Enum v : values) m.emplace(std::string(name(v)), v);
  return m;
}

// Enum-valued option accepting the names in `values`. Results keep the
// given name so the config echo shows names; the echoed default is the name
// of the current value.
template <typename Enum>
CLI::Option* add_enum(CLI::App* app, const std::string& flag, Enum& target,
                      std::initializer_list<Enum> values, std::string_view (*name)(Enum),
                      const std::string& help) {
  auto names = enum_map(values, name);
  std::vector<std::string> keys;
  for (const auto& [k, v] : names) keys.push_back(k);
  return app
      ->add_option_function<std::string>(
          flag, [&target, names](const std::string& v) { target = names.at(v); }, help)
      ->check(CLI::IsMember(keys))
      ->default_str(std::string(name(target)));
}

std::string_view rank_by_name(RankBy r) { return r == RankBy::kMu ? "mu" : "conservative"; }
std::string_view aggregation_name(RunAggregation a) {
  return a == RunAggregation::kMeanRank ? "mean_rank" : "mean_mu";
}
std::string_view choice_model_name(ChoiceModel m) {
  return m == ChoiceModel::kProbit ? "probit" : "logit";
}

// Options and state shared by every subcommand.
struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::set<std::string> not_echoed{"workers"};
  virtual ~Command() = default;
  virtual void run(const std::string& echo) = 0;

  void add_config() {
    app->add_option("--config", config_path, "JSON file of option values; flags win");
  }
};

void add_workers(CLI::App* app, unsigned& workers) {
  app->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
}

void add_seed(CLI::App* app, uint64_t& seed) {
  app->add_option("--seed", seed,
                  std::string("Random seed (default from ") + kSeedVariable + ", else 0)");
}

// Lexical, LM and PCFG resources for featurization.
struct ResourcePaths {
  std::string lexicon;
  std::string dale_chall;
  std::string stopwords;
  std::string lm;
  std::string treebank;

  void add(CLI::App* app, bool required) {
    auto opt = [&](const char* name, std::string& target, const char* help) {
      auto* o = app->add_option(name, target, help);
      if (required) o->required();
      return o;
    };
    opt("--lexicon", lexicon, "AoA lexicon CSV (word,aoa_rating,n_syllables)");
    opt("--dale-chall", dale_chall, "Dale-Chall word list");
    opt("--stopwords", stopwords, "Stopword list");
    opt("--lm", lm, "Language model written by train-lm");
    opt("--treebank", treebank, "Treebank for PCFG estimation, one tree per line");
  }
  bool complete() const {
    return !lexicon.empty() && !dale_chall.empty() && !stopwords.empty() && !lm.empty() &&
           !treebank.empty();
  }
  FeatureResources load() const {
    FeatureResources res;
    res.lexicon = load_lexicon(lexicon);
    res.dale_chall = load_wordlist(dale_chall, WordRole::kDaleChall);
    res.stopwords = load_wordlist(stopwords, WordRole::kStopword);
    {
      auto in = open_input(lm);
      res.lm = NgramModel::load(in);
    }
    auto in = open_input(treebank);
    const auto trees = read_treebank(in);
    res.pcfg = estimate_pcfg(trees);
    return res;
  }
};

FeatureStore featurize(const SentenceFeaturizer& featurizer,
                       const std::vector<SentenceRecord>& sentences, bool with_context,
                       unsigned workers) {
  std::vector<FeatureVector> vectors(sentences.size());
  parallel_for(sentences.size(), workers,
               [&](size_t i) { vectors[i] = featurizer.full_vector(sentences[i], with_context); });
  FeatureStore store;
  for (size_t i = 0; i < sentences.size(); ++i) {
    store.emplace(sentences[i].id, std::move(vectors[i]));
  }
  return store;
}

// ---------------------------------------------------------------- train-lm

struct TrainLmCommand : Command {
  std::string corpus;
  std::string out;
  NgramOptions options;
  bool raw_logprob = false;

  explicit TrainLmCommand(CLI::App& root) {
    app = root.add_subcommand("train-lm", "Train the backoff n-gram language model");
    add_config();
    app->add_option("--corpus", corpus, "Text corpus, one sentence per line")->required();
    app->add_option("--out", out, "Model JSON output")->required();
    app->add_option("--order", options.max_order, "Maximum n-gram order")->check(CLI::Range(1, 5));
    app->add_option("--alpha", options.backoff_alpha, "Backoff multiplier")
        ->check(CLI::Range(0.0, 1.0));
    app->add_flag("--raw-logprob", raw_logprob, "Do not divide log scores by length");
    not_echoed.insert("out");
  }

  void run(const std::string& echo) override {
    options.length_normalized = !raw_logprob;
    auto in = open_input(corpus);
    const auto model = train_lm(read_lm_corpus(in), options);
    std::ostringstream buf;
    model.save(buf);
    auto j = ordered_json::parse(buf.str());
    j["config"] = ordered_json::parse(echo);
    Output o(out);
    o.stream() << j.dump() << '\n';
    o.close();
  }
};

// -------------------------------------------------------- extract-features

struct ExtractFeaturesCommand : Command {
  std::string sentences;
  ResourcePaths resources;
  bool coref = false;
  bool paper_faithful = false;
  std::string out;
  unsigned workers = default_workers();

  explicit ExtractFeaturesCommand(CLI::App& root) {
    app = root.add_subcommand("extract-features", "Compute per-sentence feature vectors");
    add_config();
    app->add_option("--sentences", sentences, "Sentences JSONL")->required();
    resources.add(app, true);
    app->add_flag("--coref", coref, "Add ctx: features of coreference-linked sentences");
    app->add_flag("--paper-faithful", paper_faithful,
                  "Treat length windows as errors instead of warnings");
    app->add_option("--out", out, "Feature JSON output")->required();
    add_workers(app, workers);
    not_echoed.insert("out");
  }

  void run(const std::string& echo) override {
    std::vector<std::string> warnings;
    const auto records = load_sentences(sentences, {paper_faithful}, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    const auto res = resources.load();
    const SentenceFeaturizer featurizer(res);
    FeatureFile file;
    file.with_context = coref;
    file.store = featurize(featurizer, records, coref, workers);
    Output o(out);
    write_feature_file(o.stream(), file, echo);
    o.close();
  }
};

// --------------------------------------------------------------- qc-filter

struct QcFilterCommand : Command {
  std::string judgments = "-";
  TaskMode task_mode = TaskMode::kSentenceOnly;
  QcOptions qc;
  bool no_gold_gate = false;
  std::string out = "-";
  std::string report;
  unsigned workers = default_workers();

  explicit QcFilterCommand(CLI::App& root) {
    app = root.add_subcommand("qc-filter", "Remove low-quality workers");
    add_config();
    app->add_option("--judgments", judgments, "Judgments JSONL ('-' = stdin)");
    add_enum(app, "--task-mode", task_mode, {TaskMode::kSentenceOnly, TaskMode::kInPassage},
             task_mode_name, "sentence_only or in_passage");
    app->add_option("--gold-threshold", qc.gold_threshold, "Minimum gold accuracy")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--sentence-only-threshold", qc.sentence_only_threshold,
                    "Disagreement rate that removes a worker (sentence_only)")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--in-passage-threshold", qc.in_passage_threshold,
                    "Disagreement rate that removes a worker (in_passage)")
        ->check(CLI::Range(0.0, 1.0));
    add_enum(app, "--penalty", qc.penalty, {PenaltyMode::kModalShare, PenaltyMode::kFlat},
             penalty_mode_name, "modal_share or flat");
    app->add_flag("--no-gold-gate", no_gold_gate, "Skip the gold-accuracy gate");
    app->add_option("--out", out, "Retained judgments JSONL ('-' = stdout)");
    app->add_option("--report", report, "Per-worker CSV report");
    add_workers(app, workers);
    not_echoed.insert({"out", "report"});
  }

  void run(const std::string& echo) override {
    qc.gold_gate = !no_gold_gate;
    const auto all = read_judgments_arg(judgments);
    const auto result = filter_workers(all, task_mode, qc, workers);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << "qc: removed " << result.removed_judgments << " of " << result.total_judgments
              << " non-gold judgments (" << format_fixed(100.0 * result.removal_fraction, 2)
              << "%)\n";
    if (!report.empty()) {
      Output r(report);
      write_qc_report(r.stream(), result.workers, echo_comment(echo));
      r.close();
    }
    Output o(out);
    o.stream() << "# " << echo_comment(echo) << '\n';
    write_judgments(o.stream(), result.retained);
    o.close();
  }
};

// ------------------------------------------- train / evaluate / importance

struct ModelOptions {
  std::string judgments;
  std::string features;
  std::optional<double> selection_pct;
  bool best_effort_split = false;
  EvalConfig eval;

  void add(CLI::App* app) {
    app->add_option("--judgments", judgments, "Judgments JSONL")->required();
    app->add_option("--features", features, "Feature JSON from extract-features")->required();
    app->add_option("--selection-pct", selection_pct,
                    "Share of features kept for Model B (default 0.02, 0.01 with ctx)")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--n-trees", eval.forest.n_trees, "Random forest size")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-depth", eval.forest.max_depth, "Tree depth limit (0 = none)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--min-leaf", eval.forest.min_leaf, "Minimum judgments per leaf")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-features", eval.forest.max_features,
                    "Features tried per split (0 = sqrt)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--l2", eval.logreg.l2, "L2 penalty on the mean loss")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--tolerance", eval.logreg.tolerance, "Gradient-norm tolerance")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-iterations", eval.logreg.max_iterations, "Optimizer iteration cap")
        ->check(CLI::PositiveNumber);
  }

  void add_split(CLI::App* app) {
    app->add_option("--splits", eval.n_splits, "Random hold-out splits")
        ->check(CLI::PositiveNumber);
    app->add_option("--fraction", eval.fraction, "Held-out sentence fraction")
        ->check(CLI::Range(0.0, 1.0));
    app->add_flag("--best-effort-split", best_effort_split,
                  "Accept the closest split when the exact hold-out size is infeasible");
  }

  // Judgments and features, with EvalConfig completed from them.
  std::pair<std::vector<JudgmentRecord>, FeatureFile> load(uint64_t seed, unsigned workers) {
    auto js = load_judgments(judgments);
    auto in = open_input(features);
    auto file = read_feature_file(in, features);
    eval.seed = seed;
    eval.workers = workers;
    eval.forest.workers = 1;
    eval.with_context = file.with_context;
    eval.require_target = !best_effort_split;
    eval.selection_pct = selection_pct.value_or(file.with_context ? 0.01 : 0.02);
    return {std::move(js), std::move(file)};
  }
};

struct TrainCommand : Command {
  ModelOptions model;
  ModelKind kind = ModelKind::kAll;
  uint64_t seed = 0;
  std::string out;
  unsigned workers = default_workers();

  explicit TrainCommand(CLI::App& root) {
    app = root.add_subcommand("train", "Fit one pairwise logistic-regression model");
    add_config();
    model.add(app);
    add_enum(app, "--model", kind, {ModelKind::kAll, ModelKind::kAoaParse, ModelKind::kAoa},
             model_kind_name, "B_all, C_aoa_parse or D_aoa");
    add_seed(app, seed);
    app->add_option("--out", out, "Model JSON output")->required();
    add_workers(app, workers);
    not_echoed.insert("out");
  }

  void run(const std::string& echo) override {
    auto [js, file] = model.load(seed, workers);
    model.eval.forest.workers = workers;
    const auto m = train_model(js, file.store, kind, model.eval);
    Output o(out);
    save_model(o.stream(), m, echo);
    o.close();
  }
};

struct EvaluateCommand : Command {
  ModelOptions model;
  uint64_t seed = 0;
  std::string out = "-";
  std::string json;
  unsigned workers = default_workers();

  explicit EvaluateCommand(CLI::App& root) {
    app = root.add_subcommand("evaluate", "Repeated hold-out accuracy of models A-D");
    add_config();
    model.add(app);
    model.add_split(app);
    add_seed(app, seed);
    app->add_option("--out", out, "Accuracy table CSV ('-' = stdout)");
    app->add_option("--json", json, "Full report JSON");
    add_workers(app, workers);
    not_echoed.insert({"out", "json"});
  }

  void run(const std::string& echo) override {
    auto [js, file] = model.load(seed, workers);
    const auto report = repeated_eval(js, file.store, model.eval);
    if (!json.empty()) {
      Output j(json);
      write_eval_json(j.stream(), report, echo);
      j.close();
    }
    Output o(out);
    write_eval_table(o.stream(), report, echo_comment(echo));
    o.close();
  }
};

struct ImportanceCommand : Command {
  ModelOptions model;
  std::vector<std::string> group_names;
  uint64_t seed = 0;
  std::string out = "-";
  unsigned workers = default_workers();

  explicit ImportanceCommand(CLI::App& root) {
    app = root.add_subcommand("importance", "Feature-group ablation importance");
    add_config();
    model.add(app);
    model.add_split(app);
    std::vector<std::string> names;
    for (FeatureGroup g : kAllFeatureGroups) names.emplace_back(group_name(g));
    app->add_option("--groups", group_names, "Groups to ablate (default all)")
        ->check(CLI::IsMember(names));
    add_seed(app, seed);
    app->add_option("--out", out, "Importance CSV ('-' = stdout)");
    add_workers(app, workers);
    not_echoed.insert("out");
  }

  void run(const std::string& echo) override {
    auto [js, file] = model.load(seed, workers);
    std::vector<FeatureGroup> groups;
    for (const auto& g : group_names) groups.push_back(parse_group(g));
    if (groups.empty()) groups.assign(kAllFeatureGroups.begin(), kAllFeatureGroups.end());
    const auto rows = group_importance(js, file.store, model.eval, groups);
    Output o(out);
    write_group_importance(o.stream(), rows, echo_comment(echo));
    o.close();
  }
};

// -------------------------------------------------------------------- rank

struct RankCommand : Command {
  std::string judgments = "-";
  TrueSkillParams params;
  std::optional<double> beta;
  std::optional<double> tau;
  bool gold_only = false;
  uint64_t seed = 0;
  std::string truth;
  std::string out = "-";
  unsigned workers = default_workers();

  explicit RankCommand(CLI::App& root) {
    app = root.add_subcommand("rank", "Aggregate judgments into a difficulty ranking");
    add_config();
    app->add_option("--judgments", judgments, "Judgments JSONL ('-' = stdin)");
    app->add_option("--runs", params.runs, "Shuffled rating runs averaged")
        ->check(CLI::PositiveNumber);
    app->add_option("--mu0", params.mu0, "Prior mean");
    app->add_option("--sigma0", params.sigma0, "Prior standard deviation")
        ->check(CLI::PositiveNumber)
        ->default_str(format_double(params.sigma0));
    app->add_option("--beta", beta, "Performance noise (default sigma0 / 2)")
        ->check(CLI::PositiveNumber);
    app->add_option("--tau", tau, "Dynamics noise (default sigma0 / 100)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--p-draw", params.p_draw, "Draw probability")->check(CLI::Range(0.0, 1.0));
    add_enum(app, "--rank-by", params.rank_by, {RankBy::kMu, RankBy::kConservative}, rank_by_name,
             "mu or conservative (mu - 3 sigma)");
    add_enum(app, "--aggregate", params.aggregation,
             {RunAggregation::kMeanRank, RunAggregation::kMeanMu}, aggregation_name,
             "mean_rank or mean_mu");
    app->add_flag("--gold-only", gold_only, "Use gold questions only");
    add_seed(app, seed);
    app->add_option("--truth", truth,
                    "Reference ranking CSV; Spearman against it is printed to stderr");
    app->add_option("--out", out, "Ranking CSV ('-' = stdout)");
    add_workers(app, workers);
    not_echoed.insert({"out", "truth"});
  }

  void run(const std::string& echo) override {
    const auto js = read_judgments_arg(judgments);
    TrueSkillParams p = TrueSkillParams::from_prior(params.mu0, params.sigma0);
    p.runs = params.runs;
    p.p_draw = params.p_draw;
    p.rank_by = params.rank_by;
    p.aggregation = params.aggregation;
    if (beta) p.beta = *beta;
    if (tau) p.tau = *tau;
    p.workers = workers;
    const auto ranking = gold_only ? gold_only_ranking(js, p, seed) : aggregate_runs(js, p, seed);
    if (!truth.empty()) {
      auto in = open_input(truth);
      const Ranking reference = read_ranking_csv(in, truth).ranking();
      const Ranking mine = ranking.ranking();
      std::vector<double> a;
      std::vector<double> b;
      for (const auto& id : mine.order()) {
        if (!reference.contains(id)) continue;
        a.push_back(mine.rank_index(id));
        b.push_back(reference.rank_index(id));
      }
      const auto rho = spearman(a, b);
      std::cerr << "spearman_vs_truth=" << format_fixed(rho.r, 4) << " n=" << rho.n << '\n';
    }
    Output o(out);
    write_ranking_csv(o.stream(), ranking, echo_comment(echo));
    o.close();
  }
};

// -------------------------------------------------------- compare-rankings

struct CompareRankingsCommand : Command {
  std::string ranking_a;
  std::string ranking_b;
  std::string expert;
  std::string features;
  std::string feature_report;
  std::string sentences;
  ResourcePaths resources;
  std::string rank_change_report;
  std::string out = "-";

  explicit CompareRankingsCommand(CLI::App& root) {
    app = root.add_subcommand("compare-rankings",
                              "Rank differences and correlations between two rankings");
    add_config();
    app->add_option("--ranking-a", ranking_a, "Ranking CSV (e.g. sentence_only)")->required();
    auto* b = app->add_option("--ranking-b", ranking_b, "Ranking CSV (e.g. in_passage)");
    auto* e = app->add_option("--expert", expert,
                              "Expert grade ranges CSV (sentence_id,low,high) instead of B");
    b->excludes(e);
    app->add_option("--features", features, "Feature JSON for per-feature correlations");
    app->add_option("--feature-report", feature_report,
                    "CSV of feature-value correlations with ranking A")
        ->needs(app->get_option("--features"));
    app->add_option("--sentences", sentences, "Sentences JSONL with passages");
    resources.add(app, false);
    app->add_option("--rank-change-report", rank_change_report,
                    "CSV of rank change (B - A) against target-minus-context features")
        ->needs(app->get_option("--sentences"))
        ->needs(b);
    app->add_option("--out", out, "Comparison CSV ('-' = stdout)");
    not_echoed.insert({"out", "feature-report", "rank-change-report"});
  }

  static Ranking load_ranking(const std::string& path) {
    auto in = open_input(path);
    return read_ranking_csv(in, path).ranking();
  }

  void run(const std::string& echo) override {
    if (ranking_b.empty() && expert.empty()) {
      throw UsageError("compare-rankings: one of --ranking-b or --expert is required");
    }
    const Ranking a = load_ranking(ranking_a);
    Ranking b;
    if (!expert.empty()) {
      auto in = open_input(expert);
      b = expert_ranking(read_grade_ranges(in, expert));
    } else {
      b = load_ranking(ranking_b);
    }
    const auto cmp = compare_rankings(a, b);
    Output o(out);
    write_comparison_report(o.stream(), cmp, echo_comment(echo));
    o.close();

    if (!feature_report.empty()) {
      auto in = open_input(features);
      const auto file = read_feature_file(in, features);
      std::vector<FeatureCorrelation> rows;
      for (const auto& name : dense_feature_names()) {
        std::map<std::string, double> values;
        for (const auto& [id, vec] : file.store) values[id] = vec.value_or_zero(name);
        try {
          rows.push_back(feature_value_ranking_corr(name, values, a));
        } catch (const ZeroVarianceError&) {
          std::cerr << "warning: feature '" << name << "' is constant; skipped\n";
        }
      }
      Output f(feature_report);
      write_feature_correlation_report(f.stream(), rows, echo_comment(echo));
      f.close();
    }

    if (!rank_change_report.empty()) {
      if (!resources.complete()) {
        throw UsageError(
            "--rank-change-report needs --lexicon, --dale-chall, --stopwords, --lm and "
            "--treebank");
      }
      const auto records = load_sentences(sentences);
      const auto res = resources.load();
      const SentenceFeaturizer featurizer(res);
      std::vector<RankChangeResult> rows;
      for (const auto& name : dense_feature_names()) {
        rows.push_back(rank_change_feature_corr(a, b, records, featurizer, name));
        for (const auto& w : rows.back().warnings) std::cerr << "warning: " << w << '\n';
      }
      Output r(rank_change_report);
      write_rank_change_report(r.stream(), rows, echo_comment(echo));
      r.close();
    }
  }
};

// ---------------------------------------------------------------- simulate

void write_truth(const std::filesystem::path& path, const std::map<std::string, double>& scores,
                 const std::string& comment) {
  std::vector<std::string> ids;
  for (const auto& [id, s] : scores) ids.push_back(id);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](const auto& x, const auto& y) { return scores.at(x) > scores.at(y); });
  AggregateRanking truth;
  for (size_t i = 0; i < ids.size(); ++i) {
    const int rank = static_cast<int>(i) + 1;
    truth.rows.push_back({rank, ids[i], static_cast<double>(rank), scores.at(ids[i]), 0.0});
  }
  Output o(path.string());
  write_ranking_csv(o.stream(), truth, comment);
  o.close();
}

template <typename Fn>
void write_file(const std::filesystem::path& path, const std::string& comment, Fn&& body) {
  Output o(path.string());
  if (!comment.empty()) o.stream() << "# " << comment << '\n';
  body(o.stream());
  o.close();
}

struct SimulateCommand : Command {
  SimConfig config;
  bool paper_scale = false;
  std::string out_dir;
  bool to_stdout = false;
  TaskMode stdout_mode = TaskMode::kSentenceOnly;

  explicit SimulateCommand(CLI::App& root) {
    app = root.add_subcommand("simulate", "Generate a synthetic corpus and crowd judgments");
    add_config();
    auto* ps = app->add_flag("--paper-scale", paper_scale,
                             "120 sentences, 7 decisions per ordered pair, draw rate 0.02");
    auto* n = app->add_option("--n-sentences", config.n_sentences, "Sentences (multiple of 6)");
    auto* k = app->add_option("--judgments-per-pair", config.judgments_per_pair,
                              "Decisions per pair and presentation order");
    auto* d =
        app->add_option("--p-draw", config.p_draw, "Draw probability")->check(CLI::Range(0.0, 1.0));
    ps->excludes(n)->excludes(k)->excludes(d);
    app->add_option("--blocks", config.blocks, "Pair-generation blocks per bin");
    app->add_option("--noise-sd", config.noise_sd, "Per-decision difficulty noise")
        ->check(CLI::PositiveNumber);
    app->add_option("--n-workers", config.n_workers, "Simulated workers");
    app->add_option("--spammer-fraction", config.spammer_fraction,
                    "Share of workers answering uniformly")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--n-gold", config.n_gold, "Distinct gold questions");
    add_enum(app, "--choice-model", config.choice_model,
             {ChoiceModel::kProbit, ChoiceModel::kLogit}, choice_model_name, "probit or logit");
    app->add_option("--difficulty-jitter", config.difficulty_jitter, "Within-bin difficulty spread")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--lexical-noise", config.lexical_noise, "Lexical channel noise");
    app->add_option("--syntax-noise", config.syntax_noise, "Syntactic channel noise");
    app->add_option("--surface-noise", config.surface_noise, "Surface channel noise");
    app->add_option("--context-effect", config.context_effect, "In-passage difficulty shift");
    app->add_option("--lm-corpus-sentences", config.lm_corpus_sentences,
                    "Background LM corpus size");
    app->add_option("--treebank-sentences", config.treebank_sentences, "Background treebank size");
    add_seed(app, config.seed);
    app->add_option("--out-dir", out_dir, "Directory for the corpus files");
    app->add_flag("--stdout", to_stdout, "Stream judgments of --task-mode to stdout");
    add_enum(app, "--task-mode", stdout_mode, {TaskMode::kSentenceOnly, TaskMode::kInPassage},
             task_mode_name, "Judgments streamed by --stdout");
    not_echoed.insert({"out-dir", "stdout", "task-mode"});
  }

  void run(const std::string& echo) override {
    if (out_dir.empty() && !to_stdout) {
      throw UsageError("simulate: give --out-dir, --stdout or both");
    }
    if (paper_scale) {
      config.n_sentences = 120;
      config.judgments_per_pair = 7;
      config.p_draw = 0.02;
    }
    config.validate();
    const auto data = simulate_dataset(config);
    const auto& corpus = data.corpus;
    const auto& pairs = data.pairs;
    const auto& sentence_only = data.sentence_only;
    const auto& in_passage = data.in_passage;
    const double agree_so = majority_agreement(sentence_only);
    const double agree_ip = majority_agreement(in_passage);
    std::cerr << "simulate: " << corpus.sentences.size() << " sentences, " << pairs.size()
              << " pairs, majority agreement " << format_fixed(agree_so, 4) << " / "
              << format_fixed(agree_ip, 4) << " (sentence_only / in_passage)\n";

    const std::string comment = echo_comment(echo);
    if (!out_dir.empty()) {
      const std::filesystem::path dir(out_dir);
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) throw ValidationError("cannot create output directory '" + out_dir + "'");
      write_file(dir / "sentences.jsonl", comment,
                 [&](std::ostream& s) { write_sentences(s, corpus.sentences); });
      write_file(dir / "judgments_sentence_only.jsonl", comment,
                 [&](std::ostream& s) { write_judgments(s, sentence_only); });
      write_file(dir / "judgments_in_passage.jsonl", comment,
                 [&](std::ostream& s) { write_judgments(s, in_passage); });
      write_file(dir / "lexicon.csv", comment,
                 [&](std::ostream& s) { write_lexicon(s, corpus.lexicon); });
      write_file(dir / "dale_chall.txt", comment,
                 [&](std::ostream& s) { write_wordlist(s, corpus.dale_chall); });
      write_file(dir / "stopwords.txt", comment,
                 [&](std::ostream& s) { write_wordlist(s, corpus.stopwords); });
      write_file(dir / "lm_corpus.txt", comment, [&](std::ostream& s) {
        for (const auto& line : corpus.lm_corpus) s << line << '\n';
      });
      write_file(dir / "treebank.txt", comment, [&](std::ostream& s) {
        for (const auto& line : corpus.treebank) s << line << '\n';
      });
      write_file(dir / "expert_ranges.csv", comment, [&](std::ostream& s) {
        s << "sentence_id,low,high\n";
        for (const auto& r : corpus.expert_ranges) {
          s << r.sentence_id << ',' << r.low << ',' << r.high << '\n';
        }
      });
      write_truth(dir / "truth_sentence_only.csv", corpus.difficulty, comment);
      write_truth(dir / "truth_in_passage.csv", corpus.passage_difficulty, comment);
      write_file(dir / "config.json", "", [&](std::ostream& s) {
        ordered_json j;
        j["config"] = ordered_json::parse(echo);
        j["pairs"] = pairs.size();
        j["judgments_sentence_only"] = sentence_only.size();
        j["judgments_in_passage"] = in_passage.size();
        j["majority_agreement_sentence_only"] = agree_so;
        j["majority_agreement_in_passage"] = agree_ip;
        j["spammers_sentence_only"] = data.spammers_sentence_only;
        j["spammers_in_passage"] = data.spammers_in_passage;
        s << j.dump(2) << '\n';
      });
    }
    if (to_stdout) {
      Output o("-");
      o.stream() << "# " << comment << '\n';
      write_judgments(o.stream(),
                      stdout_mode == TaskMode::kSentenceOnly ? sentence_only : in_passage);
      o.close();
    }
  }
};

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App root("readrank: sentence difficulty ranking and pairwise readability models",
                "readrank");
  root.option_defaults()->always_capture_default();
  root.require_subcommand(1);
  root.set_version_flag("--version", "readrank 0.1.0");

  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<TrainLmCommand>(root));
  commands.push_back(std::make_unique<ExtractFeaturesCommand>(root));
  commands.push_back(std::make_unique<QcFilterCommand>(root));
  commands.push_back(std::make_unique<TrainCommand>(root));
  commands.push_back(std::make_unique<EvaluateCommand>(root));
  commands.push_back(std::make_unique<RankCommand>(root));
  commands.push_back(std::make_unique<CompareRankingsCommand>(root));
  commands.push_back(std::make_unique<ImportanceCommand>(root));
  commands.push_back(std::make_unique<SimulateCommand>(root));

  try {
    root.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = root.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto& cmd : commands) {
      if (!cmd->app->parsed()) continue;
      if (!cmd->config_path.empty()) apply_json_config(*cmd->app, cmd->config_path);
      apply_env_default(*cmd->app, "--seed", kSeedVariable);
      cmd->run(config_echo(*cmd->app, cmd->not_echoed));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace readrank::cli
