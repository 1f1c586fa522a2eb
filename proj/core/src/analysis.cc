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

#include "readrank/analysis.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "readrank/error.h"
#include "readrank/format.h"
#include "readrank/stats.h"

namespace readrank {

namespace {

double raw_pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError("correlation: zero variance input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("correlation: length mismatch");
  if (x.size() < 3) throw PreconditionError("correlation: need at least 3 observations");
}

double t_approx_p(double r, size_t n) {
  if (std::fabs(r) >= 1.0) return 0.0;
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / (1.0 - r * r));
  return student_t_two_sided_p(t, df);
}

std::vector<double> difficulty_positions(const Ranking& ranking,
                                         const std::vector<std::string>& ids) {
  std::vector<double> out;
  out.reserve(ids.size());
  const double n = static_cast<double>(ranking.size());
  for (const auto& id : ids) out.push_back(n + 1.0 - ranking.rank_index(id));
  return out;
}

}  // namespace

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const double r = raw_pearson(x, y);
  return {r, t_approx_p(r, x.size()), static_cast<int>(x.size())};
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

double permutation_p_value(std::span<const double> x, std::span<const double> y,
                           CorrelationKind kind) {
  check_inputs(x, y);
  if (x.size() > 10) throw PreconditionError("permutation test: n must be <= 10");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  if (kind == CorrelationKind::kSpearman) {
    xs = average_ranks(x);
    ys = average_ranks(y);
  }
  const double observed = std::fabs(raw_pearson(xs, ys));
  std::vector<size_t> perm(ys.size());
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::vector<double> permuted(ys.size());
  size_t extreme = 0;
  size_t total = 0;
  do {
    for (size_t i = 0; i < perm.size(); ++i) permuted[i] = ys[perm[i]];
    if (std::fabs(raw_pearson(xs, permuted)) >= observed - 1e-12) ++extreme;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

std::string_view significance_marker(double p) {
  if (p < 1e-4) return "**";
  if (p < 1e-3) return "*";
  return "";
}

RankDiffStats rank_diff_stats(const Ranking& a, const Ranking& b) {
  if (a.size() != b.size()) throw PreconditionError("rank_diff_stats: id sets differ");
  for (const auto& id : a.order()) {
    if (!b.contains(id)) {
      throw PreconditionError("rank_diff_stats: '" + id + "' missing from second ranking");
    }
  }
  RankDiffStats s;
  s.n = static_cast<int>(a.size());
  if (s.n == 0) return s;
  std::vector<double> diffs;
  diffs.reserve(a.size());
  for (const auto& id : a.order()) {
    diffs.push_back(std::fabs(static_cast<double>(a.rank_index(id) - b.rank_index(id))));
  }
  s.mean_abs_diff = mean(diffs);
  s.std_abs_diff = pop_stddev(diffs);
  s.normalized_pct = s.n > 1 ? s.mean_abs_diff / (s.n - 1) * 100.0 : 0.0;
  return s;
}

RankingComparison compare_rankings(const Ranking& a, const Ranking& b) {
  RankingComparison cmp;
  cmp.diff = rank_diff_stats(a, b);
  const auto& ids = a.order();
  const auto pa = difficulty_positions(a, ids);
  const auto pb = difficulty_positions(b, ids);
  cmp.pearson = pearson(pa, pb);
  cmp.spearman = spearman(pa, pb);
  return cmp;
}

RankChangeResult rank_change_corr(const Ranking& rank_only, const Ranking& rank_passage,
                                  const std::map<std::string, TargetContextValue>& values,
                                  std::string_view feature) {
  RankChangeResult out;
  out.feature = std::string(feature);
  std::vector<double> delta;
  std::vector<double> pct;
  for (const auto& [id, v] : values) {
    if (!rank_only.contains(id) || !rank_passage.contains(id)) {
      throw PreconditionError("rank change: '" + id + "' missing from a ranking");
    }
    if (v.context == 0.0) {
      out.warnings.push_back("sentence '" + id + "' excluded: context value of " + out.feature +
                             " is 0");
      continue;
    }
    out.used_ids.push_back(id);
    delta.push_back(rank_only.rank_index(id) - rank_passage.rank_index(id));
    pct.push_back((v.target - v.context) / std::fabs(v.context));
  }
  try {
    out.pearson = pearson(delta, pct);
    out.spearman = spearman(delta, pct);
  } catch (const ZeroVarianceError&) {
    out.no_effect = true;
    out.pearson = {0.0, 1.0, static_cast<int>(delta.size())};
    out.spearman = out.pearson;
  }
  return out;
}

RankChangeResult rank_change_feature_corr(const Ranking& rank_only, const Ranking& rank_passage,
                                          std::span<const SentenceRecord> records,
                                          const SentenceFeaturizer& featurizer,
                                          std::string_view feature) {
  const std::string ctx_name = std::string(kContextPrefix) + std::string(feature);
  std::map<std::string, TargetContextValue> values;
  std::vector<std::string> skipped;
  for (const auto& rec : records) {
    if (!rec.passage) {
      skipped.push_back("sentence '" + rec.id + "' excluded: no passage");
      continue;
    }
    const auto target = featurizer.record_vector(rec).get(feature);
    const auto context = featurizer.context_vector(remaining_passage(rec)).get(ctx_name);
    if (!target || !context) {
      skipped.push_back("sentence '" + rec.id + "' excluded: feature " + std::string(feature) +
                        " unavailable");
      continue;
    }
    values[rec.id] = {*target, *context};
  }
  auto out = rank_change_corr(rank_only, rank_passage, values, feature);
  out.warnings.insert(out.warnings.begin(), skipped.begin(), skipped.end());
  return out;
}

Ranking expert_ranking(std::span<const GradeRange> ranges) {
  std::vector<GradeRange> sorted(ranges.begin(), ranges.end());
  std::set<std::string> seen;
  for (const auto& r : sorted) {
    if (!(r.low <= r.high)) {
      throw ValidationError("grade range for '" + r.sentence_id + "' has low > high");
    }
    if (!seen.insert(r.sentence_id).second) {
      throw ValidationError("duplicate grade range for '" + r.sentence_id + "'");
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const GradeRange& a, const GradeRange& b) {
    if (a.midpoint() != b.midpoint()) return a.midpoint() > b.midpoint();
    return a.sentence_id < b.sentence_id;
  });
  std::vector<std::string> order;
  std::map<std::string, double> scores;
  for (const auto& r : sorted) {
    order.push_back(r.sentence_id);
    scores[r.sentence_id] = r.midpoint();
  }
  return Ranking(std::move(order), std::move(scores));
}

std::vector<GradeRange> read_grade_ranges(std::istream& in, std::string_view source) {
  std::vector<GradeRange> out;
  std::vector<std::string> errors;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = split_csv(trimmed);
    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    if (header) {
      header = false;
      if (cells.size() != 3 || cells[0] != "sentence_id" || cells[1] != "low" ||
          cells[2] != "high") {
        errors.push_back(where + "expected header sentence_id,low,high");
        break;
      }
      continue;
    }
    if (cells.size() != 3) {
      errors.push_back(where + "expected 3 fields");
      continue;
    }
    try {
      GradeRange r{cells[0], std::stod(cells[1]), std::stod(cells[2])};
      if (!(r.low <= r.high)) {
        errors.push_back(where + "low > high");
        continue;
      }
      out.push_back(std::move(r));
    } catch (const std::exception&) {
      errors.push_back(where + "non-numeric grade level");
    }
  }
  if (header && errors.empty()) errors.push_back(std::string(source) + ": empty file");
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return out;
}

AggregateRanking gold_only_ranking(std::span<const JudgmentRecord> judgments,
                                   const TrueSkillParams& params, uint64_t seed) {
  std::vector<JudgmentRecord> gold;
  for (const auto& j : judgments) {
    if (j.is_gold) gold.push_back(j);
  }
  if (gold.empty()) throw ValidationError("gold-only ranking: no gold judgments");
  return aggregate_runs(gold, params, seed);
}

FeatureCorrelation feature_value_ranking_corr(std::string_view feature,
                                              const std::map<std::string, double>& values,
                                              const Ranking& crowd) {
  std::vector<std::string> ids;
  std::vector<double> x;
  for (const auto& id : crowd.order()) {
    auto it = values.find(id);
    if (it == values.end()) {
      throw PreconditionError("feature correlation: no value of " + std::string(feature) +
                              " for '" + id + "'");
    }
    ids.push_back(id);
    x.push_back(it->second);
  }
  const auto pos = difficulty_positions(crowd, ids);
  return {std::string(feature), pearson(x, pos), spearman(x, pos)};
}

namespace {

std::string stat_cell(double v) { return format_fixed(v, 4); }

void write_comment(std::ostream& out, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
}

}  // namespace

void write_comparison_report(std::ostream& out, const RankingComparison& cmp,
                             std::string_view comment) {
  write_comment(out, comment);
  out << "statistic,value,p_value,marker\n";
  out << "avg_abs_diff," << stat_cell(cmp.diff.mean_abs_diff) << ",,\n";
  out << "avg_abs_std_dev," << stat_cell(cmp.diff.std_abs_diff) << ",,\n";
  out << "normalized_change_pct," << stat_cell(cmp.diff.normalized_pct) << ",,\n";
  out << "pearson," << stat_cell(cmp.pearson.r) << ',' << format_double(cmp.pearson.p) << ','
      << significance_marker(cmp.pearson.p) << '\n';
  out << "spearman," << stat_cell(cmp.spearman.r) << ',' << format_double(cmp.spearman.p) << ','
      << significance_marker(cmp.spearman.p) << '\n';
  out << "# n=" << cmp.diff.n
      << "; avg_abs_std_dev = population std of |rank change|;"
         " normalized_change_pct = avg_abs_diff/(n-1)*100\n";
  out << "# markers: ** p<0.0001, * p<0.001\n";
}

void write_rank_change_report(std::ostream& out, std::span<const RankChangeResult> rows,
                              std::string_view comment) {
  write_comment(out, comment);
  out << "feature,pearson,pearson_p,spearman,spearman_p,n,no_effect\n";
  for (const auto& r : rows) {
    out << r.feature << ',' << stat_cell(r.pearson.r) << significance_marker(r.pearson.p) << ','
        << format_double(r.pearson.p) << ',' << stat_cell(r.spearman.r)
        << significance_marker(r.spearman.p) << ',' << format_double(r.spearman.p) << ','
        << r.used_ids.size() << ',' << (r.no_effect ? "true" : "false") << '\n';
  }
  out << "# markers: ** p<0.0001, * p<0.001\n";
}

void write_feature_correlation_report(std::ostream& out, std::span<const FeatureCorrelation> rows,
                                      std::string_view comment) {
  write_comment(out, comment);
  out << "feature,pearson,pearson_p,spearman,spearman_p,n\n";
  for (const auto& r : rows) {
    out << r.feature << ',' << stat_cell(r.pearson.r) << significance_marker(r.pearson.p) << ','
        << format_double(r.pearson.p) << ',' << stat_cell(r.spearman.r)
        << significance_marker(r.spearman.p) << ',' << format_double(r.spearman.p) << ','
        << r.pearson.n << '\n';
  }
  out << "# markers: ** p<0.0001, * p<0.001\n";
}

}  // namespace readrank
