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

#ifndef READRANK_ANALYSIS_H_
#define READRANK_ANALYSIS_H_

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
#include "readrank/ranking.h"
#include "readrank/trueskill.h"

namespace readrank {

// Rankings are stored most-difficult-first: rank index 1 is the hardest
// sentence. Correlations against a ranking use the difficulty position
// n + 1 - rank_index, so a feature that grows with difficulty correlates
// positively.

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-sided, t-approximation with n - 2 df
  int n = 0;
};

// Both require equal lengths >= 3 and throw ZeroVarianceError when either
// input is constant.
Correlation pearson(std::span<const double> x, std::span<const double> y);
// Pearson on average ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

enum class CorrelationKind { kPearson, kSpearman };

// Exact two-sided permutation p-value over all n! orderings of y; n <= 10.
double permutation_p_value(std::span<const double> x, std::span<const double> y,
                           CorrelationKind kind);

// "**" for p < 1e-4, "*" for p < 1e-3, "" otherwise.
std::string_view significance_marker(double p);

struct RankDiffStats {
  double mean_abs_diff = 0.0;
  double std_abs_diff = 0.0;    // population standard deviation
  double normalized_pct = 0.0;  // mean_abs_diff / (n - 1) * 100
  int n = 0;
};

// Requires identical id sets.
RankDiffStats rank_diff_stats(const Ranking& a, const Ranking& b);

struct RankingComparison {
  RankDiffStats diff;
  Correlation pearson;  // over difficulty positions
  Correlation spearman;
};

RankingComparison compare_rankings(const Ranking& a, const Ranking& b);

struct RankChangeResult {
  std::string feature;
  bool no_effect = false;  // rank change or feature difference had zero variance
  Correlation pearson;
  Correlation spearman;
  std::vector<std::string> used_ids;
  std::vector<std::string> warnings;
};

// Per sentence: delta = rank_only index - rank_passage index and
// pct = (target - context) / |context|. Sentences with context == 0 are
// skipped with a warning. Ids in `values` must appear in both rankings.
struct TargetContextValue {
  double target = 0.0;
  double context = 0.0;
};
RankChangeResult rank_change_corr(const Ranking& rank_only, const Ranking& rank_passage,
                                  const std::map<std::string, TargetContextValue>& values,
                                  std::string_view feature);

// Computes target and remaining-passage values of `feature` for every record
// with a passage, then delegates to rank_change_corr.
RankChangeResult rank_change_feature_corr(const Ranking& rank_only, const Ranking& rank_passage,
                                          std::span<const SentenceRecord> records,
                                          const SentenceFeaturizer& featurizer,
                                          std::string_view feature);

struct GradeRange {
  std::string sentence_id;
  double low = 0.0;
  double high = 0.0;
  double midpoint() const { return (low + high) / 2.0; }
};

// Midpoint descending, ties by id; scores are midpoints.
Ranking expert_ranking(std::span<const GradeRange> ranges);
std::vector<GradeRange> read_grade_ranges(std::istream& in, std::string_view source);

// Aggregate ranking over gold judgments only. Throws ValidationError when
// there are none.
AggregateRanking gold_only_ranking(std::span<const JudgmentRecord> judgments,
                                   const TrueSkillParams& params, uint64_t seed);

// Correlates values[id] with the difficulty position of id in `crowd`.
struct FeatureCorrelation {
  std::string feature;
  Correlation pearson;
  Correlation spearman;
};
FeatureCorrelation feature_value_ranking_corr(std::string_view feature,
                                              const std::map<std::string, double>& values,
                                              const Ranking& crowd);

void write_comparison_report(std::ostream& out, const RankingComparison& cmp,
                             std::string_view comment = {});
void write_rank_change_report(std::ostream& out, std::span<const RankChangeResult> rows,
                              std::string_view comment = {});
void write_feature_correlation_report(std::ostream& out, std::span<const FeatureCorrelation> rows,
                                      std::string_view comment = {});

}  // namespace readrank

#endif  // READRANK_ANALYSIS_H_
