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

#ifndef READRANK_TRUESKILL_H_
#define READRANK_TRUESKILL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "readrank/corpus.h"
#include "readrank/ranking.h"

namespace readrank {

// Gaussian belief over a sentence's difficulty "skill".
struct Rating {
  double mu = 25.0;
  double sigma = 25.0 / 3.0;
};

enum class RankBy { kMu, kConservative };  // mu, or mu - 3 sigma
enum class RunAggregation { kMeanRank, kMeanMu };

struct TrueSkillParams {
  double mu0 = 25.0;
  double sigma0 = 25.0 / 3.0;
  double beta = 25.0 / 6.0;
  double tau = 25.0 / 300.0;
  double p_draw = 0.02;
  int runs = 50;
  RankBy rank_by = RankBy::kMu;
  RunAggregation aggregation = RunAggregation::kMeanRank;
  unsigned workers = 1;

  // Defaults derived from a prior: beta = sigma0/2, tau = sigma0/100.
  static TrueSkillParams from_prior(double mu0, double sigma0);
  Rating prior() const { return {mu0, sigma0}; }
  void validate() const;
};

// Draw margin epsilon = Phi^-1((p_draw + 1) / 2) * sqrt(2) * beta.
double draw_margin(const TrueSkillParams& params);

// Truncated-Gaussian correction functions. `x` is the normalized mean
// difference, `d` the normalized draw margin.
double v_win(double x);
double w_win(double x);
double v_draw(double t, double d);
double w_draw(double t, double d);

// Returns the updated (winner, loser).
std::pair<Rating, Rating> update_win(Rating winner, Rating loser, const TrueSkillParams& params);
// Returns the updated (a, b).
std::pair<Rating, Rating> update_draw(Rating a, Rating b, const TrueSkillParams& params);

struct RunResult {
  Ranking ranking;  // scores are final mu
  std::map<std::string, Rating> ratings;
};

// One pass over the individually shuffled judgments. Sentences come from
// `sentence_ids` when non-empty (judgments must reference only those) and
// from the judgments otherwise.
RunResult run_ranking(std::span<const JudgmentRecord> judgments, const TrueSkillParams& params,
                      uint64_t seed, std::span<const std::string> sentence_ids = {});

// Averages params.runs runs seeded from `base_seed`.
AggregateRanking aggregate_runs(std::span<const JudgmentRecord> judgments,
                                const TrueSkillParams& params, uint64_t base_seed,
                                std::span<const std::string> sentence_ids = {});

}  // namespace readrank

#endif  // READRANK_TRUESKILL_H_
