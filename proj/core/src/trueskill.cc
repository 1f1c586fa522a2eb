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

#include "readrank/trueskill.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "readrank/error.h"
#include "readrank/parallel.h"
#include "readrank/random.h"
#include "readrank/stats.h"

namespace readrank {

namespace {

// Inverse Mills ratio phi(x)/Phi(x) for x << 0, from the asymptotic series
// Phi(x)/phi(x) ~ (1/u)(1 - 1/u^2 + 3/u^4 - 15/u^6 + 105/u^8), u = -x.
double inverse_mills_tail(double x) {
  const double u = -x;
  const double u2 = u * u;
  const double series =
      1.0 - 1.0 / u2 + 3.0 / (u2 * u2) - 15.0 / (u2 * u2 * u2) + 105.0 / (u2 * u2 * u2 * u2);
  return u / series;
}

constexpr double kTailCutoff = -30.0;

}  // namespace

TrueSkillParams TrueSkillParams::from_prior(double mu0, double sigma0) {
  TrueSkillParams p;
  p.mu0 = mu0;
  p.sigma0 = sigma0;
  p.beta = sigma0 / 2.0;
  p.tau = sigma0 / 100.0;
  return p;
}

void TrueSkillParams::validate() const {
  if (!(sigma0 > 0)) throw PreconditionError("trueskill: sigma0 must be > 0");
  if (!(beta > 0)) throw PreconditionError("trueskill: beta must be > 0");
  if (!(tau >= 0)) throw PreconditionError("trueskill: tau must be >= 0");
  if (!(p_draw >= 0 && p_draw < 1)) {
    throw PreconditionError("trueskill: p_draw must be in [0, 1)");
  }
  if (runs < 1) throw PreconditionError("trueskill: runs must be >= 1");
}

double draw_margin(const TrueSkillParams& params) {
  if (params.p_draw == 0.0) return 0.0;
  return normal_quantile((params.p_draw + 1.0) / 2.0) * std::sqrt(2.0) * params.beta;
}

double v_win(double x) {
  if (x < kTailCutoff) return inverse_mills_tail(x);
  return normal_pdf(x) / normal_cdf(x);
}

double w_win(double x) {
  const double v = v_win(x);
  return v * (v + x);
}

double v_draw(double t, double d) {
  if (t < 0) return -v_draw(-t, d);
  if (d == 0.0) return -t;
  const double upper = d - t;   // <= d
  const double lower = -d - t;  // < upper
  // Phi(upper) - Phi(lower) written with erfc to keep precision for large t.
  const double z = 0.5 * (std::erfc(-upper / std::sqrt(2.0)) - std::erfc(-lower / std::sqrt(2.0)));
  if (upper < kTailCutoff || z <= 0.0) {
    const double u = t - d;
    return -u - 1.0 / u;
  }
  return (normal_pdf(lower) - normal_pdf(upper)) / z;
}

double w_draw(double t, double d) {
  t = std::fabs(t);
  if (d == 0.0) return 1.0;
  const double upper = d - t;
  const double lower = -d - t;
  const double z = 0.5 * (std::erfc(-upper / std::sqrt(2.0)) - std::erfc(-lower / std::sqrt(2.0)));
  if (upper < kTailCutoff || z <= 0.0) {
    const double u = t - d;
    return 1.0 - 1.0 / (u * u);
  }
  const double v = (normal_pdf(lower) - normal_pdf(upper)) / z;
  return v * v + (upper * normal_pdf(upper) + (d + t) * normal_pdf(d + t)) / z;
}

std::pair<Rating, Rating> update_win(Rating winner, Rating loser, const TrueSkillParams& params) {
  const double tau2 = params.tau * params.tau;
  const double var_w = winner.sigma * winner.sigma + tau2;
  const double var_l = loser.sigma * loser.sigma + tau2;
  const double c2 = var_w + var_l + 2.0 * params.beta * params.beta;
  const double c = std::sqrt(c2);
  const double t = (winner.mu - loser.mu) / c;
  const double d = draw_margin(params) / c;
  const double v = v_win(t - d);
  const double w = w_win(t - d);
  Rating nw{winner.mu + var_w / c * v, std::sqrt(var_w * (1.0 - var_w / c2 * w))};
  Rating nl{loser.mu - var_l / c * v, std::sqrt(var_l * (1.0 - var_l / c2 * w))};
  return {nw, nl};
}

std::pair<Rating, Rating> update_draw(Rating a, Rating b, const TrueSkillParams& params) {
  const double tau2 = params.tau * params.tau;
  const double var_a = a.sigma * a.sigma + tau2;
  const double var_b = b.sigma * b.sigma + tau2;
  const double c2 = var_a + var_b + 2.0 * params.beta * params.beta;
  const double c = std::sqrt(c2);
  const double t = (a.mu - b.mu) / c;
  const double d = draw_margin(params) / c;
  const double v = v_draw(t, d);
  const double w = w_draw(t, d);
  Rating na{a.mu + var_a / c * v, std::sqrt(var_a * (1.0 - var_a / c2 * w))};
  Rating nb{b.mu - var_b / c * v, std::sqrt(var_b * (1.0 - var_b / c2 * w))};
  return {na, nb};
}

namespace {

std::vector<std::string> collect_ids(std::span<const JudgmentRecord> judgments,
                                     std::span<const std::string> sentence_ids) {
  std::set<std::string> ids;
  if (!sentence_ids.empty()) {
    ids.insert(sentence_ids.begin(), sentence_ids.end());
    for (const auto& j : judgments) {
      for (const auto* s : {&j.sent_a, &j.sent_b}) {
        if (!ids.count(*s)) {
          throw ValidationError("judgment on pair '" + j.pair_id +
                                "' references unknown sentence '" + *s + "'");
        }
      }
    }
  } else {
    for (const auto& j : judgments) {
      ids.insert(j.sent_a);
      ids.insert(j.sent_b);
    }
  }
  return {ids.begin(), ids.end()};
}

struct IndexedRun {
  std::vector<Rating> ratings;
  std::vector<int> rank;  // 1-based, per sentence index
};

IndexedRun run_indexed(std::span<const JudgmentRecord> judgments,
                       const std::vector<std::pair<size_t, size_t>>& players, size_t n_sentences,
                       const TrueSkillParams& params, uint64_t seed) {
  IndexedRun out;
  out.ratings.assign(n_sentences, params.prior());
  std::vector<size_t> order(judgments.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<size_t>(order));
  for (size_t k : order) {
    const auto& j = judgments[k];
    auto [a, b] = players[k];
    switch (j.choice) {
      case Choice::kA: {
        auto [w, l] = update_win(out.ratings[a], out.ratings[b], params);
        out.ratings[a] = w;
        out.ratings[b] = l;
        break;
      }
      case Choice::kB: {
        auto [w, l] = update_win(out.ratings[b], out.ratings[a], params);
        out.ratings[b] = w;
        out.ratings[a] = l;
        break;
      }
      case Choice::kDraw: {
        auto [na, nb] = update_draw(out.ratings[a], out.ratings[b], params);
        out.ratings[a] = na;
        out.ratings[b] = nb;
        break;
      }
    }
  }
  auto key = [&](size_t i) {
    const auto& r = out.ratings[i];
    return params.rank_by == RankBy::kMu ? r.mu : r.mu - 3.0 * r.sigma;
  };
  std::vector<size_t> idx(n_sentences);
  for (size_t i = 0; i < n_sentences; ++i) idx[i] = i;
  // Ids are sorted, so index order breaks ties by id.
  std::stable_sort(idx.begin(), idx.end(), [&](size_t x, size_t y) { return key(x) > key(y); });
  out.rank.assign(n_sentences, 0);
  for (size_t r = 0; r < idx.size(); ++r) out.rank[idx[r]] = static_cast<int>(r) + 1;
  return out;
}

std::vector<std::pair<size_t, size_t>> resolve_players(std::span<const JudgmentRecord> judgments,
                                                       const std::vector<std::string>& ids) {
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
  std::vector<std::pair<size_t, size_t>> players;
  players.reserve(judgments.size());
  for (const auto& j : judgments) {
    if (j.sent_a == j.sent_b) {
      throw ValidationError("judgment on pair '" + j.pair_id + "' compares a sentence to itself");
    }
    players.emplace_back(index.at(j.sent_a), index.at(j.sent_b));
  }
  return players;
}

}  // namespace

RunResult run_ranking(std::span<const JudgmentRecord> judgments, const TrueSkillParams& params,
                      uint64_t seed, std::span<const std::string> sentence_ids) {
  params.validate();
  const auto ids = collect_ids(judgments, sentence_ids);
  const auto players = resolve_players(judgments, ids);
  const auto run = run_indexed(judgments, players, ids.size(), params, seed);
  std::vector<std::string> order(ids.size());
  std::map<std::string, double> scores;
  RunResult out;
  for (size_t i = 0; i < ids.size(); ++i) {
    order[run.rank[i] - 1] = ids[i];
    scores[ids[i]] = run.ratings[i].mu;
    out.ratings[ids[i]] = run.ratings[i];
  }
  out.ranking = Ranking(std::move(order), std::move(scores));
  return out;
}

AggregateRanking aggregate_runs(std::span<const JudgmentRecord> judgments,
                                const TrueSkillParams& params, uint64_t base_seed,
                                std::span<const std::string> sentence_ids) {
  params.validate();
  const auto ids = collect_ids(judgments, sentence_ids);
  const auto players = resolve_players(judgments, ids);
  std::vector<IndexedRun> runs(params.runs);
  parallel_for(runs.size(), params.workers, [&](size_t r) {
    runs[r] = run_indexed(judgments, players, ids.size(), params, derive_seed(base_seed, r));
  });
  const size_t n = ids.size();
  std::vector<RankedSentence> rows(n);
  for (size_t i = 0; i < n; ++i) {
    double rank_sum = 0.0;
    double mu_sum = 0.0;
    double sigma_sum = 0.0;
    for (const auto& run : runs) {
      rank_sum += run.rank[i];
      mu_sum += run.ratings[i].mu;
      sigma_sum += run.ratings[i].sigma;
    }
    const double k = static_cast<double>(runs.size());
    rows[i] = {0, ids[i], rank_sum / k, mu_sum / k, sigma_sum / k};
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const RankedSentence& a, const RankedSentence& b) {
    if (params.aggregation == RunAggregation::kMeanRank && a.mean_rank != b.mean_rank) {
      return a.mean_rank < b.mean_rank;
    }
    if (a.mean_mu != b.mean_mu) return a.mean_mu > b.mean_mu;
    return a.sentence_id < b.sentence_id;
  });
  for (size_t r = 0; r < n; ++r) rows[r].rank = static_cast<int>(r) + 1;
  return {std::move(rows)};
}

}  // namespace readrank
