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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <set>

#include "readrank/error.h"
#include "readrank/random.h"
#include "testing/fixtures.h"
#include "testing/oracles.h"

namespace readrank {
namespace {

using ::readrank::testing::judgment;

constexpr double kOracleTol = 1e-9;

void expect_rating_near(const Rating& got, const Rating& want, double tol) {
  EXPECT_NEAR(got.mu, want.mu, tol);
  EXPECT_NEAR(got.sigma, want.sigma, tol);
}

TrueSkillParams random_params(Rng& rng) {
  TrueSkillParams p;
  p.beta = rng.uniform(0.5, 8.0);
  p.tau = rng.uniform(0.0, 0.5);
  p.p_draw = rng.uniform(0.0, 0.3);
  return p;
}

Rating random_rating(Rng& rng) { return {rng.uniform(0.0, 50.0), rng.uniform(0.5, 10.0)}; }

TEST(DrawMarginTest, MatchesReferenceValue) {
  EXPECT_NEAR(draw_margin(TrueSkillParams{}), 0.14771995855565015402, 1e-14);
  TrueSkillParams none;
  none.p_draw = 0.0;
  EXPECT_EQ(draw_margin(none), 0.0);
}

TEST(UpdateTest, WinMatchesQuadratureOnRandomGrid) {
  Rng rng(20240611);
  for (int i = 0; i < 100; ++i) {
    const auto params = random_params(rng);
    const Rating w = random_rating(rng);
    const Rating l = random_rating(rng);
    const auto [gw, gl] = update_win(w, l, params);
    const auto [ow, ol] = testing::quadrature_win(w, l, params);
    SCOPED_TRACE(i);
    expect_rating_near(gw, ow, kOracleTol);
    expect_rating_near(gl, ol, kOracleTol);
  }
}

TEST(UpdateTest, DrawMatchesQuadratureOnRandomGrid) {
  Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    auto params = random_params(rng);
    params.p_draw = rng.uniform(0.01, 0.3);
    const Rating a = random_rating(rng);
    const Rating b = random_rating(rng);
    const auto [ga, gb] = update_draw(a, b, params);
    const auto [oa, ob] = testing::quadrature_draw(a, b, params);
    SCOPED_TRACE(i);
    expect_rating_near(ga, oa, kOracleTol);
    expect_rating_near(gb, ob, kOracleTol);
  }
}

// Reference values computed with 30-digit arbitrary-precision arithmetic.
TEST(UpdateTest, MatchesHighPrecisionReferences) {
  const TrueSkillParams p;
  struct Case {
    bool draw;
    Rating a, b, want_a, want_b;
  };
  const Case cases[] = {
      {false,
       {25, 25.0 / 3},
       {25, 25.0 / 3},
       {29.243162574847163552, 7.1901102346336164782},
       {20.756837425152836448, 7.1901102346336164782}},
      {true,
       {25, 25.0 / 3},
       {25, 25.0 / 3},
       {25.0, 6.4553420970780737771},
       {25.0, 6.4553420970780737771}},
      {true,
       {30, 2},
       {20, 2},
       {29.06255799718821078, 1.905601383224409567},
       {20.93744200281178922, 1.905601383224409567}},
      {false,
       {30, 2},
       {20, 2},
       {30.084085004650574396, 1.9804546253163862002},
       {19.915914995349425604, 1.9804546253163862002}},
      {false,
       {20, 2},
       {30, 2},
       {21.215609680765503824, 1.9198519669538935554},
       {28.784390319234496176, 1.9198519669538935554}},
  };
  for (const auto& c : cases) {
    const auto [ga, gb] = c.draw ? update_draw(c.a, c.b, p) : update_win(c.a, c.b, p);
    expect_rating_near(ga, c.want_a, 1e-11);
    expect_rating_near(gb, c.want_b, 1e-11);
  }
}

TEST(UpdateTest, SymmetricWinConservesMeanSum) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto params = random_params(rng);
    const double sigma = rng.uniform(0.5, 10.0);
    const Rating a{rng.uniform(0, 50), sigma};
    const Rating b{rng.uniform(0, 50), sigma};
    const auto [w, l] = update_win(a, b, params);
    EXPECT_NEAR(w.mu + l.mu, a.mu + b.mu, 1e-12);
    EXPECT_NEAR(w.mu - a.mu, b.mu - l.mu, 1e-12);
    EXPECT_NEAR(w.sigma, l.sigma, 1e-12);
  }
}

TEST(UpdateTest, WinnerRisesLoserFallsUncertaintyShrinks) {
  Rng rng(6);
  for (int i = 0; i < 200; ++i) {
    auto params = random_params(rng);
    params.tau = 0.0;
    const Rating a = random_rating(rng);
    const Rating b = random_rating(rng);
    const auto [w, l] = update_win(a, b, params);
    EXPECT_GT(w.mu, a.mu);
    EXPECT_LT(l.mu, b.mu);
    EXPECT_LT(w.sigma, a.sigma);
    EXPECT_LT(l.sigma, b.sigma);
  }
}

TEST(UpdateTest, DrawPullsMeansTogether) {
  const TrueSkillParams p;
  const auto [a, b] = update_draw({35, 3}, {15, 3}, p);
  EXPECT_LT(a.mu, 35);
  EXPECT_GT(b.mu, 15);
  EXPECT_GT(a.mu, b.mu);
}

TEST(UpdateTest, ExtremeUpsetStaysFinite) {
  TrueSkillParams p;
  p.tau = 0.0;
  const auto [w, l] = update_win({0, 1}, {1000, 1}, p);
  EXPECT_TRUE(std::isfinite(w.mu) && std::isfinite(w.sigma));
  EXPECT_TRUE(std::isfinite(l.mu) && std::isfinite(l.sigma));
  EXPECT_GT(w.sigma, 0);
  const auto [da, db] = update_draw({0, 1}, {1000, 1}, TrueSkillParams{});
  EXPECT_TRUE(std::isfinite(da.mu) && std::isfinite(db.mu));
  EXPECT_GT(da.sigma, 0);
}

TEST(CorrectionTest, LimitsAndBounds) {
  EXPECT_NEAR(v_win(-50), 50 + 1.0 / 50 - 2.0 / (50.0 * 50 * 50), 1e-5);
  EXPECT_NEAR(w_win(-50), 1, 1e-3);
  EXPECT_NEAR(v_win(50), 0, 1e-12);
  for (double x = -10; x <= 10; x += 0.25) {
    EXPECT_GT(w_win(x), 0);
    EXPECT_LT(w_win(x), 1);
    EXPECT_GT(w_draw(x, 0.5), 0);
    EXPECT_LT(w_draw(x, 0.5), 1);
  }
  EXPECT_EQ(v_draw(0, 0.5), 0);
  EXPECT_NEAR(v_draw(1.0, 0.5), -v_draw(-1.0, 0.5), 1e-15);
}

TEST(ParamsTest, FromPriorAndValidation) {
  const auto p = TrueSkillParams::from_prior(10, 4);
  EXPECT_EQ(p.mu0, 10);
  EXPECT_EQ(p.beta, 2);
  EXPECT_EQ(p.tau, 0.04);
  TrueSkillParams bad;
  bad.sigma0 = 0;
  EXPECT_THROW(bad.validate(), PreconditionError);
  bad = {};
  bad.p_draw = 1.0;
  EXPECT_THROW(bad.validate(), PreconditionError);
  bad = {};
  bad.runs = 0;
  EXPECT_THROW(bad.validate(), PreconditionError);
}

std::vector<JudgmentRecord> chain_judgments(int n, int repeats) {
  // s0 is hardest: s_i beats s_j for i < j.
  std::vector<JudgmentRecord> out;
  for (int r = 0; r < repeats; ++r) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto a = "s" + std::to_string(i);
        const auto b = "s" + std::to_string(j);
        out.push_back(judgment(a + b, a, b, "w" + std::to_string(r), Choice::kA));
      }
    }
  }
  return out;
}

TEST(RunTest, RecoversConsistentOrder) {
  const auto js = chain_judgments(6, 3);
  TrueSkillParams p;
  p.runs = 10;
  const auto agg = aggregate_runs(js, p, 1);
  ASSERT_EQ(agg.rows.size(), 6u);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(agg.rows[i].rank, i + 1);
    EXPECT_EQ(agg.rows[i].sentence_id, "s" + std::to_string(i));
  }
}

TEST(RunTest, DeterministicAndWorkerIndependent) {
  const auto js = chain_judgments(8, 2);
  TrueSkillParams p;
  p.runs = 12;
  p.workers = 1;
  const auto one = aggregate_runs(js, p, 42);
  p.workers = 4;
  const auto four = aggregate_runs(js, p, 42);
  ASSERT_EQ(one.rows.size(), four.rows.size());
  for (size_t i = 0; i < one.rows.size(); ++i) {
    EXPECT_EQ(one.rows[i].sentence_id, four.rows[i].sentence_id);
    EXPECT_EQ(one.rows[i].mean_mu, four.rows[i].mean_mu);
    EXPECT_EQ(one.rows[i].mean_rank, four.rows[i].mean_rank);
  }
  const auto r1 = run_ranking(js, p, 3);
  const auto r2 = run_ranking(js, p, 3);
  EXPECT_EQ(r1.ranking.order(), r2.ranking.order());
}

TEST(RunTest, ExplicitIdsIncludeUnjudgedAtPrior) {
  const auto js = chain_judgments(3, 1);
  const std::vector<std::string> ids{"s0", "s1", "s2", "lonely"};
  const auto run = run_ranking(js, TrueSkillParams{}, 0, ids);
  ASSERT_EQ(run.ranking.size(), 4u);
  EXPECT_EQ(run.ratings.at("lonely").mu, 25.0);
  EXPECT_EQ(run.ratings.at("lonely").sigma, 25.0 / 3);
  const std::vector<std::string> partial{"s0", "s1"};
  EXPECT_THROW(run_ranking(js, TrueSkillParams{}, 0, partial), ValidationError);
}

TEST(RunTest, GoldJudgmentsCountAsComparisons) {
  auto js = chain_judgments(3, 1);
  auto as_gold = js;
  for (auto& j : as_gold) {
    j.is_gold = true;
    j.gold_answer = j.choice;
  }
  const auto plain = run_ranking(js, TrueSkillParams{}, 9);
  const auto gold = run_ranking(as_gold, TrueSkillParams{}, 9);
  EXPECT_EQ(plain.ranking.order(), gold.ranking.order());
  for (const auto& [id, r] : plain.ratings) EXPECT_EQ(r.mu, gold.ratings.at(id).mu);
}

TEST(RunTest, ConservativeRankingUsesLowerBound) {
  // "x" won once (high sigma); "y" won many times against weaker field.
  std::vector<JudgmentRecord> js{judgment("p0", "x", "z0", "w", Choice::kA)};
  for (int i = 0; i < 12; ++i) {
    const auto z = "z" + std::to_string(i % 4);
    js.push_back(judgment("q" + std::to_string(i), "y", z, "w", Choice::kA));
  }
  TrueSkillParams p;
  p.runs = 1;
  p.rank_by = RankBy::kConservative;
  const auto run = run_ranking(js, p, 0);
  const auto& rx = run.ratings.at("x");
  const auto& ry = run.ratings.at("y");
  const bool y_first = ry.mu - 3 * ry.sigma > rx.mu - 3 * rx.sigma;
  EXPECT_EQ(run.ranking.rank_index("y") < run.ranking.rank_index("x"), y_first);
}

TEST(RunTest, FiftyRunsAtPaperScaleAreFast) {
  SimConfig cfg;
  cfg.seed = 1;
  const auto data = simulate_dataset(cfg);
  TrueSkillParams p;
  p.runs = 50;
  const auto t0 = std::chrono::steady_clock::now();
  const auto agg = aggregate_runs(data.sentence_only, p, 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(agg.rows.size(), 120u);
  EXPECT_LT(secs, 30.0);
}

}  // namespace
}  // namespace readrank
