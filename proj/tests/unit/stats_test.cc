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

#include "readrank/stats.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "readrank/error.h"
#include "readrank/random.h"
#include "testing/oracles.h"

namespace readrank {
namespace {

TEST(NormalTest, KnownValues) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-15);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145705, 1e-15);
  EXPECT_NEAR(normal_pdf(0.0), 1.0 / std::sqrt(2.0 * std::numbers::pi), 1e-16);
  EXPECT_GT(normal_cdf(-38.0), 0.0);
}

TEST(NormalTest, QuantileInvertsCdf) {
  for (double p = 1e-10; p < 1.0; p = p < 0.01 ? p * 10 : p + 0.0625) {
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-13 + 1e-12 * p) << p;
  }
  EXPECT_THROW(normal_quantile(0.0), PreconditionError);
  EXPECT_THROW(normal_quantile(1.0), PreconditionError);
}

TEST(StudentTTest, ClosedFormsForOneAndTwoDegrees) {
  for (double t : {0.0, 0.3, 1.0, 2.5, 12.0}) {
    const double cauchy = 1.0 - 2.0 / std::numbers::pi * std::atan(t);
    EXPECT_NEAR(student_t_two_sided_p(t, 1), cauchy, 1e-13) << t;
    EXPECT_NEAR(student_t_two_sided_p(-t, 1), cauchy, 1e-13) << t;
    const double two = 1.0 - t / std::sqrt(2.0 + t * t);
    EXPECT_NEAR(student_t_two_sided_p(t, 2), two, 1e-13) << t;
  }
}

TEST(StudentTTest, LargeDegreesApproachNormal) {
  EXPECT_NEAR(student_t_two_sided_p(1.96, 1e6), 2.0 * normal_cdf(-1.96), 1e-5);
}

TEST(MomentsTest, HandCases) {
  const std::vector<double> x{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_EQ(mean(x), 5.0);
  EXPECT_EQ(pop_stddev(x), 2.0);
  EXPECT_NEAR(sample_stddev(x), std::sqrt(32.0 / 7.0), 1e-15);
}

TEST(RanksTest, AveragesTies) {
  const std::vector<double> x{10, 20, 10, 30, 20, 20};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{1.5, 4, 1.5, 6, 4, 4}));
}

TEST(RanksTest, MatchesBruteForceOnRandomSmallInputs) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const size_t n = 1 + rng.uniform_int(6);
    std::vector<double> x(n);
    for (auto& v : x) v = static_cast<double>(rng.uniform_int(4));
    EXPECT_EQ(average_ranks(x), testing::brute_force_ranks(x));
  }
}

TEST(PairedTTest, HandCase) {
  const std::vector<double> a{2, 4, 6};
  const std::vector<double> b{1, 2, 3};
  const auto r = paired_t_test(a, b);
  EXPECT_NEAR(r.t, 2.0 * std::sqrt(3.0), 1e-12);
  EXPECT_EQ(r.df, 2);
  EXPECT_NEAR(r.p, 1.0 - std::sqrt(12.0 / 14.0), 1e-12);
  EXPECT_FALSE(r.degenerate_variance);
}

TEST(PairedTTest, DegenerateAndInvalidInputs) {
  const std::vector<double> a{2, 3, 4};
  const std::vector<double> b{1, 2, 3};
  const auto shifted = paired_t_test(a, b);
  EXPECT_TRUE(shifted.degenerate_variance);
  EXPECT_EQ(shifted.p, 0.0);
  EXPECT_TRUE(std::isinf(shifted.t) && shifted.t > 0);
  const auto same = paired_t_test(a, a);
  EXPECT_EQ(same.p, 1.0);
  EXPECT_EQ(same.t, 0.0);
  EXPECT_THROW(paired_t_test(std::vector<double>{1}, std::vector<double>{1}), PreconditionError);
  EXPECT_THROW(paired_t_test(a, std::vector<double>{1, 2}), PreconditionError);
}

TEST(PairedTTest, SignFlipsWithArguments) {
  Rng rng(3);
  std::vector<double> a(20), b(20);
  for (size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal(1.0, 1.0);
    b[i] = rng.normal(0.0, 1.0);
  }
  const auto ab = paired_t_test(a, b);
  const auto ba = paired_t_test(b, a);
  EXPECT_NEAR(ab.t, -ba.t, 1e-12);
  EXPECT_NEAR(ab.p, ba.p, 1e-15);
}

}  // namespace
}  // namespace readrank
