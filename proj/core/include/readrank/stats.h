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

#ifndef READRANK_STATS_H_
#define READRANK_STATS_H_

#include <span>
#include <vector>

namespace readrank {

double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);

// Two-sided p-value of a Student t statistic.
double student_t_two_sided_p(double t, double df);

double mean(std::span<const double> x);
// Population (divisor n) standard deviation.
double pop_stddev(std::span<const double> x);
// Sample (divisor n-1) standard deviation.
double sample_stddev(std::span<const double> x);

// 1-based average ranks; ties share the mean of the positions they span.
std::vector<double> average_ranks(std::span<const double> x);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int df = 0;
  // Set when the differences have zero variance but nonzero mean; p is
  // reported as 0 and t as +/-infinity.
  bool degenerate_variance = false;
};

// Paired two-sided t-test on a - b with n-1 degrees of freedom.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace readrank

#endif  // READRANK_STATS_H_
