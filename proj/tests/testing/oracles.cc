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

#include "testing/oracles.h"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cctype>
#include <cmath>
#include <functional>

namespace readrank::testing {
namespace {

double integrate(const std::function<double(double)>& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12);
}

// Mean and variance of N(m, c^2) restricted to [lo, hi] in D units. The
// density is scaled to 1 at r, the point of [a, b] closest to 0, and moments
// are taken about r.
std::pair<double, double> truncated_moments(double m, double c, double lo, double hi) {
  const double a = (lo - m) / c;
  const double b = std::isinf(hi) ? std::max(a, 0.0) + 40.0 : (hi - m) / c;
  const double r = std::clamp(0.0, a, b);
  const auto scaled = [r](double z) { return std::exp(-0.5 * (z - r) * (z + r)); };
  const double z0 = integrate(scaled, a, b);
  const double z1 = integrate([&](double z) { return (z - r) * scaled(z); }, a, b) / z0;
  const double z2 = integrate([&](double z) { return (z - r) * (z - r) * scaled(z); }, a, b) / z0;
  return {m + c * (r + z1), c * c * (z2 - z1 * z1)};
}

double draw_margin_reference(const TrueSkillParams& p) {
  // Phi^-1((p + 1) / 2) by bisection on erfc.
  const double target = (p.p_draw + 1.0) / 2.0;
  double lo = 0.0;
  double hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) * std::sqrt(2.0) * p.beta;
}

std::pair<Rating, Rating> project(Rating first, Rating second, const TrueSkillParams& p,
                                  bool draw) {
  const double v1 = first.sigma * first.sigma + p.tau * p.tau;
  const double v2 = second.sigma * second.sigma + p.tau * p.tau;
  const double c2 = v1 + v2 + 2.0 * p.beta * p.beta;
  const double c = std::sqrt(c2);
  const double m = first.mu - second.mu;
  const double eps = draw_margin_reference(p);
  const auto [mean, var] =
      draw ? truncated_moments(m, c, -eps, eps) : truncated_moments(m, c, eps, INFINITY);
  const double shift = mean - m;
  const double shrink = (c2 - var) / (c2 * c2);
  return {Rating{first.mu + v1 / c2 * shift, std::sqrt(v1 - v1 * v1 * shrink)},
          Rating{second.mu - v2 / c2 * shift, std::sqrt(v2 - v2 * v2 * shrink)}};
}

bool is_punctuation_only(const std::string& s) {
  return std::none_of(s.begin(), s.end(),
                      [](unsigned char c) { return std::isalnum(c) || c >= 0x80; });
}

void collect_productions(const ParseTree& node, std::map<std::string, int>& out) {
  if (node.is_leaf() || node.is_preterminal()) return;
  std::string s = "(" + node.label;
  for (const auto& c : node.children) s += " " + c.label;
  s += ")";
  ++out[s];
  for (const auto& c : node.children) collect_productions(c, out);
}

void collect_tags(const ParseTree& node, std::map<std::string, int>& out) {
  if (node.is_preterminal()) {
    ++out[node.label];
    return;
  }
  for (const auto& c : node.children) collect_tags(c, out);
}

int depth_to_preterminal(const ParseTree& node) {
  if (node.is_preterminal()) return 0;
  int best = 0;
  for (const auto& c : node.children) best = std::max(best, 1 + depth_to_preterminal(c));
  return best;
}

}  // namespace

std::pair<Rating, Rating> quadrature_win(Rating winner, Rating loser,
                                         const TrueSkillParams& params) {
  return project(winner, loser, params, false);
}

std::pair<Rating, Rating> quadrature_draw(Rating a, Rating b, const TrueSkillParams& params) {
  return project(a, b, params, true);
}

std::vector<double> brute_force_ranks(std::span<const double> x) {
  std::vector<double> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    int less = 0;
    int equal = 0;
    for (size_t j = 0; j < x.size(); ++j) {
      if (x[j] < x[i]) ++less;
      if (x[j] == x[i]) ++equal;
    }
    r[i] = 1.0 + less + (equal - 1) / 2.0;
  }
  return r;
}

double brute_force_pearson(std::span<const double> x, std::span<const double> y) {
  long double mx = 0;
  long double my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0;
  long double sxx = 0;
  long double syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

LexicalReference brute_force_lexical(const std::vector<Token>& tokens, const Lexicon& lexicon,
                                     const WordSet& dale_chall, const WordSet& stopwords) {
  LexicalReference ref;
  std::vector<double> aoa;
  std::vector<double> syll;
  int words = 0;
  int dc = 0;
  int content = 0;
  for (const auto& t : tokens) {
    ref.n_chars += static_cast<double>(std::count_if(
        t.surface.begin(), t.surface.end(), [](unsigned char c) { return (c & 0xC0) != 0x80; }));
    if (is_punctuation_only(t.surface)) continue;
    ++words;
    if (const auto* e = lexicon.find(t.lower)) {
      aoa.push_back(e->aoa);
      syll.push_back(e->syllables);
    }
    if (dale_chall.words.count(t.lower)) ++dc;
    if (!stopwords.words.count(t.lower)) ++content;
  }
  ref.n_words = words;
  if (words > 0) {
    ref.pct_not_in_aoa = 1.0 - static_cast<double>(aoa.size()) / words;
    ref.dale_chall_pct = static_cast<double>(dc) / words;
    ref.content_word_pct = static_cast<double>(content) / words;
  }
  if (!aoa.empty()) {
    long double sum = 0;
    for (double a : aoa) sum += a;
    const long double mean = sum / aoa.size();
    long double ss = 0;
    for (double a : aoa) ss += (a - mean) * (a - mean);
    ref.aoa_avg = static_cast<double>(mean);
    ref.aoa_max = *std::max_element(aoa.begin(), aoa.end());
    ref.aoa_std = static_cast<double>(std::sqrt(ss / aoa.size()));
    long double ssum = 0;
    for (double s : syll) ssum += s;
    ref.syll_avg = static_cast<double>(ssum / syll.size());
    ref.syll_max = *std::max_element(syll.begin(), syll.end());
  }
  return ref;
}

std::map<std::string, int> production_multiset(const ParseTree& tree) {
  std::map<std::string, int> out;
  collect_productions(tree, out);
  return out;
}

std::map<std::string, int> tag_counts(const ParseTree& tree) {
  std::map<std::string, int> out;
  collect_tags(tree, out);
  return out;
}

std::pair<int, int> brute_force_shape(const ParseTree& tree) {
  int n = 0;
  for (const auto& [tag, count] : tag_counts(tree)) n += count;
  return {depth_to_preterminal(tree), n};
}

}  // namespace readrank::testing
