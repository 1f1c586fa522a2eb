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

#include "readrank/lexfeat.h"

#include <algorithm>
#include <cmath>

namespace readrank {

namespace {

int code_points(std::string_view s) {
  int n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace

AoaStats aoa_stats(std::span<const Token> tokens, const Lexicon& lexicon) {
  int words = 0;
  double sum = 0.0;
  double max = 0.0;
  std::vector<double> hits;
  for (const auto& t : tokens) {
    if (!is_word(t)) continue;
    ++words;
    if (const auto* e = lexicon.find(t.lower)) {
      hits.push_back(e->aoa);
      sum += e->aoa;
      max = std::max(max, e->aoa);
    }
  }
  AoaStats out;
  if (hits.empty()) return out;
  const double n = static_cast<double>(hits.size());
  out.avg = sum / n;
  out.max = max;
  double ss = 0.0;
  for (double h : hits) ss += (h - out.avg) * (h - out.avg);
  out.std = std::sqrt(ss / n);
  out.pct_not_in_aoa = static_cast<double>(words - static_cast<int>(hits.size())) / words;
  return out;
}

SyllableStats syllable_stats(std::span<const Token> tokens, const Lexicon& lexicon) {
  int hits = 0;
  double sum = 0.0;
  double max = 0.0;
  for (const auto& t : tokens) {
    if (!is_word(t)) continue;
    if (const auto* e = lexicon.find(t.lower)) {
      ++hits;
      sum += e->syllables;
      max = std::max<double>(max, e->syllables);
    }
  }
  if (hits == 0) return {};
  return {sum / hits, max};
}

double dale_chall_pct(std::span<const Token> tokens, const WordSet& dale_chall) {
  int words = 0;
  int listed = 0;
  for (const auto& t : tokens) {
    if (!is_word(t)) continue;
    ++words;
    listed += dale_chall.contains(t.lower);
  }
  return words == 0 ? 0.0 : static_cast<double>(listed) / words;
}

double content_word_pct(std::span<const Token> tokens, const WordSet& stopwords) {
  int words = 0;
  int content = 0;
  for (const auto& t : tokens) {
    if (!is_word(t)) continue;
    ++words;
    content += !stopwords.contains(t.lower);
  }
  return words == 0 ? 0.0 : static_cast<double>(content) / words;
}

SurfaceStats surface_stats(std::span<const Token> tokens) {
  SurfaceStats out;
  for (const auto& t : tokens) {
    out.n_words += is_word(t);
    out.n_chars += code_points(t.surface);
  }
  return out;
}

FeatureVector lexical_vector(std::span<const Token> tokens, const Lexicon& lexicon,
                             const WordSet& dale_chall, const WordSet& stopwords) {
  const auto aoa = aoa_stats(tokens, lexicon);
  const auto syl = syllable_stats(tokens, lexicon);
  const auto surf = surface_stats(tokens);
  FeatureVector v;
  v.add("aoa_avg", FeatureGroup::kAoA, aoa.avg);
  v.add("aoa_max", FeatureGroup::kAoA, aoa.max);
  v.add("aoa_std", FeatureGroup::kAoA, aoa.std);
  v.add("pct_not_in_aoa", FeatureGroup::kAoA, aoa.pct_not_in_aoa);
  v.add("syll_avg", FeatureGroup::kSyllables, syl.avg);
  v.add("syll_max", FeatureGroup::kSyllables, syl.max);
  v.add("dale_chall_pct", FeatureGroup::kDaleChall, dale_chall_pct(tokens, dale_chall));
  v.add("content_word_pct", FeatureGroup::kContentWord, content_word_pct(tokens, stopwords));
  v.add("n_words", FeatureGroup::kWordLen, surf.n_words);
  v.add("n_chars", FeatureGroup::kWordLen, surf.n_chars);
  return v;
}

}  // namespace readrank
