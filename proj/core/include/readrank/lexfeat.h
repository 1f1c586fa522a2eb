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

#ifndef READRANK_LEXFEAT_H_
#define READRANK_LEXFEAT_H_

#include <array>
#include <span>
#include <string_view>

#include "readrank/corpus.h"
#include "readrank/features.h"

namespace readrank {

// Lexical features, all computed over word tokens (punctuation excluded) and
// exact lowercase lexicon lookups. AoA is aggregated per token, not per type.
struct AoaStats {
  double avg = 0.0;
  double max = 0.0;
  double std = 0.0;  // population standard deviation
  double pct_not_in_aoa = 1.0;
};

struct SyllableStats {
  double avg = 0.0;
  double max = 0.0;
};

struct SurfaceStats {
  int n_words = 0;
  int n_chars = 0;  // code points over all surface tokens, punctuation included
};

// Zero lexicon hits give (0, 0, 0, 1).
AoaStats aoa_stats(std::span<const Token> tokens, const Lexicon& lexicon);
SyllableStats syllable_stats(std::span<const Token> tokens, const Lexicon& lexicon);
double dale_chall_pct(std::span<const Token> tokens, const WordSet& dale_chall);
double content_word_pct(std::span<const Token> tokens, const WordSet& stopwords);
SurfaceStats surface_stats(std::span<const Token> tokens);

inline constexpr std::array<std::string_view, 10> kLexicalFeatureNames = {
    "aoa_avg",  "aoa_max",        "aoa_std",          "pct_not_in_aoa", "syll_avg",
    "syll_max", "dale_chall_pct", "content_word_pct", "n_words",        "n_chars",
};

FeatureVector lexical_vector(std::span<const Token> tokens, const Lexicon& lexicon,
                             const WordSet& dale_chall, const WordSet& stopwords);

}  // namespace readrank

#endif  // READRANK_LEXFEAT_H_
