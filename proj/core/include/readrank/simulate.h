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

#ifndef READRANK_SIMULATE_H_
#define READRANK_SIMULATE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "readrank/analysis.h"
#include "readrank/corpus.h"
#include "readrank/ranking.h"

namespace readrank {

enum class ChoiceModel { kProbit, kLogit };

struct SimConfig {
  int n_sentences = 120;
  int n_bins = kNumGradeBins;
  int blocks = 20;             // pair-generation blocks
  int judgments_per_pair = 7;  // per presentation order
  double noise_sd = 0.62;      // per-decision difficulty noise
  double p_draw = 0.02;
  int n_workers = 60;
  double spammer_fraction = 0.05;
  int n_gold = 40;
  int gold_per_page = 1;  // one gold question per page of three
  ChoiceModel choice_model = ChoiceModel::kProbit;
  TaskMode task_mode = TaskMode::kSentenceOnly;
  // Difficulty is (bin - 1) + jitter * U[0, 1).
  double difficulty_jitter = 1.0;
  // Independent noise of the lexical, syntactic and surface channels that
  // carry difficulty into the generated text.
  double lexical_noise = 0.45;
  double syntax_noise = 0.3;
  double surface_noise = 0.45;
  // In-passage difficulty shifts by context_effect * (syntax latent of the
  // target - mean syntax latent of its passage).
  double context_effect = 0.5;
  int lm_corpus_sentences = 4000;
  int treebank_sentences = 2000;
  uint64_t seed = 0;

  void validate() const;
};

struct SimCorpus {
  std::vector<SentenceRecord> sentences;
  std::map<std::string, double> difficulty;          // sentence-only truth
  std::map<std::string, double> passage_difficulty;  // in-passage truth
  std::map<std::string, double> syntax_latent;
  Ranking truth;  // by `difficulty`, most difficult first
  Lexicon lexicon;
  WordSet dale_chall;
  WordSet stopwords;
  std::vector<std::string> lm_corpus;  // one sentence per line
  std::vector<std::string> treebank;   // one bracketed tree per line
  std::vector<GradeRange> expert_ranges;
};

// Sentences with planted difficulty, passages with coreference chains,
// pseudo-word lexicon and word lists, background LM text and a treebank.
SimCorpus synth_sentences(const SimConfig& config);

// Non-gold decisions for every pair (judgments_per_pair per presentation
// order) plus gold questions. `scores` is the difficulty each honest worker
// perceives. Deterministic per (scores, pairs, config).
std::vector<JudgmentRecord> simulate_judgments(const std::map<std::string, double>& scores,
                                               std::span<const SentencePair> pairs,
                                               const SimConfig& config);

struct SimDataset {
  SimCorpus corpus;
  std::vector<SentencePair> pairs;
  std::vector<JudgmentRecord> sentence_only;
  std::vector<JudgmentRecord> in_passage;  // independent crowd, passage truth
  std::vector<std::string> spammers_sentence_only;
  std::vector<std::string> spammers_in_passage;
};

// synth_sentences, generate_pairs and simulate_judgments for both tasks,
// each on its own seed stream.
SimDataset simulate_dataset(const SimConfig& config);

// Probability that an honest worker picks A (given no draw).
double choice_probability(double d_a, double d_b, const SimConfig& config);

// Share of non-gold judgments that match their pair's modal choice (draws
// count as a choice).
double majority_agreement(std::span<const JudgmentRecord> judgments);

// Ids of workers generated as spammers, derived from the config alone.
std::vector<std::string> spammer_ids(const SimConfig& config);

}  // namespace readrank

#endif  // READRANK_SIMULATE_H_
