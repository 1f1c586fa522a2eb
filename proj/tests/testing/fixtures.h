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

#ifndef READRANK_TESTS_TESTING_FIXTURES_H_
#define READRANK_TESTS_TESTING_FIXTURES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "readrank/context.h"
#include "readrank/corpus.h"
#include "readrank/random.h"
#include "readrank/simulate.h"
#include "readrank/synfeat.h"

namespace readrank::testing {

// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

JudgmentRecord judgment(const std::string& pair_id, const std::string& a, const std::string& b,
                        const std::string& worker, Choice choice, Order order = Order::kAB);
JudgmentRecord gold_judgment(const std::string& pair_id, const std::string& a, const std::string& b,
                             const std::string& worker, Choice choice, Choice answer);

// Random tree with labels from small nonterminal and tag inventories.
ParseTree random_tree(Rng& rng, int max_depth);

// Random token sequence over a mixed vocabulary of lexicon words,
// list-only words, unknown words, punctuation and non-ASCII letters.
struct FuzzVocabulary {
  Lexicon lexicon;
  WordSet dale_chall;
  WordSet stopwords;
  std::vector<std::string> words;  // surface forms, some capitalized
};
FuzzVocabulary fuzz_vocabulary();
std::vector<Token> random_tokens(Rng& rng, const FuzzVocabulary& vocab, int max_len);

// A simulated corpus with its language model, PCFG and features.
struct SimulatedFeatures {
  SimDataset data;
  FeatureResources resources;
  FeatureStore sentence_only;  // no ctx features
  FeatureStore with_context;   // ctx features of coref-linked sentences
};
FeatureResources resources_for(const SimCorpus& corpus);
SimulatedFeatures simulate_with_features(const SimConfig& config);

// Sentences whose only informative feature is aoa_avg (the planted
// difficulty); ten other dense features are independent noise. Each pair
// gets `per_pair` judgments from a probit choice on the difficulty gap.
struct PlantedSignal {
  FeatureStore features;
  std::vector<JudgmentRecord> judgments;
};
PlantedSignal planted_signal(uint64_t seed, int n_sentences = 60, int n_pairs = 150,
                             int per_pair = 3);

// Non-gold judgments.
std::vector<JudgmentRecord> non_gold(const std::vector<JudgmentRecord>& judgments);

}  // namespace readrank::testing

#endif  // READRANK_TESTS_TESTING_FIXTURES_H_
