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

#ifndef READRANK_CONTEXT_H_
#define READRANK_CONTEXT_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "readrank/corpus.h"
#include "readrank/features.h"
#include "readrank/ngramlm.h"
#include "readrank/synfeat.h"

namespace readrank {

// Passage sentences used as the context of a target sentence.
struct ContextSet {
  std::vector<int> sentence_indices;                // ascending, target excluded
  std::vector<std::vector<Token>> sentence_tokens;  // parallel to indices
  std::vector<std::optional<ParseTree>> trees;      // parallel to indices
  std::vector<Token> tokens;                        // concatenation in passage order

  bool empty() const { return sentence_indices.empty(); }
};

// Builds a context set from explicit passage indices; the target index is
// dropped if present.
ContextSet make_context(const SentenceRecord& record, std::vector<int> indices);

// Sentences sharing at least one coreference chain with the target.
ContextSet linked_sentences(const SentenceRecord& record);

// Every passage sentence except the target.
ContextSet remaining_passage(const SentenceRecord& record);

// Resources needed to compute the full per-sentence feature vector.
struct FeatureResources {
  Lexicon lexicon;
  WordSet dale_chall;
  WordSet stopwords;
  NgramModel lm;
  Pcfg pcfg;
};

// Dense feature names emitted for every sentence (and, under "ctx:", for
// every context set), in output order. Sparse pos_pct:* and syn:* features
// follow them.
const std::vector<std::string>& dense_feature_names(int lm_max_order = 5);

class SentenceFeaturizer {
 public:
  explicit SentenceFeaturizer(const FeatureResources& resources) : res_(resources) {}

  // Lexical, n-gram and (when a tree is given) syntactic features. Missing
  // likelihood annotations fall back to the PCFG score of the tree.
  FeatureVector sentence_vector(std::span<const Token> tokens, const ParseTree* tree,
                                std::optional<double> parse_loglik = std::nullopt,
                                std::optional<double> reranker_loglik = std::nullopt) const;

  FeatureVector record_vector(const SentenceRecord& record) const;

  // Same schema over a context set, prefixed "ctx:". Lexical features pool
  // the concatenated tokens; n-gram and tree features are averaged over the
  // member sentences (tree features over members that have a parse). An
  // empty set yields zeros with pct_not_in_aoa = 1.
  FeatureVector context_vector(const ContextSet& ctx) const;

  // record_vector plus, when `with_context`, context_vector of the
  // coreference-linked set.
  FeatureVector full_vector(const SentenceRecord& record, bool with_context) const;

  const FeatureResources& resources() const { return res_; }

 private:
  const FeatureResources& res_;
};

using FeatureStore = std::map<std::string, FeatureVector>;

}  // namespace readrank

#endif  // READRANK_CONTEXT_H_
