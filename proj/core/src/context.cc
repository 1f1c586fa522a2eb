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

#include "readrank/context.h"

#include <algorithm>
#include <set>

#include "readrank/error.h"
#include "readrank/lexfeat.h"

namespace readrank {

ContextSet make_context(const SentenceRecord& record, std::vector<int> indices) {
  if (!record.passage) {
    throw PreconditionError("sentence '" + record.id + "' has no passage");
  }
  const auto& p = *record.passage;
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  ContextSet ctx;
  for (int idx : indices) {
    if (idx == p.target_index) continue;
    if (idx < 0 || idx >= static_cast<int>(p.sentences.size())) {
      throw ValidationError("sentence '" + record.id + "': passage index " + std::to_string(idx) +
                            " out of bounds");
    }
    ctx.sentence_indices.push_back(idx);
    auto toks = tokenize(p.sentences[idx]);
    ctx.tokens.insert(ctx.tokens.end(), toks.begin(), toks.end());
    ctx.sentence_tokens.push_back(std::move(toks));
    if (!p.parses.empty() && !p.parses[idx].empty()) {
      ctx.trees.push_back(read_bracketed(p.parses[idx]));
    } else {
      ctx.trees.push_back(std::nullopt);
    }
  }
  return ctx;
}

ContextSet linked_sentences(const SentenceRecord& record) {
  if (!record.passage || !record.coref_chains) {
    throw PreconditionError("sentence '" + record.id + "' needs a passage and coreference chains");
  }
  const auto& p = *record.passage;
  const int n = static_cast<int>(p.sentences.size());
  std::set<int> linked;
  for (const auto& chain : *record.coref_chains) {
    bool touches_target = false;
    for (const auto& m : chain) {
      if (m.sentence_index < 0 || m.sentence_index >= n) {
        throw ValidationError("sentence '" + record.id + "': coreference mention in sentence " +
                              std::to_string(m.sentence_index) + " outside the passage");
      }
      touches_target |= m.sentence_index == p.target_index;
    }
    if (!touches_target) continue;
    for (const auto& m : chain) {
      if (m.sentence_index != p.target_index) linked.insert(m.sentence_index);
    }
  }
  return make_context(record, {linked.begin(), linked.end()});
}

ContextSet remaining_passage(const SentenceRecord& record) {
  if (!record.passage) {
    throw PreconditionError("sentence '" + record.id + "' has no passage");
  }
  std::vector<int> all(record.passage->sentences.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return make_context(record, std::move(all));
}

const std::vector<std::string>& dense_feature_names(int lm_max_order) {
  static const std::vector<std::vector<std::string>> tables = [] {
    std::vector<std::vector<std::string>> out;
    for (int order = 0; order <= 5; ++order) {
      std::vector<std::string> names(kLexicalFeatureNames.begin(), kLexicalFeatureNames.end());
      for (int k = 1; k <= order; ++k) names.push_back("lm_logprob_" + std::to_string(k));
      for (const char* n :
           {"pos_diversity", "parse_height", "parse_length", "parse_loglik", "reranker_loglik"}) {
        names.emplace_back(n);
      }
      out.push_back(std::move(names));
    }
    return out;
  }();
  return tables.at(static_cast<size_t>(std::clamp(lm_max_order, 0, 5)));
}

namespace {

// Syntactic features of one tree, with dense names always present.
FeatureVector tree_vector(const ParseTree* tree, const Pcfg& pcfg,
                          std::optional<double> parse_loglik,
                          std::optional<double> reranker_loglik) {
  FeatureVector dense;
  FeatureVector sparse;
  double diversity = 0.0;
  TreeShape shape;
  double fallback = 0.0;
  if (tree) {
    const auto pos = pos_features(*tree);
    for (const auto& e : pos.entries()) {
      if (e.name == "pos_diversity") {
        diversity = e.value;
      } else {
        sparse.add(e.name, e.group, e.value);
      }
    }
    sparse.append(subtree_features(*tree));
    shape = tree_shape(*tree);
    fallback = tree_logprob(pcfg, *tree);
  }
  dense.add("pos_diversity", FeatureGroup::kPos, diversity);
  dense.add("parse_height", FeatureGroup::kSynOther, shape.height);
  dense.add("parse_length", FeatureGroup::kSynOther, shape.length);
  dense.add("parse_loglik", FeatureGroup::kSynScore, parse_loglik.value_or(fallback));
  dense.add("reranker_loglik", FeatureGroup::kSynScore, reranker_loglik.value_or(fallback));
  dense.append(sparse);
  return dense;
}

}  // namespace

FeatureVector SentenceFeaturizer::sentence_vector(std::span<const Token> tokens,
                                                  const ParseTree* tree,
                                                  std::optional<double> parse_loglik,
                                                  std::optional<double> reranker_loglik) const {
  FeatureVector v = lexical_vector(tokens, res_.lexicon, res_.dale_chall, res_.stopwords);
  v.append(ngram_vector(res_.lm, tokens));
  v.append(tree_vector(tree, res_.pcfg, parse_loglik, reranker_loglik));
  return v;
}

FeatureVector SentenceFeaturizer::record_vector(const SentenceRecord& record) const {
  std::optional<ParseTree> tree;
  if (record.parse) {
    try {
      tree = read_bracketed(*record.parse);
    } catch (const TreeSyntaxError& e) {
      throw ValidationError("sentence '" + record.id + "': " + e.what());
    }
  }
  return sentence_vector(record.tokens, tree ? &*tree : nullptr, record.parse_loglik,
                         record.reranker_loglik);
}

FeatureVector SentenceFeaturizer::context_vector(const ContextSet& ctx) const {
  FeatureVector v = lexical_vector(ctx.tokens, res_.lexicon, res_.dale_chall, res_.stopwords);
  // n-gram scores: mean over member sentences.
  FeatureVector lm;
  for (int k = 1; k <= res_.lm.max_order(); ++k) {
    lm.add("lm_logprob_" + std::to_string(k), FeatureGroup::kNgramL, 0.0);
  }
  for (const auto& toks : ctx.sentence_tokens) {
    const FeatureVector scores = ngram_vector(res_.lm, toks);
    for (const auto& e : scores.entries()) {
      lm.accumulate(e.name, e.group, e.value);
    }
  }
  if (!ctx.sentence_tokens.empty()) {
    lm.scale(1.0 / static_cast<double>(ctx.sentence_tokens.size()));
  }
  v.append(lm);

  // Tree features: mean over members with a parse.
  FeatureVector trees = tree_vector(nullptr, res_.pcfg, std::nullopt, std::nullopt);
  int with_tree = 0;
  for (const auto& t : ctx.trees) {
    if (!t) continue;
    ++with_tree;
    const FeatureVector tv = tree_vector(&*t, res_.pcfg, std::nullopt, std::nullopt);
    for (const auto& e : tv.entries()) {
      trees.accumulate(e.name, e.group, e.value);
    }
  }
  if (with_tree > 0) trees.scale(1.0 / with_tree);
  // Keep sparse names sorted like the per-sentence vectors.
  FeatureVector sorted_trees;
  std::vector<const FeatureVector::Entry*> sparse;
  for (const auto& e : trees.entries()) {
    if (e.name.rfind(kPosPrefix, 0) == 0 || e.name.rfind(kSubtreePrefix, 0) == 0) {
      sparse.push_back(&e);
    } else {
      sorted_trees.add(e.name, e.group, e.value);
    }
  }
  std::sort(sparse.begin(), sparse.end(),
            [](const auto* a, const auto* b) { return a->name < b->name; });
  for (const auto* e : sparse) sorted_trees.add(e->name, e->group, e->value);
  v.append(sorted_trees);
  return v.with_prefix(kContextPrefix);
}

FeatureVector SentenceFeaturizer::full_vector(const SentenceRecord& record,
                                              bool with_context) const {
  FeatureVector v = record_vector(record);
  if (with_context) {
    if (record.passage && record.coref_chains) {
      v.append(context_vector(linked_sentences(record)));
    } else {
      v.append(context_vector(ContextSet{}));
    }
  }
  return v;
}

}  // namespace readrank
