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

#include <gtest/gtest.h>

#include <cmath>

#include "readrank/error.h"
#include "readrank/features.h"
#include "testing/oracles.h"

namespace readrank {
namespace {

SentenceRecord passage_record() {
  SentenceRecord r;
  r.id = "t";
  PassageContext p;
  p.sentences = {"The cat sat.", "A dog ran far.", "The cat ate a sandwich.", "It rained."};
  p.parses = {"(S (NP (DT The) (NN cat)) (VP (VBD sat)))",
              "(S (NP (DT A) (NN dog)) (VP (VBD ran) (ADVP (RB far))))",
              "(S (NP (DT The) (NN cat)) (VP (VBD ate) (NP (DT a) (NN sandwich))))", ""};
  p.target_index = 2;
  p.word_count = 140;
  r.text = p.sentences[2];
  r.tokens = tokenize(r.text);
  r.parse = p.parses[2];
  r.passage = p;
  // Chain 0 links the target with sentences 0 and 3; chain 1 misses it.
  r.coref_chains =
      std::vector<CorefChain>{{{0, 0, 2}, {2, 0, 2}, {3, 0, 1}}, {{1, 0, 2}, {3, 0, 1}}};
  return r;
}

FeatureResources small_resources() {
  FeatureResources res;
  res.lexicon.add("cat", {4.0, 1});
  res.lexicon.add("sandwich", {5.0, 2});
  res.lexicon.add("dog", {3.0, 1});
  res.dale_chall.words = {"the", "cat", "a"};
  res.stopwords.words = {"the", "a", "it"};
  NgramOptions o;
  o.max_order = 3;
  res.lm = train_lm({{"the", "cat", "sat", "."}, {"the", "dog", "sat", "."}, {"a", "cat", "."}}, o);
  res.pcfg = estimate_pcfg(
      std::vector<ParseTree>{read_bracketed("(S (NP (DT The) (NN cat)) (VP (VBD sat)))")});
  return res;
}

TEST(ContextSetTest, LinkedSentencesFollowChainsThroughTarget) {
  const auto ctx = linked_sentences(passage_record());
  EXPECT_EQ(ctx.sentence_indices, (std::vector<int>{0, 3}));
  ASSERT_EQ(ctx.trees.size(), 2u);
  EXPECT_TRUE(ctx.trees[0].has_value());
  EXPECT_FALSE(ctx.trees[1].has_value());
  EXPECT_EQ(ctx.tokens.size(), ctx.sentence_tokens[0].size() + ctx.sentence_tokens[1].size());
}

TEST(ContextSetTest, RemainingPassageExcludesOnlyTarget) {
  EXPECT_EQ(remaining_passage(passage_record()).sentence_indices, (std::vector<int>{0, 1, 3}));
}

TEST(ContextSetTest, MakeContextDedupsAndValidates) {
  const auto r = passage_record();
  EXPECT_EQ(make_context(r, {3, 0, 3, 2}).sentence_indices, (std::vector<int>{0, 3}));
  EXPECT_THROW(make_context(r, {7}), ValidationError);
  SentenceRecord bare;
  bare.id = "b";
  EXPECT_THROW(linked_sentences(bare), PreconditionError);
  EXPECT_THROW(remaining_passage(bare), PreconditionError);
  auto broken = r;
  (*broken.coref_chains)[0].push_back({9, 0, 1});
  EXPECT_THROW(linked_sentences(broken), ValidationError);
}

TEST(ContextVectorTest, PoolsLexicalAveragesLmAndTrees) {
  const auto res = small_resources();
  const SentenceFeaturizer f(res);
  const auto r = passage_record();
  const auto ctx = remaining_passage(r);
  const auto v = f.context_vector(ctx);

  const auto lex =
      testing::brute_force_lexical(ctx.tokens, res.lexicon, res.dale_chall, res.stopwords);
  EXPECT_NEAR(*v.get("ctx:aoa_avg"), lex.aoa_avg, 1e-12);
  EXPECT_NEAR(*v.get("ctx:content_word_pct"), lex.content_word_pct, 1e-12);
  EXPECT_EQ(*v.get("ctx:n_words"), lex.n_words);

  for (int k = 1; k <= 3; ++k) {
    double sum = 0.0;
    for (const auto& toks : ctx.sentence_tokens) {
      std::vector<std::string> words;
      for (const auto& t : toks) words.push_back(t.lower);
      sum += sentence_logprob(res.lm, words, k);
    }
    EXPECT_NEAR(*v.get("ctx:lm_logprob_" + std::to_string(k)), sum / 3.0, 1e-12);
  }

  // Trees on sentences 0 and 1 only: heights 2 and 3, lengths 3 and 4.
  EXPECT_DOUBLE_EQ(*v.get("ctx:parse_height"), 2.5);
  EXPECT_DOUBLE_EQ(*v.get("ctx:parse_length"), 3.5);
  EXPECT_DOUBLE_EQ(*v.get("ctx:pos_pct:DT"), (1.0 / 3.0 + 1.0 / 4.0) / 2.0);
  EXPECT_DOUBLE_EQ(*v.get("ctx:syn:(ADVP RB)"), 0.5);
  for (const auto& e : v.entries()) EXPECT_EQ(e.name.rfind("ctx:", 0), 0u) << e.name;
}

TEST(ContextVectorTest, EmptySetIsZeroWithFullMissingRate) {
  const auto res = small_resources();
  const SentenceFeaturizer f(res);
  const auto v = f.context_vector(ContextSet{});
  const auto& names = dense_feature_names(3);
  ASSERT_EQ(v.size(), names.size());
  for (size_t i = 0; i < names.size(); ++i) {
    EXPECT_EQ(v.entries()[i].name, "ctx:" + names[i]);
    EXPECT_EQ(v.entries()[i].value, names[i] == "pct_not_in_aoa" ? 1.0 : 0.0) << names[i];
  }
}

TEST(SentenceVectorTest, DenseNamesLeadInOrder) {
  const auto res = small_resources();
  const SentenceFeaturizer f(res);
  const auto r = passage_record();
  const auto v = f.record_vector(r);
  const auto& names = dense_feature_names(3);
  ASSERT_GE(v.size(), names.size());
  for (size_t i = 0; i < names.size(); ++i) EXPECT_EQ(v.entries()[i].name, names[i]);
  // Without annotations the likelihoods fall back to the PCFG score.
  const double pcfg_score = tree_logprob(res.pcfg, read_bracketed(*r.parse));
  EXPECT_EQ(*v.get("parse_loglik"), pcfg_score);
  EXPECT_EQ(*v.get("reranker_loglik"), pcfg_score);
  auto annotated = r;
  annotated.parse_loglik = -7.0;
  EXPECT_EQ(*f.record_vector(annotated).get("parse_loglik"), -7.0);
  for (const auto& e : v.entries()) EXPECT_EQ(e.group, group_of(e.name)) << e.name;
}

TEST(SentenceVectorTest, FullVectorAddsLinkedContext) {
  const auto res = small_resources();
  const SentenceFeaturizer f(res);
  const auto r = passage_record();
  const auto plain = f.full_vector(r, false);
  const auto with = f.full_vector(r, true);
  EXPECT_FALSE(plain.contains("ctx:aoa_avg"));
  const auto linked = f.context_vector(linked_sentences(r));
  EXPECT_EQ(with.get("ctx:aoa_avg"), linked.get("ctx:aoa_avg"));
  EXPECT_EQ(with.size(), plain.size() + linked.size());
  auto no_passage = r;
  no_passage.passage.reset();
  no_passage.coref_chains.reset();
  EXPECT_EQ(*f.full_vector(no_passage, true).get("ctx:pct_not_in_aoa"), 1.0);
}

TEST(SentenceVectorTest, BadParseNamesSentence) {
  const auto res = small_resources();
  const SentenceFeaturizer f(res);
  auto r = passage_record();
  r.parse = "(S (NP";
  try {
    f.record_vector(r);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'t'"), std::string::npos);
  }
}

TEST(FeatureVectorTest, RejectsDuplicatesAndNonFinite) {
  FeatureVector v;
  v.add("aoa_avg", FeatureGroup::kAoA, 1.0);
  EXPECT_THROW(v.add("aoa_avg", FeatureGroup::kAoA, 2.0), PreconditionError);
  EXPECT_THROW(v.add("aoa_max", FeatureGroup::kAoA, std::nan("")), ValidationError);
  v.accumulate("aoa_avg", FeatureGroup::kAoA, 0.5);
  v.accumulate("aoa_std", FeatureGroup::kAoA, 0.25);
  EXPECT_EQ(*v.get("aoa_avg"), 1.5);
  EXPECT_EQ(v.value_or_zero("missing"), 0.0);
  v.scale(2.0);
  EXPECT_EQ(*v.get("aoa_std"), 0.5);
  EXPECT_EQ(v.with_prefix("A:").entries()[0].name, "A:aoa_avg");
}

TEST(FeatureGroupTest, NamesMapToGroups) {
  EXPECT_EQ(group_of("A:ctx:aoa_max"), FeatureGroup::kAoA);
  EXPECT_EQ(group_of("B:lm_logprob_4"), FeatureGroup::kNgramL);
  EXPECT_EQ(group_of("ctx:pos_pct:NN"), FeatureGroup::kPos);
  EXPECT_EQ(group_of("syn:(S NP VP)"), FeatureGroup::kSynTree);
  EXPECT_EQ(group_of("reranker_loglik"), FeatureGroup::kSynScore);
  EXPECT_EQ(group_of("parse_length"), FeatureGroup::kSynOther);
  EXPECT_THROW(group_of("mystery"), PreconditionError);
  EXPECT_EQ(base_feature_name("B:ctx:n_chars"), "n_chars");
  for (auto g : kAllFeatureGroups) EXPECT_EQ(parse_group(group_name(g)), g);
  EXPECT_THROW(parse_group("Nope"), PreconditionError);
}

}  // namespace
}  // namespace readrank
