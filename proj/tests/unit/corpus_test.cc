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

#include "readrank/corpus.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "readrank/error.h"
#include "testing/fixtures.h"

namespace readrank {
namespace {

using ::readrank::testing::TempDir;

std::vector<SentenceRecord> binned_sentences(int per_bin) {
  std::vector<SentenceRecord> out;
  for (int b = 1; b <= kNumGradeBins; ++b) {
    for (int i = 0; i < per_bin; ++i) {
      SentenceRecord r;
      r.id = "b" + std::to_string(b) + "_" + std::to_string(i);
      r.text = "one two three four five six.";
      r.tokens = tokenize(r.text);
      r.grade_bin = b;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<std::string> surfaces(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

TEST(TokenizeTest, SplitsWordsAndPunctuation) {
  const auto tokens = tokenize("The man is eating a sandwich.");
  EXPECT_EQ(surfaces(tokens),
            (std::vector<std::string>{"The", "man", "is", "eating", "a", "sandwich", "."}));
  EXPECT_EQ(tokens[0].lower, "the");
  EXPECT_EQ(count_words(tokens), 6);
}

TEST(TokenizeTest, KeepsContractionsHyphensAndNumbers) {
  EXPECT_EQ(
      surfaces(tokenize("It didn't cost 3.50, well-known fact!")),
      (std::vector<std::string>{"It", "didn't", "cost", "3.50", ",", "well-known", "fact", "!"}));
}

TEST(TokenizeTest, EmptyAndWhitespaceGiveNoTokens) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" \t\n").empty());
}

TEST(TokenizeTest, NonAsciiLettersAreWordCharacters) {
  const auto tokens = tokenize("Café naïve.");
  EXPECT_EQ(surfaces(tokens), (std::vector<std::string>{"Café", "naïve", "."}));
  EXPECT_EQ(tokens[0].lower, "café");
}

TEST(TaskModeTest, NamesRoundTrip) {
  for (auto m : {TaskMode::kSentenceOnly, TaskMode::kInPassage}) {
    EXPECT_EQ(parse_task_mode(task_mode_name(m)), m);
  }
  EXPECT_THROW(parse_task_mode("paragraph"), PreconditionError);
}

TEST(SentenceIoTest, RoundTripsEveryField) {
  SentenceRecord r;
  r.id = "s1";
  r.text = "The cat sat on the mat today.";
  r.tokens = tokenize(r.text);
  r.grade_bin = 3;
  PassageContext p;
  p.sentences = {"A dog barked.", r.text, "It was loud."};
  p.target_index = 1;
  p.word_count = 140;
  p.parses = {"(S (NN a))", "(S (NN b))", "(S (NN c))"};
  r.passage = p;
  r.parse = "(S (NP (DT The) (NN cat)) (VP (VBD sat)))";
  r.parse_loglik = -12.5;
  r.reranker_loglik = -3.25;
  r.coref_chains = std::vector<CorefChain>{{{0, 0, 2}, {2, 0, 1}}};
  SentenceRecord bare;
  bare.id = "s2";
  bare.text = "Short but long enough for us.";
  bare.tokens = tokenize(bare.text);
  bare.grade_bin = 6;

  std::stringstream ss;
  const std::vector<SentenceRecord> records{r, bare};
  write_sentences(ss, records);
  const auto back = read_sentences(ss, "mem");
  EXPECT_EQ(back, records);
}

TEST(SentenceIoTest, SkipsCommentsAndBlankLines) {
  std::stringstream ss(
      "# config {}\n\n"
      R"({"id":"x","text":"One two three four five six.","grade_bin":2})"
      "\n");
  const auto records = read_sentences(ss, "mem");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].tokens.size(), 7u);
}

TEST(SentenceIoTest, DiagnosticsNameSourceAndLine) {
  std::stringstream ss(R"({"id":"x","text":"One two three four five six.","grade_bin":2})"
                       "\n{not json\n"
                       R"({"id":"y","text":"One two three four five six.","grade_bin":9})"
                       "\n");
  try {
    read_sentences(ss, "in.jsonl");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.diagnostics().size(), 2u);
    EXPECT_NE(e.diagnostics()[0].find("in.jsonl:2:"), std::string::npos);
    EXPECT_NE(e.diagnostics()[1].find("in.jsonl:3:"), std::string::npos);
    EXPECT_NE(e.diagnostics()[1].find("grade_bin"), std::string::npos);
  }
}

TEST(SentenceIoTest, DuplicateIdIsAnError) {
  std::stringstream ss(R"({"id":"x","text":"One two three four five six.","grade_bin":2})"
                       "\n"
                       R"({"id":"x","text":"One two three four five six.","grade_bin":3})"
                       "\n");
  EXPECT_THROW(read_sentences(ss, "mem"), ValidationError);
}

TEST(SentenceIoTest, LengthWindowIsWarningUnlessPaperFaithful) {
  const std::string line = R"({"id":"x","text":"Too short here.","grade_bin":2})"
                           "\n";
  std::stringstream lenient(line);
  std::vector<std::string> warnings;
  EXPECT_EQ(read_sentences(lenient, "mem", {}, &warnings).size(), 1u);
  EXPECT_EQ(warnings.size(), 1u);
  std::stringstream strict(line);
  EXPECT_THROW(read_sentences(strict, "mem", ValidationOptions{true}), ValidationError);
}

TEST(SentenceIoTest, PassageTargetMustMatchText) {
  std::stringstream ss(
      R"({"id":"x","text":"One two three four five six.","grade_bin":2,)"
      R"("passage":{"sentences":["Other text."],"target_index":0,"word_count":140}})"
      "\n");
  EXPECT_THROW(read_sentences(ss, "mem"), ValidationError);
}

TEST(JudgmentIoTest, RoundTripsAndSkipsComments) {
  std::vector<JudgmentRecord> js{
      testing::judgment("p1", "a", "b", "w1", Choice::kA, Order::kBA),
      testing::judgment("p1", "a", "b", "w2", Choice::kDraw),
      testing::gold_judgment("g1", "c", "d", "w1", Choice::kB, Choice::kB),
  };
  std::stringstream ss;
  ss << "# config {\"seed\":\"1\"}\n";
  write_judgments(ss, js);
  EXPECT_EQ(read_judgments(ss, "mem"), js);
}

TEST(JudgmentIoTest, GoldNeedsAnswerAndSentencesDiffer) {
  std::stringstream no_answer(
      R"({"pair_id":"p","sent_a":"a","sent_b":"b","worker_id":"w","choice":"A",)"
      R"("presentation_order":"AB","is_gold":true})"
      "\n");
  EXPECT_THROW(read_judgments(no_answer, "mem"), ValidationError);
  std::stringstream same(R"({"pair_id":"p","sent_a":"a","sent_b":"a","worker_id":"w","choice":"A",)"
                         R"("presentation_order":"AB","is_gold":false})"
                         "\n");
  EXPECT_THROW(read_judgments(same, "mem"), ValidationError);
  std::stringstream bad_order(
      R"({"pair_id":"p","sent_a":"a","sent_b":"b","worker_id":"w","choice":"A",)"
      R"("presentation_order":"XY","is_gold":false})"
      "\n");
  EXPECT_THROW(read_judgments(bad_order, "mem"), ValidationError);
}

TEST(JudgmentIoTest, PairKeepsOneOrientation) {
  std::stringstream swapped(
      R"({"pair_id":"p","sent_a":"a","sent_b":"b","worker_id":"w1","choice":"A",)"
      R"("presentation_order":"AB","is_gold":false})"
      "\n"
      R"({"pair_id":"p","sent_a":"b","sent_b":"a","worker_id":"w2","choice":"A",)"
      R"("presentation_order":"AB","is_gold":false})"
      "\n");
  try {
    read_judgments(swapped, "j.jsonl");
    FAIL() << "swapped orientation accepted";
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("j.jsonl:2"), std::string::npos) << what;
    EXPECT_NE(what.find("line 1"), std::string::npos) << what;
  }
}

TEST(LexiconIoTest, ParsesAndRoundTrips) {
  std::stringstream ss("word,aoa_rating,n_syllables\n# note\ncat,3.5,1\nSandwich,5.25,2\n");
  const auto lex = read_lexicon(ss, "lex.csv");
  ASSERT_EQ(lex.size(), 2u);
  ASSERT_NE(lex.find("sandwich"), nullptr);
  EXPECT_EQ(lex.find("sandwich")->syllables, 2);
  EXPECT_EQ(lex.find("cat")->aoa, 3.5);
  std::stringstream out;
  write_lexicon(out, lex);
  EXPECT_EQ(read_lexicon(out, "mem"), lex);
}

TEST(LexiconIoTest, RejectsBadRows) {
  std::stringstream header("w,a,s\ncat,3,1\n");
  EXPECT_THROW(read_lexicon(header, "mem"), ValidationError);
  std::stringstream aoa("word,aoa_rating,n_syllables\ncat,0,1\n");
  EXPECT_THROW(read_lexicon(aoa, "mem"), ValidationError);
  std::stringstream syl("word,aoa_rating,n_syllables\ncat,3,0\n");
  EXPECT_THROW(read_lexicon(syl, "mem"), ValidationError);
  std::stringstream dup("word,aoa_rating,n_syllables\ncat,3,1\nCat,4,1\n");
  EXPECT_THROW(read_lexicon(dup, "mem"), ValidationError);
}

TEST(WordlistIoTest, LowercasesAndSkipsComments) {
  std::stringstream ss("# list\nThe\ncat\n\nCAT\n");
  const auto set = read_wordlist(ss, WordRole::kDaleChall);
  EXPECT_EQ(set.words, (std::set<std::string, std::less<>>{"cat", "the"}));
  EXPECT_EQ(set.role, WordRole::kDaleChall);
  std::stringstream out;
  write_wordlist(out, set);
  EXPECT_EQ(read_wordlist(out, WordRole::kDaleChall), set);
}

TEST(LoadTest, MissingFileNamesPath) {
  TempDir dir;
  const auto path = dir / "absent.jsonl";
  try {
    load_judgments(path);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
  }
}

TEST(GeneratePairsTest, PairCountsFollowBinSize) {
  EXPECT_EQ(generate_pairs(binned_sentences(2), 1).size(), 30u);
  EXPECT_EQ(generate_pairs(binned_sentences(1), 1).size(), 15u);
  EXPECT_EQ(generate_pairs(binned_sentences(20), 1, 20).size(), 300u);
}

TEST(GeneratePairsTest, EverySentenceMeetsEachOtherBinOnce) {
  const auto sentences = binned_sentences(20);
  std::map<std::string, int> bin;
  for (const auto& s : sentences) bin[s.id] = s.grade_bin;
  for (int blocks : {1, 4, 20}) {
    const auto pairs = generate_pairs(sentences, 7, blocks);
    std::map<std::string, std::multiset<int>> partner_bins;
    std::set<std::string> ids;
    for (const auto& p : pairs) {
      EXPECT_NE(bin[p.sent_a], bin[p.sent_b]);
      partner_bins[p.sent_a].insert(bin[p.sent_b]);
      partner_bins[p.sent_b].insert(bin[p.sent_a]);
      EXPECT_TRUE(ids.insert(p.pair_id).second);
    }
    for (const auto& s : sentences) {
      std::multiset<int> expected;
      for (int b = 1; b <= kNumGradeBins; ++b) {
        if (b != s.grade_bin) expected.insert(b);
      }
      EXPECT_EQ(partner_bins[s.id], expected) << s.id << " blocks=" << blocks;
    }
  }
}

TEST(GeneratePairsTest, DeterministicPerSeed) {
  const auto sentences = binned_sentences(4);
  EXPECT_EQ(generate_pairs(sentences, 3, 2), generate_pairs(sentences, 3, 2));
  EXPECT_NE(generate_pairs(sentences, 3, 2), generate_pairs(sentences, 4, 2));
}

TEST(GeneratePairsTest, RejectsUnequalBinsAndBadBlocks) {
  auto sentences = binned_sentences(2);
  sentences.pop_back();
  EXPECT_THROW(generate_pairs(sentences, 1), ValidationError);
  EXPECT_THROW(generate_pairs(binned_sentences(2), 1, 0), PreconditionError);
  EXPECT_THROW(generate_pairs(binned_sentences(2), 1, 3), ValidationError);
}

TEST(PairsFromJudgmentsTest, UniqueNonGoldInFirstAppearanceOrder) {
  std::vector<JudgmentRecord> js{
      testing::judgment("p2", "c", "d", "w1", Choice::kA),
      testing::gold_judgment("g", "e", "f", "w1", Choice::kA, Choice::kA),
      testing::judgment("p1", "a", "b", "w1", Choice::kB),
      testing::judgment("p2", "c", "d", "w2", Choice::kB, Order::kBA),
  };
  const auto pairs = pairs_from_judgments(js);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0], (SentencePair{"p2", "c", "d"}));
  EXPECT_EQ(pairs[1], (SentencePair{"p1", "a", "b"}));
}

TEST(PairsFromJudgmentsTest, RejectsSwappedOrientation) {
  std::vector<JudgmentRecord> js{
      testing::judgment("p", "a", "b", "w1", Choice::kA),
      testing::judgment("p", "b", "a", "w2", Choice::kA),
  };
  EXPECT_THROW(pairs_from_judgments(js), ValidationError);
}

TEST(SplitTest, SentenceDisjointAtPaperScale) {
  const auto pairs = generate_pairs(binned_sentences(20), 5, 20);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto split = split_by_sentence(pairs, SplitOptions{0.2, seed});
    EXPECT_EQ(split.test.size(), 60u);
    EXPECT_EQ(split.held_out.size(), 24u);
    EXPECT_TRUE(std::is_sorted(split.held_out.begin(), split.held_out.end()));
    const std::set<std::string> held(split.held_out.begin(), split.held_out.end());
    for (const auto& p : split.test) {
      EXPECT_TRUE(held.count(p.sent_a) && held.count(p.sent_b));
    }
    for (const auto& p : split.train) {
      EXPECT_FALSE(held.count(p.sent_a) || held.count(p.sent_b));
    }
    EXPECT_EQ(split.train.size() + split.test.size(), pairs.size());
  }
}

TEST(SplitTest, DeterministicAndValidated) {
  const auto pairs = generate_pairs(binned_sentences(20), 5, 20);
  const auto a = split_by_sentence(pairs, SplitOptions{0.2, 9});
  const auto b = split_by_sentence(pairs, SplitOptions{0.2, 9});
  EXPECT_EQ(a.held_out, b.held_out);
  EXPECT_EQ(a.test, b.test);
  EXPECT_THROW(split_by_sentence(pairs, SplitOptions{0.0, 1}), PreconditionError);
  EXPECT_THROW(split_by_sentence(pairs, SplitOptions{1.0, 1}), PreconditionError);
  EXPECT_THROW(split_by_sentence({}, SplitOptions{0.2, 1}), PreconditionError);
}

TEST(SplitTest, UnreachableTargetThrowsUnlessBestEffort) {
  // One block: the pair graph is connected, so no sentence-closed 20% subset exists.
  const auto pairs = generate_pairs(binned_sentences(20), 5, 1);
  SplitOptions strict{0.2, 1, 20, true};
  EXPECT_THROW(split_by_sentence(pairs, strict), Error);
  SplitOptions loose{0.2, 1, 20, false};
  const auto split = split_by_sentence(pairs, loose);
  EXPECT_FALSE(split.held_out.empty());
}

}  // namespace
}  // namespace readrank
