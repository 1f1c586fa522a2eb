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

#include "testing/fixtures.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "readrank/ngramlm.h"

namespace readrank::testing {

TempDir::TempDir() {
  const auto base = std::filesystem::temp_directory_path();
  Rng rng(std::random_device{}());
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / ("readrank-test-" + std::to_string(rng.next() % 1000000000ULL));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("TempDir: could not create a directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_file: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

JudgmentRecord judgment(const std::string& pair_id, const std::string& a, const std::string& b,
                        const std::string& worker, Choice choice, Order order) {
  JudgmentRecord r;
  r.pair_id = pair_id;
  r.sent_a = a;
  r.sent_b = b;
  r.worker_id = worker;
  r.choice = choice;
  r.presentation_order = order;
  return r;
}

JudgmentRecord gold_judgment(const std::string& pair_id, const std::string& a, const std::string& b,
                             const std::string& worker, Choice choice, Choice answer) {
  auto r = judgment(pair_id, a, b, worker, choice);
  r.is_gold = true;
  r.gold_answer = answer;
  return r;
}

namespace {

const char* const kPhrasal[] = {"S", "NP", "VP", "PP", "SBAR", "ADJP"};
const char* const kTags[] = {"DT", "NN", "VBD", "JJ", "IN", "RB", "PRP", "NNS"};

ParseTree random_node(Rng& rng, int depth_left, bool root) {
  if (depth_left <= 1 || (!root && rng.bernoulli(0.35))) {
    ParseTree leaf{"w" + std::to_string(rng.uniform_int(50)), {}};
    return ParseTree{kTags[rng.uniform_int(std::size(kTags))], {leaf}};
  }
  ParseTree node{root ? "S" : kPhrasal[rng.uniform_int(std::size(kPhrasal))], {}};
  const int n = 1 + static_cast<int>(rng.uniform_int(3));
  for (int i = 0; i < n; ++i) node.children.push_back(random_node(rng, depth_left - 1, false));
  return node;
}

}  // namespace

ParseTree random_tree(Rng& rng, int max_depth) { return random_node(rng, max_depth, true); }

FuzzVocabulary fuzz_vocabulary() {
  FuzzVocabulary v;
  v.dale_chall.role = WordRole::kDaleChall;
  v.stopwords.role = WordRole::kStopword;
  const std::vector<std::pair<std::string, LexiconEntry>> known = {
      {"cat", {4.0, 1}},  {"ran", {5.0, 1}},         {"sandwich", {5.5, 2}},
      {"the", {3.1, 1}},  {"a", {2.9, 1}},           {"elephant", {6.2, 3}},
      {"café", {9.0, 2}}, {"didn't", {4.4, 2}},      {"photosynthesis", {13.5, 5}},
      {"of", {3.0, 1}},   {"ubiquitous", {15.25, 4}}};
  for (const auto& [w, e] : known) v.lexicon.add(w, e);
  v.dale_chall.words = {"the", "a", "cat", "ran", "of", "dog", "happy"};
  v.stopwords.words = {"the", "a", "of", "and", "is"};
  v.words = {"cat",
             "Cat",
             "ran",
             "sandwich",
             "The",
             "the",
             "a",
             "elephant",
             "café",
             "didn't",
             "photosynthesis",
             "of",
             "ubiquitous",
             "dog",
             "Happy",
             "and",
             "is",
             "zyzzyva",
             "naïve",
             "42",
             ",",
             ".",
             "!",
             "(",
             ")",
             ";",
             "--"};
  return v;
}

std::vector<Token> random_tokens(Rng& rng, const FuzzVocabulary& vocab, int max_len) {
  const int n = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(max_len) + 1));
  std::vector<Token> tokens;
  for (int i = 0; i < n; ++i) {
    const auto& w = vocab.words[rng.uniform_int(vocab.words.size())];
    std::string lower = w;
    for (auto& c : lower) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    tokens.push_back({w, lower});
  }
  return tokens;
}

FeatureResources resources_for(const SimCorpus& corpus) {
  std::vector<std::vector<std::string>> lm_corpus;
  for (const auto& line : corpus.lm_corpus) {
    std::vector<std::string> words;
    for (auto& t : tokenize(line)) words.push_back(std::move(t.lower));
    lm_corpus.push_back(std::move(words));
  }
  std::vector<ParseTree> bank;
  for (const auto& line : corpus.treebank) bank.push_back(read_bracketed(line));
  return FeatureResources{corpus.lexicon, corpus.dale_chall, corpus.stopwords, train_lm(lm_corpus),
                          estimate_pcfg(bank)};
}

SimulatedFeatures simulate_with_features(const SimConfig& config) {
  SimulatedFeatures out;
  out.data = simulate_dataset(config);
  out.resources = resources_for(out.data.corpus);
  const SentenceFeaturizer featurizer(out.resources);
  for (const auto& s : out.data.corpus.sentences) {
    out.sentence_only[s.id] = featurizer.full_vector(s, false);
    out.with_context[s.id] = featurizer.full_vector(s, true);
  }
  return out;
}

std::vector<JudgmentRecord> non_gold(const std::vector<JudgmentRecord>& judgments) {
  std::vector<JudgmentRecord> out;
  for (const auto& j : judgments) {
    if (!j.is_gold) out.push_back(j);
  }
  return out;
}

PlantedSignal planted_signal(uint64_t seed, int n_sentences, int n_pairs, int per_pair) {
  static const char* const kNoise[] = {
      "syll_avg",         "syll_max",     "dale_chall_pct", "n_words",      "n_chars",
      "content_word_pct", "lm_logprob_1", "lm_logprob_2",   "parse_height", "parse_length"};
  Rng rng(seed);
  PlantedSignal out;
  std::vector<double> difficulty(n_sentences);
  for (int i = 0; i < n_sentences; ++i) {
    difficulty[i] = rng.normal();
    FeatureVector v;
    v.add("aoa_avg", FeatureGroup::kAoA, difficulty[i]);
    for (const char* name : kNoise) v.add(name, group_of(name), rng.normal());
    out.features["s" + std::to_string(i)] = std::move(v);
  }
  for (int p = 0; p < n_pairs; ++p) {
    const int a = static_cast<int>(rng.uniform_int(n_sentences));
    int b = static_cast<int>(rng.uniform_int(n_sentences - 1));
    if (b >= a) ++b;
    for (int k = 0; k < per_pair; ++k) {
      const bool a_harder = difficulty[a] - difficulty[b] + rng.normal(0.0, 0.5) > 0;
      out.judgments.push_back(judgment("p" + std::to_string(p), "s" + std::to_string(a),
                                       "s" + std::to_string(b), "w" + std::to_string(k),
                                       a_harder ? Choice::kA : Choice::kB));
    }
  }
  return out;
}

}  // namespace readrank::testing
