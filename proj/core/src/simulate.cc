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

#include "readrank/simulate.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "readrank/error.h"
#include "readrank/parallel.h"
#include "readrank/random.h"
#include "readrank/stats.h"
#include "readrank/synfeat.h"

namespace readrank {

void SimConfig::validate() const {
  if (n_bins != kNumGradeBins) {
    throw PreconditionError("simulate: n_bins must be " + std::to_string(kNumGradeBins));
  }
  if (n_sentences <= 0 || n_sentences % n_bins != 0) {
    throw PreconditionError("simulate: n_sentences must be a positive multiple of n_bins");
  }
  if (blocks < 1 || (n_sentences / n_bins) % blocks != 0) {
    throw PreconditionError("simulate: sentences per bin must be divisible by blocks");
  }
  if (!(noise_sd > 0)) throw PreconditionError("simulate: noise_sd must be > 0");
  if (!(p_draw >= 0 && p_draw < 1)) throw PreconditionError("simulate: p_draw must be in [0, 1)");
  if (judgments_per_pair < 1) throw PreconditionError("simulate: judgments_per_pair must be >= 1");
  if (n_workers < judgments_per_pair) {
    throw PreconditionError("simulate: n_workers must be >= judgments_per_pair");
  }
  if (!(spammer_fraction >= 0 && spammer_fraction <= 1)) {
    throw PreconditionError("simulate: spammer_fraction must be in [0, 1]");
  }
  if (n_gold < 0 || gold_per_page < 0 || gold_per_page > 2) {
    throw PreconditionError("simulate: n_gold >= 0 and gold_per_page in [0, 2] required");
  }
  if (difficulty_jitter < 0 || difficulty_jitter > 1) {
    throw PreconditionError("simulate: difficulty_jitter must be in [0, 1]");
  }
}

namespace {

constexpr double kMaxDifficulty = kNumGradeBins;

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

struct FunctionWord {
  const char* word;
  const char* tag;
  double aoa;
  int syllables;
};

constexpr std::array<FunctionWord, 20> kFunctionWords = {{
    {"the", "DT", 3.2, 1},       {"a", "DT", 3.0, 1},          {"this", "DT", 3.9, 1},
    {"every", "DT", 5.1, 3},     {"he", "PRP", 3.3, 1},        {"she", "PRP", 3.4, 1},
    {"they", "PRP", 3.8, 1},     {"it", "PRP", 3.6, 1},        {"in", "IN", 3.4, 1},
    {"on", "IN", 3.1, 1},        {"with", "IN", 4.0, 1},       {"from", "IN", 4.4, 1},
    {"near", "IN", 4.7, 1},      {"that", "WDT", 4.2, 1},      {"which", "WDT", 5.5, 1},
    {"because", "IN_C", 5.3, 2}, {"although", "IN_C", 7.6, 3}, {"would", "MD", 4.9, 1},
    {"could", "MD", 4.8, 1},     {"will", "MD", 4.2, 1},
}};

constexpr std::array<const char*, 18> kOnsets = {"b", "d", "f", "g", "k", "l",  "m",  "n",  "p",
                                                 "r", "s", "t", "v", "z", "br", "st", "pl", "tr"};
constexpr std::array<const char*, 6> kNuclei = {"a", "e", "i", "o", "u", "ai"};
constexpr std::array<const char*, 5> kCodas = {"", "", "n", "r", "s"};

struct ContentWord {
  std::string word;
  double aoa;
  int syllables;
};

// Content words of one tag, sorted by AoA.
using TagVocabulary = std::vector<ContentWord>;

struct Vocabulary {
  std::map<std::string, TagVocabulary> content;              // NN, JJ, VBD, VB, RB
  std::map<std::string, std::vector<std::string>> function;  // tag -> words
};

Vocabulary make_vocabulary(Rng& rng, Lexicon& lexicon, WordSet& dale_chall, WordSet& stopwords) {
  Vocabulary v;
  std::unordered_set<std::string> used;
  for (const auto& f : kFunctionWords) {
    v.function[f.tag].push_back(f.word);
    used.insert(f.word);
    lexicon.add(f.word, {f.aoa, f.syllables});
    stopwords.words.insert(f.word);
    dale_chall.words.insert(f.word);
  }
  const std::array<std::pair<const char*, int>, 5> sizes = {
      {{"NN", 700}, {"JJ", 300}, {"VBD", 300}, {"VB", 250}, {"RB", 100}}};
  for (const auto& [tag, count] : sizes) {
    auto& words = v.content[tag];
    while (static_cast<int>(words.size()) < count) {
      const int syll = 1 + static_cast<int>(rng.uniform_int(5));
      std::string w;
      for (int s = 0; s < syll; ++s) {
        w += kOnsets[rng.uniform_int(kOnsets.size())];
        w += kNuclei[rng.uniform_int(kNuclei.size())];
      }
      w += kCodas[rng.uniform_int(kCodas.size())];
      if (!used.insert(w).second) continue;
      const double aoa = rng.uniform(2.5, 16.0);
      words.push_back({w, aoa, syll});
    }
    std::sort(words.begin(), words.end(),
              [](const ContentWord& a, const ContentWord& b) { return a.aoa < b.aoa; });
    for (const auto& cw : words) {
      const double p_missing = cw.aoa > 12.0 ? 0.15 : 0.02;
      if (!rng.bernoulli(p_missing)) {
        lexicon.add(cw.word, {std::round(cw.aoa * 100.0) / 100.0, cw.syllables});
      }
      if (cw.aoa < 6.5) dale_chall.words.insert(cw.word);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sentence generator
// ---------------------------------------------------------------------------

struct Latents {
  double lexical;
  double syntax;
  double surface;
};

// Builds "NP VP ." and then applies a number of constructions that grows
// with the syntax latent. Harder latents favor relative and complement
// clauses, which are rarer in the background treebank.
class SentenceGenerator {
 public:
  SentenceGenerator(const Vocabulary& vocab, const Latents& latents, Rng& rng)
      : vocab_(vocab), lat_(latents), rng_(rng) {}

  ParseTree sentence(int lo, int hi) {
    ParseTree s{"S", {}};
    s.children.push_back(base_np(rng_.bernoulli(pronoun_share())));
    ParseTree vp{"VP", {}};
    vp.children.push_back(content_leaf("VBD"));
    vp.children.push_back(base_np(false));
    s.children.push_back(std::move(vp));
    s.children.push_back(leaf(".", "."));
    int words = count(s);
    const double s_lat = std::clamp(lat_.syntax, 0.0, 7.0);
    const int budget =
        std::clamp(static_cast<int>(std::lround(0.9 * s_lat + rng_.normal(0.0, 0.5))), 0, 7);
    for (int k = 0; k < budget; ++k) {
      if (!expand(s, words, hi, false)) break;
    }
    while (words < lo) {
      if (!expand(s, words, hi, true)) break;
    }
    return s;
  }

 private:
  enum Kind { kAdj, kPpNp, kRel, kPpVp, kComp, kAdv, kModal, kNumKinds };

  double pronoun_share() const {
    return std::max(0.05, 0.4 - 0.06 * std::clamp(lat_.syntax, 0.0, 6.0));
  }

  static ParseTree leaf(const std::string& tag, const std::string& word) {
    return ParseTree{tag, {ParseTree{word, {}}}};
  }

  static int count(const ParseTree& t) {
    if (t.is_preterminal()) return t.label == "." ? 0 : 1;
    int n = 0;
    for (const auto& c : t.children) n += count(c);
    return n;
  }

  static void collect(ParseTree& t, const std::string& label, std::vector<ParseTree*>& out) {
    if (t.label == label) out.push_back(&t);
    for (auto& c : t.children) {
      if (!c.is_leaf()) collect(c, label, out);
    }
  }

  static bool is_base_np(const ParseTree& t) {
    return t.label == "NP" && t.children.size() >= 2 && t.children[0].label == "DT" &&
           std::all_of(t.children.begin(), t.children.end(),
                       [](const ParseTree& c) { return c.is_preterminal(); });
  }

  ParseTree function_leaf(const std::string& tag, const std::string& key) {
    const auto& words = vocab_.function.at(key);
    return leaf(tag, words[rng_.uniform_int(words.size())]);
  }

  ParseTree content_leaf(const std::string& tag) {
    const auto& words = vocab_.content.at(tag);
    const double target_aoa = std::clamp(rng_.normal(3.5 + 1.5 * lat_.lexical, 1.6), 2.5, 16.0);
    const double target_syll = std::clamp(rng_.normal(1.0 + 0.55 * lat_.surface, 0.8), 1.0, 5.0);
    auto it = std::lower_bound(words.begin(), words.end(), target_aoa,
                               [](const ContentWord& w, double a) { return w.aoa < a; });
    const size_t center = std::min<size_t>(it - words.begin(), words.size() - 1);
    const size_t lo = center >= 12 ? center - 12 : 0;
    const size_t hi = std::min(words.size(), center + 12);
    size_t best = center;
    double best_cost = 1e300;
    for (int k = 0; k < 6; ++k) {
      const size_t i = lo + rng_.uniform_int(hi - lo);
      const double cost =
          std::fabs(words[i].syllables - target_syll) + 0.5 * std::fabs(words[i].aoa - target_aoa);
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    return leaf(tag, words[best].word);
  }

  ParseTree base_np(bool pronoun) {
    ParseTree np{"NP", {}};
    if (pronoun) {
      np.children.push_back(function_leaf("PRP", "PRP"));
    } else {
      np.children.push_back(function_leaf("DT", "DT"));
      np.children.push_back(content_leaf("NN"));
    }
    return np;
  }

  // Applies one construction that keeps the word count <= hi. `cheap`
  // restricts to single-word additions. Returns false when none applies.
  bool expand(ParseTree& root, int& words, int hi, bool cheap) {
    std::vector<ParseTree*> nps, vps;
    collect(root, "NP", nps);
    collect(root, "VP", vps);
    std::vector<ParseTree*> base_nps, adj_nps;
    for (auto* np : nps) {
      if (!is_base_np(*np)) continue;
      base_nps.push_back(np);
      int jj = 0;
      for (const auto& c : np->children) jj += c.label == "JJ";
      if (jj < 2) adj_nps.push_back(np);
    }
    std::vector<ParseTree*> pp_vps, adv_vps, modal_vps;
    for (auto* vp : vps) {
      bool has_pp = false, has_adv = false;
      for (const auto& c : vp->children) {
        has_pp |= c.label == "PP";
        has_adv |= c.label == "ADVP";
      }
      if (!has_pp) pp_vps.push_back(vp);
      if (!has_adv) adv_vps.push_back(vp);
      if (vp->children[0].label == "VBD") modal_vps.push_back(vp);
    }
    auto& main_vp = root.children[1];
    bool has_comp = false;
    for (const auto& c : main_vp.children) has_comp |= c.label == "SBAR";

    const double s = std::clamp(lat_.syntax / 6.0, 0.0, 1.0);
    const std::array<int, kNumKinds> cost = {1, 3, 4, 3, 6, 1, 1};
    std::array<double, kNumKinds> weight = {2.5 - s, 2.0, 0.3 + 2.2 * s, 1.5, 0.2 + 2.0 * s,
                                            1.0,     0.6};
    const std::array<bool, kNumKinds> eligible = {
        !adj_nps.empty(), !base_nps.empty(), !base_nps.empty(), !pp_vps.empty(),
        !has_comp,        !adv_vps.empty(),  !modal_vps.empty()};
    double total = 0.0;
    for (int k = 0; k < kNumKinds; ++k) {
      if (!eligible[k] || words + cost[k] > hi || (cheap && cost[k] > 1)) weight[k] = 0.0;
      total += weight[k];
    }
    if (total <= 0.0) return false;
    double u = rng_.uniform() * total;
    int kind = 0;
    for (; kind < kNumKinds - 1; ++kind) {
      if (u < weight[kind]) break;
      u -= weight[kind];
    }
    auto pick = [&](std::vector<ParseTree*>& v) { return v[rng_.uniform_int(v.size())]; };
    switch (kind) {
      case kAdj: {
        auto* np = pick(adj_nps);
        np->children.insert(np->children.end() - 1, content_leaf("JJ"));
        break;
      }
      case kPpNp:
      case kRel: {
        auto* np = pick(base_nps);
        ParseTree inner = std::move(*np);
        ParseTree outer{"NP", {}};
        outer.children.push_back(std::move(inner));
        if (kind == kPpNp) {
          ParseTree pp{"PP", {}};
          pp.children.push_back(function_leaf("IN", "IN"));
          pp.children.push_back(base_np(false));
          outer.children.push_back(std::move(pp));
        } else {
          ParseTree vp{"VP", {}};
          vp.children.push_back(content_leaf("VBD"));
          vp.children.push_back(base_np(false));
          ParseTree sbar{"SBAR", {}};
          sbar.children.push_back(function_leaf("WDT", "WDT"));
          sbar.children.push_back(std::move(vp));
          outer.children.push_back(std::move(sbar));
        }
        *np = std::move(outer);
        break;
      }
      case kPpVp: {
        auto* vp = pick(pp_vps);
        ParseTree pp{"PP", {}};
        pp.children.push_back(function_leaf("IN", "IN"));
        pp.children.push_back(base_np(false));
        vp->children.push_back(std::move(pp));
        break;
      }
      case kComp: {
        ParseTree inner{"S", {}};
        inner.children.push_back(base_np(false));
        ParseTree vp{"VP", {}};
        vp.children.push_back(content_leaf("VBD"));
        vp.children.push_back(base_np(false));
        inner.children.push_back(std::move(vp));
        ParseTree sbar{"SBAR", {}};
        sbar.children.push_back(function_leaf("IN", "IN_C"));
        sbar.children.push_back(std::move(inner));
        main_vp.children.push_back(std::move(sbar));
        break;
      }
      case kAdv: {
        auto* vp = pick(adv_vps);
        ParseTree advp{"ADVP", {}};
        advp.children.push_back(content_leaf("RB"));
        vp->children.push_back(std::move(advp));
        break;
      }
      case kModal: {
        auto* vp = pick(modal_vps);
        vp->children[0] = content_leaf("VB");
        vp->children.insert(vp->children.begin(), function_leaf("MD", "MD"));
        break;
      }
    }
    words = count(root);
    return true;
  }

  const Vocabulary& vocab_;
  Latents lat_;
  Rng& rng_;
};

std::string render(const ParseTree& tree) {
  const auto leaves = tree_leaves(tree);
  std::string text;
  for (const auto& w : leaves) {
    if (!text.empty() && w != ".") text += ' ';
    text += w;
  }
  if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text;
}

int word_count(const ParseTree& tree) {
  int n = 0;
  for (const auto& w : tree_leaves(tree)) n += w != "." ? 1 : 0;
  return n;
}

Latents draw_latents(double d, const SimConfig& c, Rng& rng) {
  return {d + rng.normal(0.0, c.lexical_noise), d + rng.normal(0.0, c.syntax_noise),
          d + rng.normal(0.0, c.surface_noise)};
}

ParseTree generate_tree(const Vocabulary& vocab, const Latents& lat, Rng& rng, int lo, int hi) {
  SentenceGenerator gen(vocab, lat, rng);
  return gen.sentence(lo, hi);
}

struct GeneratedSentence {
  ParseTree tree;
  std::string text;
  int words = 0;
  double syntax = 0.0;
};

GeneratedSentence generate_sentence(const Vocabulary& vocab, double d, const SimConfig& c, Rng& rng,
                                    int lo = kMinSentenceWords, int hi = kMaxSentenceWords) {
  const Latents lat = draw_latents(d, c, rng);
  GeneratedSentence g;
  g.tree = generate_tree(vocab, lat, rng, lo, hi);
  g.text = render(g.tree);
  g.words = word_count(g.tree);
  g.syntax = lat.syntax;
  return g;
}

std::string id_with_width(char prefix, size_t k, size_t total) {
  const size_t width = std::max<size_t>(3, std::to_string(total).size());
  std::string num = std::to_string(k);
  return std::string(1, prefix) + std::string(width - num.size(), '0') + num;
}

}  // namespace

SimCorpus synth_sentences(const SimConfig& config) {
  config.validate();
  SimCorpus out;
  out.dale_chall.role = WordRole::kDaleChall;
  out.stopwords.role = WordRole::kStopword;
  Rng vocab_rng(derive_seed(config.seed, 1));
  const Vocabulary vocab = make_vocabulary(vocab_rng, out.lexicon, out.dale_chall, out.stopwords);

  // Background text and treebank over the whole difficulty range.
  Rng bg_rng(derive_seed(config.seed, 2));
  std::vector<ParseTree> bank;
  for (int i = 0; i < config.treebank_sentences; ++i) {
    auto g = generate_sentence(vocab, bg_rng.uniform(0.0, kMaxDifficulty), config, bg_rng);
    out.treebank.push_back(to_bracketed(g.tree));
    bank.push_back(std::move(g.tree));
  }
  const Pcfg pcfg = estimate_pcfg(bank);
  for (int i = 0; i < config.lm_corpus_sentences; ++i) {
    // Easier text dominates the background corpus.
    const double d = kMaxDifficulty * std::pow(bg_rng.uniform(), 1.5);
    auto g = generate_sentence(vocab, d, config, bg_rng);
    std::string line;
    for (const auto& t : tokenize(g.text)) {
      if (!line.empty()) line += ' ';
      line += t.lower;
    }
    out.lm_corpus.push_back(std::move(line));
  }

  const int n = config.n_sentences;
  const int per_bin = n / config.n_bins;
  std::vector<int> bins(n);
  for (int i = 0; i < n; ++i) bins[i] = i / per_bin + 1;
  Rng assign_rng(derive_seed(config.seed, 3));
  assign_rng.shuffle(std::span<int>(bins));

  out.sentences.resize(n);
  out.expert_ranges.resize(n);
  std::vector<double> difficulty(n);
  std::vector<double> passage_shift(n);
  std::vector<double> syntax(n);
  parallel_for(static_cast<size_t>(n), 1, [&](size_t i) {
    Rng rng(derive_seed(config.seed, 1000 + i));
    const int bin = bins[i];
    const double d = (bin - 1) + config.difficulty_jitter * rng.uniform();
    difficulty[i] = d;

    auto target = generate_sentence(vocab, d, config, rng);
    syntax[i] = target.syntax;
    SentenceRecord rec;
    rec.id = id_with_width('s', i + 1, n);
    rec.text = target.text;
    rec.tokens = tokenize(rec.text);
    rec.grade_bin = bin;
    rec.parse = to_bracketed(target.tree);
    rec.parse_loglik = tree_logprob(pcfg, target.tree);
    rec.reranker_loglik = *rec.parse_loglik + rng.normal(0.0, 0.5);

    // Passage: two sentences before the target, then fill to the window.
    const double dp = std::clamp(d + rng.normal(0.0, 1.0), 0.0, kMaxDifficulty);
    PassageContext passage;
    passage.target_index = 2;
    std::vector<GeneratedSentence> members;
    for (int k = 0; k < 2; ++k) members.push_back(generate_sentence(vocab, dp, config, rng));
    members.push_back(target);
    int total = 0;
    for (const auto& m : members) total += m.words;
    while (total < kMinPassageWords) {
      const int need = kMinPassageWords - total;
      const int room = kMaxPassageWords - total;
      const int lo =
          need > kMaxSentenceWords ? kMinSentenceWords : std::max(kMinSentenceWords, need);
      const int hi = std::min(kMaxSentenceWords, room);
      members.push_back(generate_sentence(vocab, dp, config, rng, lo, hi));
      total += members.back().words;
    }
    double ctx_syntax = 0.0;
    for (size_t k = 0; k < members.size(); ++k) {
      passage.sentences.push_back(members[k].text);
      passage.parses.push_back(to_bracketed(members[k].tree));
      if (static_cast<int>(k) != passage.target_index) ctx_syntax += members[k].syntax;
    }
    ctx_syntax /= static_cast<double>(members.size() - 1);
    passage.word_count = total;
    passage_shift[i] = config.context_effect * (target.syntax - ctx_syntax);

    // Coreference: each chain links a target word to words in 1-2 other
    // passage sentences.
    std::vector<CorefChain> chains;
    const int n_chains = 1 + static_cast<int>(rng.uniform_int(2));
    auto word_mention = [&](int sentence_index) {
      const auto toks = tokenize(passage.sentences[sentence_index]);
      std::vector<int> word_positions;
      for (size_t t = 0; t < toks.size(); ++t) {
        if (is_word(toks[t])) word_positions.push_back(static_cast<int>(t));
      }
      const int pos = word_positions[rng.uniform_int(word_positions.size())];
      return CorefMention{sentence_index, pos, pos + 1};
    };
    for (int c = 0; c < n_chains; ++c) {
      CorefChain chain{word_mention(passage.target_index)};
      const int links = 1 + static_cast<int>(rng.uniform_int(2));
      for (int l = 0; l < links; ++l) {
        int other = static_cast<int>(rng.uniform_int(members.size() - 1));
        if (other >= passage.target_index) ++other;
        chain.push_back(word_mention(other));
      }
      std::sort(chain.begin(), chain.end(), [](const CorefMention& a, const CorefMention& b) {
        return std::tie(a.sentence_index, a.token_start) <
               std::tie(b.sentence_index, b.token_start);
      });
      chains.push_back(std::move(chain));
    }
    rec.passage = std::move(passage);
    rec.coref_chains = std::move(chains);
    out.sentences[i] = std::move(rec);

    // Expert grade range around the grade implied by the difficulty.
    const double center = std::clamp(1.5 + 2.0 * d + rng.normal(0.0, 1.0), 1.0, 12.0);
    const double low = std::clamp(std::floor(center - rng.uniform()), 1.0, 12.0);
    const double high = std::clamp(low + static_cast<double>(rng.uniform_int(3)), low, 12.0);
    out.expert_ranges[i] = {out.sentences[i].id, low, high};
  });

  std::vector<std::string> order;
  std::map<std::string, double> scores;
  for (int i = 0; i < n; ++i) {
    const auto& id = out.sentences[i].id;
    out.difficulty[id] = difficulty[i];
    out.passage_difficulty[id] = difficulty[i] + passage_shift[i];
    out.syntax_latent[id] = syntax[i];
    order.push_back(id);
    scores[id] = difficulty[i];
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return scores.at(a) > scores.at(b);
  });
  out.truth = Ranking(std::move(order), std::move(scores));
  return out;
}

double choice_probability(double d_a, double d_b, const SimConfig& config) {
  const double z = (d_a - d_b) / (std::sqrt(2.0) * config.noise_sd);
  if (config.choice_model == ChoiceModel::kProbit) return normal_cdf(z);
  return 1.0 / (1.0 + std::exp(-1.702 * z));
}

std::vector<std::string> spammer_ids(const SimConfig& config) {
  std::vector<size_t> idx(config.n_workers);
  std::iota(idx.begin(), idx.end(), size_t{0});
  Rng rng(derive_seed(config.seed, 7));
  rng.shuffle(std::span<size_t>(idx));
  const size_t k = static_cast<size_t>(std::llround(config.spammer_fraction * config.n_workers));
  std::vector<std::string> out;
  for (size_t i = 0; i < k; ++i) out.push_back(id_with_width('w', idx[i] + 1, config.n_workers));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<JudgmentRecord> simulate_judgments(const std::map<std::string, double>& scores,
                                               std::span<const SentencePair> pairs,
                                               const SimConfig& config) {
  config.validate();
  std::vector<std::string> workers(config.n_workers);
  for (int w = 0; w < config.n_workers; ++w) {
    workers[w] = id_with_width('w', w + 1, config.n_workers);
  }
  const auto spam_list = spammer_ids(config);
  const std::unordered_set<std::string> spammers(spam_list.begin(), spam_list.end());
  auto score_of = [&](const std::string& id) {
    auto it = scores.find(id);
    if (it == scores.end()) {
      throw PreconditionError("simulate_judgments: no score for sentence '" + id + "'");
    }
    return it->second;
  };
  auto decide = [&](const std::string& worker, double da, double db, Rng& rng) {
    if (spammers.count(worker)) return rng.bernoulli(0.5) ? Choice::kA : Choice::kB;
    if (rng.bernoulli(config.p_draw)) return Choice::kDraw;
    return rng.bernoulli(choice_probability(da, db, config)) ? Choice::kA : Choice::kB;
  };

  const uint64_t base = derive_seed(config.seed, 11);
  const int per_order = config.judgments_per_pair;
  std::vector<std::vector<JudgmentRecord>> per_pair(pairs.size());
  parallel_for(pairs.size(), 1, [&](size_t p) {
    Rng rng(derive_seed(base, p));
    const auto& pair = pairs[p];
    const double da = score_of(pair.sent_a);
    const double db = score_of(pair.sent_b);
    std::vector<size_t> pool(workers.size());
    for (Order order : {Order::kAB, Order::kBA}) {
      std::iota(pool.begin(), pool.end(), size_t{0});
      for (int k = 0; k < per_order; ++k) {
        const size_t j = k + rng.uniform_int(pool.size() - k);
        std::swap(pool[k], pool[j]);
        JudgmentRecord r;
        r.pair_id = pair.pair_id;
        r.sent_a = pair.sent_a;
        r.sent_b = pair.sent_b;
        r.worker_id = workers[pool[k]];
        r.presentation_order = order;
        r.choice = decide(r.worker_id, da, db, rng);
        per_pair[p].push_back(std::move(r));
      }
    }
  });
  std::vector<JudgmentRecord> out;
  std::map<std::string, int> answered;
  for (auto& block : per_pair) {
    for (auto& r : block) {
      ++answered[r.worker_id];
      out.push_back(std::move(r));
    }
  }

  if (config.n_gold == 0 || config.gold_per_page == 0) return out;
  // Gold questions pair the easiest third with the hardest third.
  std::vector<std::string> ids;
  for (const auto& [id, s] : scores) ids.push_back(id);
  std::stable_sort(ids.begin(), ids.end(),
                   [&](const auto& a, const auto& b) { return scores.at(a) < scores.at(b); });
  const size_t third = ids.size() / 3;
  if (third == 0)
    throw PreconditionError("simulate_judgments: too few sentences for gold questions");
  Rng gold_rng(derive_seed(config.seed, 12));
  std::vector<SentencePair> gold;
  std::vector<Choice> gold_answer;
  for (int g = 0; g < config.n_gold; ++g) {
    const auto& easy = ids[gold_rng.uniform_int(third)];
    const auto& hard = ids[ids.size() - 1 - gold_rng.uniform_int(third)];
    const bool hard_first = gold_rng.bernoulli(0.5);
    gold.push_back({id_with_width('g', g + 1, config.n_gold), hard_first ? hard : easy,
                    hard_first ? easy : hard});
    gold_answer.push_back(hard_first ? Choice::kA : Choice::kB);
  }
  const int others = 3 - config.gold_per_page;
  for (size_t w = 0; w < workers.size(); ++w) {
    auto it = answered.find(workers[w]);
    if (it == answered.end()) continue;
    Rng rng(derive_seed(derive_seed(config.seed, 13), w));
    const int n_gold = (it->second * config.gold_per_page + others - 1) / others;
    for (int k = 0; k < n_gold; ++k) {
      const size_t g = rng.uniform_int(gold.size());
      JudgmentRecord r;
      r.pair_id = gold[g].pair_id;
      r.sent_a = gold[g].sent_a;
      r.sent_b = gold[g].sent_b;
      r.worker_id = workers[w];
      r.presentation_order = rng.bernoulli(0.5) ? Order::kAB : Order::kBA;
      r.is_gold = true;
      r.gold_answer = gold_answer[g];
      r.choice = decide(r.worker_id, score_of(r.sent_a), score_of(r.sent_b), rng);
      out.push_back(std::move(r));
    }
  }
  return out;
}

SimDataset simulate_dataset(const SimConfig& config) {
  SimDataset data;
  data.corpus = synth_sentences(config);
  data.pairs = generate_pairs(data.corpus.sentences, derive_seed(config.seed, 21), config.blocks);
  data.sentence_only = simulate_judgments(data.corpus.difficulty, data.pairs, config);
  SimConfig passage = config;
  passage.seed = derive_seed(config.seed, 22);
  passage.task_mode = TaskMode::kInPassage;
  data.in_passage = simulate_judgments(data.corpus.passage_difficulty, data.pairs, passage);
  data.spammers_sentence_only = spammer_ids(config);
  data.spammers_in_passage = spammer_ids(passage);
  return data;
}

double majority_agreement(std::span<const JudgmentRecord> judgments) {
  std::map<std::string, std::array<int, 3>> votes;
  for (const auto& j : judgments) {
    if (j.is_gold) continue;
    ++votes[j.pair_id][static_cast<int>(j.choice)];
  }
  double agree = 0.0;
  double total = 0.0;
  for (const auto& [id, v] : votes) {
    agree += *std::max_element(v.begin(), v.end());
    total += v[0] + v[1] + v[2];
  }
  if (total == 0.0) throw PreconditionError("majority_agreement: no non-gold judgments");
  return agree / total;
}

}  // namespace readrank
