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

#ifndef READRANK_CORPUS_H_
#define READRANK_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace readrank {

enum class TaskMode { kSentenceOnly, kInPassage };

std::string_view task_mode_name(TaskMode mode);
TaskMode parse_task_mode(std::string_view name);

// Grade bins 1..6 cover grades {1-2, 3-4, 5-6, 7-8, 9-10, 11-12}.
inline constexpr int kNumGradeBins = 6;

// Length windows enforced under paper-faithful validation.
inline constexpr int kMinSentenceWords = 6;
inline constexpr int kMaxSentenceWords = 20;
inline constexpr int kMinPassageWords = 136;
inline constexpr int kMaxPassageWords = 160;

struct Token {
  std::string surface;
  std::string lower;

  bool operator==(const Token&) const = default;
};

// True when the token contains at least one letter or digit. Punctuation-only
// tokens are excluded from every per-word denominator.
bool is_word(const Token& token);
int count_words(std::span<const Token> tokens);

// Rule-based tokenizer:
//  * whitespace separates tokens;
//  * letters, digits and non-ASCII letters form words;
//  * an apostrophe (' or U+2019) or hyphen between word characters stays
//    inside the word ("didn't", "seven-by-12-foot");
//  * '.' or ',' between two digits stays inside the number ("3.5", "1,000");
//  * every other non-space character is a token of its own.
std::vector<Token> tokenize(std::string_view text);

struct CorefMention {
  int sentence_index = 0;
  int token_start = 0;  // inclusive
  int token_end = 0;    // exclusive

  bool operator==(const CorefMention&) const = default;
};
using CorefChain = std::vector<CorefMention>;

struct PassageContext {
  std::vector<std::string> sentences;
  int target_index = 0;
  int word_count = 0;
  // Optional bracketed parses, parallel to `sentences`. Empty when the
  // passage carries no parses.
  std::vector<std::string> parses;

  bool operator==(const PassageContext&) const = default;
};

struct SentenceRecord {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  int grade_bin = 1;
  std::optional<PassageContext> passage;
  std::optional<std::string> parse;
  std::optional<double> parse_loglik;
  std::optional<double> reranker_loglik;
  std::optional<std::vector<CorefChain>> coref_chains;

  bool operator==(const SentenceRecord&) const = default;
};

enum class Choice { kA, kB, kDraw };
enum class Order { kAB, kBA };

std::string_view choice_name(Choice c);
std::string_view order_name(Order o);

// One worker decision. sent_a/sent_b are the canonical identities of the
// pair; `choice` always refers to them, whatever order the worker saw.
struct JudgmentRecord {
  std::string pair_id;
  std::string sent_a;
  std::string sent_b;
  std::string worker_id;
  Choice choice = Choice::kA;
  Order presentation_order = Order::kAB;
  bool is_gold = false;
  std::optional<Choice> gold_answer;

  bool operator==(const JudgmentRecord&) const = default;
};

struct LexiconEntry {
  double aoa = 0.0;
  int syllables = 1;

  bool operator==(const LexiconEntry&) const = default;
};

class Lexicon {
 public:
  void add(std::string word, LexiconEntry entry);
  const LexiconEntry* find(std::string_view lower_word) const;
  size_t size() const { return entries_.size(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const { return entries_; }

  bool operator==(const Lexicon&) const = default;

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

enum class WordRole { kDaleChall, kStopword };

struct WordSet {
  std::set<std::string, std::less<>> words;
  WordRole role = WordRole::kStopword;

  bool contains(std::string_view lower_word) const { return words.find(lower_word) != words.end(); }
  bool operator==(const WordSet&) const = default;
};

struct ValidationOptions {
  // Enforce the sentence/passage length windows and parse leaf counts as
  // errors. When false they are reported as warnings.
  bool paper_faithful = false;
};

// Validates one record; invariant violations that are always errors are
// appended to `errors`, length-window findings to `warnings` (or `errors`
// in paper-faithful mode).
void validate_sentence(const SentenceRecord& record, const ValidationOptions& options,
                       std::vector<std::string>& errors, std::vector<std::string>& warnings);

// Lines starting with '#' are comments in every format. Readers throw
// ValidationError carrying every diagnostic, each naming the source, line
// number and record id or field.
std::vector<SentenceRecord> read_sentences(std::istream& in, std::string_view source,
                                           const ValidationOptions& options = {},
                                           std::vector<std::string>* warnings = nullptr);
std::vector<JudgmentRecord> read_judgments(std::istream& in, std::string_view source);
Lexicon read_lexicon(std::istream& in, std::string_view source);
WordSet read_wordlist(std::istream& in, WordRole role);

std::vector<SentenceRecord> load_sentences(const std::filesystem::path& path,
                                           const ValidationOptions& options = {},
                                           std::vector<std::string>* warnings = nullptr);
std::vector<JudgmentRecord> load_judgments(const std::filesystem::path& path);
Lexicon load_lexicon(const std::filesystem::path& path);
WordSet load_wordlist(const std::filesystem::path& path, WordRole role);

void write_sentences(std::ostream& out, std::span<const SentenceRecord> records);
void write_judgments(std::ostream& out, std::span<const JudgmentRecord> records);
void write_lexicon(std::ostream& out, const Lexicon& lexicon);
void write_wordlist(std::ostream& out, const WordSet& words);

std::string sentence_to_json_line(const SentenceRecord& record);
std::string judgment_to_json_line(const JudgmentRecord& record);

struct SentencePair {
  std::string pair_id;
  std::string sent_a;
  std::string sent_b;

  bool operator==(const SentencePair&) const = default;
};

// Pairs every sentence with exactly one random partner from each other grade
// bin. Bins must be equally sized. With `blocks` > 1 each bin is first cut
// into that many random groups and partners are drawn inside the matching
// group only, so the pair graph splits into `blocks` closed components
// (needed for sentence-disjoint test sets made of whole pairs). The A/B
// orientation of each pair is a fair coin.
std::vector<SentencePair> generate_pairs(std::span<const SentenceRecord> sentences, uint64_t seed,
                                         int blocks = 1);

// Unique non-gold pairs in order of first appearance.
std::vector<SentencePair> pairs_from_judgments(std::span<const JudgmentRecord> judgments);

struct SplitOptions {
  double fraction = 0.2;
  uint64_t seed = 0;
  int max_retries = 1000;
  // When set, the sampler retries until the test set has exactly
  // round(fraction * pairs) pairs over round(fraction * sentences) held-out
  // sentences and fails otherwise. When unset the best attempt is returned.
  bool require_target = true;
};

struct Split {
  std::vector<SentencePair> train;
  std::vector<SentencePair> test;
  std::vector<std::string> held_out;  // sorted
};

// Sentence-disjoint split: the test set is exactly the pairs whose two
// endpoints are held out; training pairs touch no held-out sentence.
Split split_by_sentence(std::span<const SentencePair> pairs, const SplitOptions& options);

}  // namespace readrank

#endif  // READRANK_CORPUS_H_
