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

#ifndef READRANK_NGRAMLM_H_
#define READRANK_NGRAMLM_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "readrank/corpus.h"
#include "readrank/features.h"

namespace readrank {

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";
inline constexpr std::string_view kUnknownWord = "<unk>";

struct NgramOptions {
  int max_order = 5;
  double backoff_alpha = 0.4;
  // Recorded in the model; sentence scores are the mean per-token log10
  // score when true and the summed log10 score otherwise.
  bool length_normalized = true;
};

// Count-based n-gram model scored with stupid backoff.
class NgramModel {
 public:
  int max_order() const { return options_.max_order; }
  double backoff_alpha() const { return options_.backoff_alpha; }
  bool length_normalized() const { return options_.length_normalized; }

  int64_t count(std::span<const std::string> ngram) const;
  // Occurrences of `context` followed by any predicted token.
  int64_t context_count(std::span<const std::string> context) const;
  int64_t total_tokens() const { return total_; }
  bool in_vocab(std::string_view word) const;
  size_t vocab_size() const { return vocab_.size(); }

  // Maps out-of-vocabulary words to the unknown sentinel.
  std::string map_word(std::string_view word) const;

  // Stupid-backoff score (not a normalized probability) of `word` after
  // `history` at `order`; only the last order-1 history items are used.
  double score(std::span<const std::string> history, const std::string& word, int order) const;

  // JSON count dump: {"format": "readrank-ngram", "version": 1, ...}.
  void save(std::ostream& out) const;
  static NgramModel load(std::istream& in);

  bool operator==(const NgramModel& other) const;

 private:
  friend NgramModel train_lm(const std::vector<std::vector<std::string>>&, const NgramOptions&);
  void add_ngram(const std::vector<std::string>& ngram, int64_t n);

  NgramOptions options_;
  // counts_[k-1]: k-gram -> count; contexts_[k-1]: (k-1)-gram prefix -> count.
  std::vector<std::unordered_map<std::string, int64_t>> counts_;
  std::vector<std::unordered_map<std::string, int64_t>> contexts_;
  std::unordered_set<std::string> vocab_;
  int64_t total_ = 0;
};

// Each line is padded with max_order-1 start sentinels and one end sentinel.
// Words seen once are replaced by the unknown sentinel.
NgramModel train_lm(const std::vector<std::vector<std::string>>& corpus,
                    const NgramOptions& options = {});

// Mean (or summed, per model metadata) log10 stupid-backoff score over the
// tokens plus the end sentinel, at order k.
double sentence_logprob(const NgramModel& model, std::span<const std::string> tokens, int order);

// lm_logprob_1 .. lm_logprob_<max_order> over lowercased tokens.
FeatureVector ngram_vector(const NgramModel& model, std::span<const Token> tokens);

// One sentence per line, run through the tokenizer and lowercased. Lines
// starting with '#' are comments.
std::vector<std::vector<std::string>> read_lm_corpus(std::istream& in);

}  // namespace readrank

#endif  // READRANK_NGRAMLM_H_
