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

#include "readrank/ngramlm.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "readrank/error.h"

namespace readrank {

namespace {

constexpr char kSep = '\x1f';

std::string join_key(std::span<const std::string> items) {
  std::string key;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) key += kSep;
    key += items[i];
  }
  return key;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = key.find(kSep, start);
    out.push_back(key.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

int64_t lookup(const std::unordered_map<std::string, int64_t>& table, const std::string& key) {
  auto it = table.find(key);
  return it == table.end() ? 0 : it->second;
}

}  // namespace

int64_t NgramModel::count(std::span<const std::string> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > max_order()) return 0;
  return lookup(counts_[ngram.size() - 1], join_key(ngram));
}

int64_t NgramModel::context_count(std::span<const std::string> context) const {
  if (context.empty()) return total_;
  if (static_cast<int>(context.size()) >= max_order()) return 0;
  return lookup(contexts_[context.size()], join_key(context));
}

bool NgramModel::in_vocab(std::string_view word) const {
  return vocab_.count(std::string(word)) > 0;
}

std::string NgramModel::map_word(std::string_view word) const {
  if (in_vocab(word)) return std::string(word);
  return std::string(kUnknownWord);
}

void NgramModel::add_ngram(const std::vector<std::string>& ngram, int64_t n) {
  const size_t k = ngram.size();
  counts_[k - 1][join_key(ngram)] += n;
  contexts_[k - 1][join_key(std::span(ngram).first(k - 1))] += n;
  if (k == 1) total_ += n;
}

double NgramModel::score(std::span<const std::string> history, const std::string& word,
                         int order) const {
  double multiplier = 1.0;
  for (int k = order; k >= 2; --k) {
    const size_t ctx_len = static_cast<size_t>(k - 1);
    if (history.size() < ctx_len) continue;
    std::vector<std::string> ngram(history.end() - ctx_len, history.end());
    ngram.push_back(word);
    const int64_t c = count(ngram);
    if (c > 0) {
      const int64_t ctx = context_count(std::span(ngram).first(ctx_len));
      return multiplier * static_cast<double>(c) / static_cast<double>(ctx);
    }
    multiplier *= backoff_alpha();
  }
  const std::vector<std::string> uni{word};
  int64_t c = count(uni);
  // A zero unigram count (an unknown word when training had no singletons)
  // gets half a pseudo-count so the log score stays finite.
  const double numerator = c > 0 ? static_cast<double>(c) : 0.5;
  return multiplier * numerator / static_cast<double>(total_);
}

void NgramModel::save(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["format"] = "readrank-ngram";
  j["version"] = 1;
  j["max_order"] = options_.max_order;
  j["backoff_alpha"] = options_.backoff_alpha;
  j["length_normalized"] = options_.length_normalized;
  std::vector<std::string> vocab(vocab_.begin(), vocab_.end());
  std::sort(vocab.begin(), vocab.end());
  j["vocab"] = vocab;
  nlohmann::ordered_json orders = nlohmann::ordered_json::array();
  for (int k = 1; k <= max_order(); ++k) {
    std::map<std::string, int64_t> sorted(counts_[k - 1].begin(), counts_[k - 1].end());
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& [key, c] : sorted) rows.push_back({split_key(key), c});
    orders.push_back({{"order", k}, {"ngrams", std::move(rows)}});
  }
  j["orders"] = std::move(orders);
  out << j.dump() << '\n';
}

NgramModel NgramModel::load(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("language model: malformed JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "readrank-ngram" || j.at("version").get<int>() != 1) {
      throw ValidationError("language model: unsupported format or version");
    }
    NgramModel m;
    m.options_.max_order = j.at("max_order").get<int>();
    m.options_.backoff_alpha = j.at("backoff_alpha").get<double>();
    m.options_.length_normalized = j.at("length_normalized").get<bool>();
    if (m.options_.max_order < 1 || m.options_.max_order > 5) {
      throw ValidationError("language model: max_order outside 1..5");
    }
    m.counts_.resize(m.options_.max_order);
    m.contexts_.resize(m.options_.max_order);
    for (const auto& w : j.at("vocab")) m.vocab_.insert(w.get<std::string>());
    for (const auto& oj : j.at("orders")) {
      const int k = oj.at("order").get<int>();
      for (const auto& row : oj.at("ngrams")) {
        auto ngram = row.at(0).get<std::vector<std::string>>();
        const auto c = row.at(1).get<int64_t>();
        if (static_cast<int>(ngram.size()) != k || c < 0) {
          throw ValidationError("language model: bad entry in order " + std::to_string(k));
        }
        m.add_ngram(ngram, c);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("language model: ") + e.what());
  }
}

bool NgramModel::operator==(const NgramModel& o) const {
  return options_.max_order == o.options_.max_order &&
         options_.backoff_alpha == o.options_.backoff_alpha &&
         options_.length_normalized == o.options_.length_normalized && counts_ == o.counts_ &&
         contexts_ == o.contexts_ && vocab_ == o.vocab_ && total_ == o.total_;
}

NgramModel train_lm(const std::vector<std::vector<std::string>>& corpus,
                    const NgramOptions& options) {
  if (options.max_order < 1 || options.max_order > 5) {
    throw PreconditionError("train_lm: max_order must be in 1..5");
  }
  if (!(options.backoff_alpha > 0.0 && options.backoff_alpha <= 1.0)) {
    throw PreconditionError("train_lm: backoff_alpha must be in (0, 1]");
  }
  if (corpus.empty()) throw PreconditionError("train_lm: empty corpus");

  std::unordered_map<std::string, int64_t> freq;
  for (const auto& line : corpus) {
    for (const auto& w : line) ++freq[w];
  }

  NgramModel m;
  m.options_ = options;
  m.counts_.resize(options.max_order);
  m.contexts_.resize(options.max_order);
  m.vocab_.insert(std::string(kSentenceStart));
  m.vocab_.insert(std::string(kSentenceEnd));
  m.vocab_.insert(std::string(kUnknownWord));
  for (const auto& [w, c] : freq) {
    if (c >= 2) m.vocab_.insert(w);
  }

  const int pad = options.max_order - 1;
  for (const auto& line : corpus) {
    std::vector<std::string> seq(pad, std::string(kSentenceStart));
    for (const auto& w : line) seq.push_back(m.map_word(w));
    seq.push_back(std::string(kSentenceEnd));
    for (size_t i = pad; i < seq.size(); ++i) {
      for (int k = 1; k <= options.max_order; ++k) {
        std::vector<std::string> ngram(seq.begin() + (i + 1 - k), seq.begin() + i + 1);
        m.add_ngram(ngram, 1);
      }
    }
  }
  return m;
}

double sentence_logprob(const NgramModel& model, std::span<const std::string> tokens, int order) {
  if (order < 1 || order > model.max_order()) {
    throw PreconditionError("sentence_logprob: order " + std::to_string(order) + " outside 1.." +
                            std::to_string(model.max_order()));
  }
  const int pad = model.max_order() - 1;
  std::vector<std::string> seq(pad, std::string(kSentenceStart));
  for (const auto& w : tokens) seq.push_back(model.map_word(w));
  seq.push_back(std::string(kSentenceEnd));
  double total = 0.0;
  size_t positions = 0;
  for (size_t i = pad; i < seq.size(); ++i) {
    const std::span<const std::string> history(seq.data(), i);
    total += std::log10(model.score(history, seq[i], order));
    ++positions;
  }
  return model.length_normalized() ? total / static_cast<double>(positions) : total;
}

FeatureVector ngram_vector(const NgramModel& model, std::span<const Token> tokens) {
  std::vector<std::string> words;
  words.reserve(tokens.size());
  for (const auto& t : tokens) words.push_back(t.lower);
  FeatureVector v;
  for (int k = 1; k <= model.max_order(); ++k) {
    v.add("lm_logprob_" + std::to_string(k), FeatureGroup::kNgramL,
          sentence_logprob(model, words, k));
  }
  return v;
}

std::vector<std::vector<std::string>> read_lm_corpus(std::istream& in) {
  std::vector<std::vector<std::string>> corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') continue;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    std::vector<std::string> words;
    words.reserve(tokens.size());
    for (auto& t : tokens) words.push_back(std::move(t.lower));
    corpus.push_back(std::move(words));
  }
  return corpus;
}

}  // namespace readrank
