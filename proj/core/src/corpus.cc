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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "readrank/error.h"
#include "readrank/format.h"
#include "readrank/random.h"

namespace readrank {

using nlohmann::json;

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : Error([&] {
        std::string msg;
        for (size_t i = 0; i < diagnostics.size(); ++i) {
          if (i) msg += '\n';
          msg += diagnostics[i];
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::string_view task_mode_name(TaskMode mode) {
  return mode == TaskMode::kSentenceOnly ? "sentence_only" : "in_passage";
}

TaskMode parse_task_mode(std::string_view name) {
  if (name == "sentence_only") return TaskMode::kSentenceOnly;
  if (name == "in_passage") return TaskMode::kInPassage;
  throw PreconditionError("unknown task mode '" + std::string(name) +
                          "' (expected sentence_only or in_passage)");
}

std::string_view choice_name(Choice c) {
  switch (c) {
    case Choice::kA:
      return "A";
    case Choice::kB:
      return "B";
    case Choice::kDraw:
      return "Draw";
  }
  return "?";
}

std::string_view order_name(Order o) { return o == Order::kAB ? "AB" : "BA"; }

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

struct CodePoint {
  uint32_t value;
  size_t offset;
  size_t length;
};

std::vector<CodePoint> decode_utf8(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    size_t len = 1;
    uint32_t cp = b0;
    if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    }
    if (len > 1) {
      bool ok = i + len <= s.size();
      for (size_t k = 1; ok && k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) ok = false;
        cp = (cp << 6) | (b & 0x3F);
      }
      if (!ok) {
        len = 1;
        cp = b0;
      }
    }
    out.push_back({cp, i, len});
    i += len;
  }
  return out;
}

bool is_space_cp(uint32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
         cp == 0xA0;
}

bool is_apostrophe_cp(uint32_t cp) { return cp == '\'' || cp == 0x2019; }

bool is_nonascii_punct(uint32_t cp) {
  switch (cp) {
    case 0x00AB:
    case 0x00BB:
    case 0x2013:
    case 0x2014:
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x2026:
      return true;
    default:
      return false;
  }
}

bool is_word_cp(uint32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  return !is_space_cp(cp) && !is_nonascii_punct(cp);
}

bool is_digit_cp(uint32_t cp) { return cp >= '0' && cp <= '9'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

}  // namespace

bool is_word(const Token& token) {
  for (const auto& cp : decode_utf8(token.surface)) {
    if (is_word_cp(cp.value)) return true;
  }
  return false;
}

int count_words(std::span<const Token> tokens) {
  return static_cast<int>(
      std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return is_word(t); }));
}

std::vector<Token> tokenize(std::string_view text) {
  const auto cps = decode_utf8(text);
  std::vector<Token> tokens;
  size_t word_begin = 0;
  size_t word_end = 0;
  bool in_word = false;
  uint32_t last_in_word = 0;

  auto emit = [&](size_t begin, size_t end) {
    std::string surface(text.substr(begin, end - begin));
    tokens.push_back({surface, ascii_lower(surface)});
  };
  auto flush = [&] {
    if (in_word) emit(word_begin, word_end);
    in_word = false;
  };

  for (size_t i = 0; i < cps.size(); ++i) {
    const auto& cp = cps[i];
    const uint32_t next = i + 1 < cps.size() ? cps[i + 1].value : 0;
    if (is_space_cp(cp.value)) {
      flush();
      continue;
    }
    if (is_word_cp(cp.value)) {
      if (!in_word) {
        in_word = true;
        word_begin = cp.offset;
      }
      word_end = cp.offset + cp.length;
      last_in_word = cp.value;
      continue;
    }
    const bool joiner =
        (is_apostrophe_cp(cp.value) || cp.value == '-') && in_word && is_word_cp(next);
    const bool numeric_sep = (cp.value == '.' || cp.value == ',') && in_word &&
                             is_digit_cp(last_in_word) && is_digit_cp(next);
    if (joiner || numeric_sep) {
      word_end = cp.offset + cp.length;
      last_in_word = cp.value;
      continue;
    }
    flush();
    emit(cp.offset, cp.offset + cp.length);
  }
  flush();
  return tokens;
}

// ---------------------------------------------------------------------------
// Lexicon

void Lexicon::add(std::string word, LexiconEntry entry) {
  if (!(entry.aoa > 0.0) || !std::isfinite(entry.aoa)) {
    throw ValidationError("lexicon entry '" + word + "': aoa_rating must be > 0");
  }
  if (entry.syllables < 1) {
    throw ValidationError("lexicon entry '" + word + "': n_syllables must be >= 1");
  }
  word = ascii_lower(word);
  if (!entries_.emplace(word, entry).second) {
    throw ValidationError("lexicon: duplicate word '" + word + "'");
  }
}

const LexiconEntry* Lexicon::find(std::string_view lower_word) const {
  auto it = entries_.find(lower_word);
  return it == entries_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

// Leaves of a bracketed tree are the atoms that do not directly follow '('.
int count_bracketed_leaves(std::string_view parse) {
  int leaves = 0;
  bool after_open = false;
  size_t i = 0;
  while (i < parse.size()) {
    const char c = parse[i];
    if (c == '(') {
      after_open = true;
      ++i;
    } else if (c == ')') {
      after_open = false;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      while (i < parse.size() && parse[i] != '(' && parse[i] != ')' &&
             !std::isspace(static_cast<unsigned char>(parse[i]))) {
        ++i;
      }
      if (!after_open) ++leaves;
      after_open = false;
    }
  }
  return leaves;
}

}  // namespace

void validate_sentence(const SentenceRecord& r, const ValidationOptions& options,
                       std::vector<std::string>& errors, std::vector<std::string>& warnings) {
  const std::string where = "sentence '" + r.id + "': ";
  auto& soft = options.paper_faithful ? errors : warnings;

  if (r.id.empty()) errors.push_back("sentence with empty id");
  if (r.grade_bin < 1 || r.grade_bin > kNumGradeBins) {
    errors.push_back(where + "grade_bin " + std::to_string(r.grade_bin) + " outside 1..6");
  }
  const int words = count_words(r.tokens);
  if (words < kMinSentenceWords || words > kMaxSentenceWords) {
    soft.push_back(where + std::to_string(words) + " words, outside the 6..20 window");
  }
  if (r.passage) {
    const auto& p = *r.passage;
    const int n = static_cast<int>(p.sentences.size());
    if (p.target_index < 0 || p.target_index >= n) {
      errors.push_back(where + "passage target_index " + std::to_string(p.target_index) +
                       " out of range");
    } else if (p.sentences[p.target_index] != r.text) {
      errors.push_back(where + "passage sentence at target_index differs from text");
    }
    if (!p.parses.empty() && static_cast<int>(p.parses.size()) != n) {
      errors.push_back(where + "passage parses must parallel passage sentences");
    }
    if (p.word_count < kMinPassageWords || p.word_count > kMaxPassageWords) {
      soft.push_back(where + "passage word_count " + std::to_string(p.word_count) +
                     " outside the 136..160 window");
    }
  }
  if (r.coref_chains) {
    if (!r.passage) {
      errors.push_back(where + "coref_chains present without passage");
    } else {
      const auto& sentences = r.passage->sentences;
      for (const auto& chain : *r.coref_chains) {
        for (const auto& m : chain) {
          if (m.sentence_index < 0 || m.sentence_index >= static_cast<int>(sentences.size())) {
            errors.push_back(where + "coref mention sentence_index " +
                             std::to_string(m.sentence_index) + " outside passage");
            continue;
          }
          const int ntok = static_cast<int>(tokenize(sentences[m.sentence_index]).size());
          if (m.token_start < 0 || m.token_start >= m.token_end || m.token_end > ntok) {
            errors.push_back(where + "coref mention span [" + std::to_string(m.token_start) + ", " +
                             std::to_string(m.token_end) + ") invalid for " + std::to_string(ntok) +
                             " tokens");
          }
        }
      }
    }
  }
  if (r.parse) {
    const int leaves = count_bracketed_leaves(*r.parse);
    if (leaves != static_cast<int>(r.tokens.size())) {
      soft.push_back(where + "parse has " + std::to_string(leaves) + " leaves but sentence has " +
                     std::to_string(r.tokens.size()) + " tokens");
    }
  }
}

// ---------------------------------------------------------------------------
// JSON conversion

namespace {

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) {
    throw std::invalid_argument(std::string("missing field '") + field + "'");
  }
  return *it;
}

template <typename T>
T get_as(const json& obj, const char* field) {
  const json& v = require(obj, field);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("field '") + field + "' has the wrong type");
  }
}

std::vector<Token> tokens_from_surfaces(const std::vector<std::string>& surfaces) {
  std::vector<Token> out;
  out.reserve(surfaces.size());
  for (const auto& s : surfaces) out.push_back({s, ascii_lower(s)});
  return out;
}

SentenceRecord sentence_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  SentenceRecord r;
  r.id = get_as<std::string>(j, "id");
  r.text = get_as<std::string>(j, "text");
  r.grade_bin = get_as<int>(j, "grade_bin");
  if (j.contains("tokens") && !j["tokens"].is_null()) {
    r.tokens = tokens_from_surfaces(get_as<std::vector<std::string>>(j, "tokens"));
  } else {
    r.tokens = tokenize(r.text);
  }
  if (j.contains("passage") && !j["passage"].is_null()) {
    const json& pj = j["passage"];
    PassageContext p;
    p.sentences = get_as<std::vector<std::string>>(pj, "sentences");
    p.target_index = get_as<int>(pj, "target_index");
    p.word_count = get_as<int>(pj, "word_count");
    if (pj.contains("parses") && !pj["parses"].is_null()) {
      p.parses = get_as<std::vector<std::string>>(pj, "parses");
    }
    r.passage = std::move(p);
  }
  if (j.contains("parse") && !j["parse"].is_null()) {
    r.parse = get_as<std::string>(j, "parse");
  }
  if (j.contains("parse_loglik") && !j["parse_loglik"].is_null()) {
    r.parse_loglik = get_as<double>(j, "parse_loglik");
  }
  if (j.contains("reranker_loglik") && !j["reranker_loglik"].is_null()) {
    r.reranker_loglik = get_as<double>(j, "reranker_loglik");
  }
  if (j.contains("coref_chains") && !j["coref_chains"].is_null()) {
    std::vector<CorefChain> chains;
    for (const auto& cj : require(j, "coref_chains")) {
      CorefChain chain;
      for (const auto& mj : cj) {
        if (!mj.is_array() || mj.size() != 3) {
          throw std::invalid_argument(
              "field 'coref_chains': each mention must be "
              "[sentence_index, token_start, token_end]");
        }
        chain.push_back({mj[0].get<int>(), mj[1].get<int>(), mj[2].get<int>()});
      }
      chains.push_back(std::move(chain));
    }
    r.coref_chains = std::move(chains);
  }
  return r;
}

json sentence_to_json(const SentenceRecord& r) {
  json j = json::object();
  j["id"] = r.id;
  j["text"] = r.text;
  json toks = json::array();
  for (const auto& t : r.tokens) toks.push_back(t.surface);
  j["tokens"] = std::move(toks);
  j["grade_bin"] = r.grade_bin;
  if (r.passage) {
    json pj = json::object();
    pj["sentences"] = r.passage->sentences;
    pj["target_index"] = r.passage->target_index;
    pj["word_count"] = r.passage->word_count;
    if (!r.passage->parses.empty()) pj["parses"] = r.passage->parses;
    j["passage"] = std::move(pj);
  }
  if (r.parse) j["parse"] = *r.parse;
  if (r.parse_loglik) j["parse_loglik"] = *r.parse_loglik;
  if (r.reranker_loglik) j["reranker_loglik"] = *r.reranker_loglik;
  if (r.coref_chains) {
    json chains = json::array();
    for (const auto& chain : *r.coref_chains) {
      json cj = json::array();
      for (const auto& m : chain) {
        cj.push_back({m.sentence_index, m.token_start, m.token_end});
      }
      chains.push_back(std::move(cj));
    }
    j["coref_chains"] = std::move(chains);
  }
  return j;
}

Choice parse_choice(const std::string& s, const char* field) {
  if (s == "A") return Choice::kA;
  if (s == "B") return Choice::kB;
  if (s == "Draw") return Choice::kDraw;
  throw std::invalid_argument(std::string("field '") + field + "': '" + s +
                              "' is not one of A, B, Draw");
}

JudgmentRecord judgment_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  JudgmentRecord r;
  r.pair_id = get_as<std::string>(j, "pair_id");
  r.sent_a = get_as<std::string>(j, "sent_a");
  r.sent_b = get_as<std::string>(j, "sent_b");
  r.worker_id = get_as<std::string>(j, "worker_id");
  r.choice = parse_choice(get_as<std::string>(j, "choice"), "choice");
  const auto order = get_as<std::string>(j, "presentation_order");
  if (order == "AB") {
    r.presentation_order = Order::kAB;
  } else if (order == "BA") {
    r.presentation_order = Order::kBA;
  } else {
    throw std::invalid_argument("field 'presentation_order': '" + order + "' is not AB or BA");
  }
  r.is_gold = get_as<bool>(j, "is_gold");
  if (j.contains("gold_answer") && !j["gold_answer"].is_null()) {
    const Choice g = parse_choice(get_as<std::string>(j, "gold_answer"), "gold_answer");
    if (g == Choice::kDraw) {
      throw std::invalid_argument("field 'gold_answer': must be A or B");
    }
    r.gold_answer = g;
  }
  if (r.sent_a == r.sent_b) {
    throw std::invalid_argument("field 'sent_b': equals sent_a");
  }
  if (r.is_gold && !r.gold_answer) {
    throw std::invalid_argument("field 'gold_answer': required when is_gold is true");
  }
  if (!r.is_gold && r.gold_answer) {
    throw std::invalid_argument("field 'gold_answer': present but is_gold is false");
  }
  return r;
}

json judgment_to_json(const JudgmentRecord& r) {
  json j = json::object();
  j["pair_id"] = r.pair_id;
  j["sent_a"] = r.sent_a;
  j["sent_b"] = r.sent_b;
  j["worker_id"] = r.worker_id;
  j["choice"] = std::string(choice_name(r.choice));
  j["presentation_order"] = std::string(order_name(r.presentation_order));
  j["is_gold"] = r.is_gold;
  if (r.gold_answer) j["gold_answer"] = std::string(choice_name(*r.gold_answer));
  return j;
}

std::string located(std::string_view source, size_t line, const std::string& what) {
  return std::string(source) + ":" + std::to_string(line) + ": " + what;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input file '" + path.string() + "'");
  return in;
}

}  // namespace

std::string sentence_to_json_line(const SentenceRecord& record) {
  return sentence_to_json(record).dump();
}

std::string judgment_to_json_line(const JudgmentRecord& record) {
  return judgment_to_json(record).dump();
}

std::vector<SentenceRecord> read_sentences(std::istream& in, std::string_view source,
                                           const ValidationOptions& options,
                                           std::vector<std::string>* warnings) {
  std::vector<SentenceRecord> records;
  std::vector<std::string> errors;
  std::vector<std::string> soft;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    SentenceRecord r;
    try {
      r = sentence_from_json(json::parse(line));
    } catch (const json::parse_error& e) {
      errors.push_back(located(source, lineno, std::string("malformed JSON: ") + e.what()));
      continue;
    } catch (const std::exception& e) {
      errors.push_back(located(source, lineno, e.what()));
      continue;
    }
    if (!seen.insert(r.id).second) {
      errors.push_back(located(source, lineno, "duplicate sentence id '" + r.id + "'"));
      continue;
    }
    std::vector<std::string> rec_errors;
    std::vector<std::string> rec_warnings;
    validate_sentence(r, options, rec_errors, rec_warnings);
    for (auto& e : rec_errors) errors.push_back(located(source, lineno, e));
    for (auto& w : rec_warnings) soft.push_back(located(source, lineno, w));
    records.push_back(std::move(r));
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  if (warnings) warnings->insert(warnings->end(), soft.begin(), soft.end());
  return records;
}

std::vector<JudgmentRecord> read_judgments(std::istream& in, std::string_view source) {
  std::vector<JudgmentRecord> records;
  std::vector<std::string> errors;
  // pair_id -> index of the first record naming it, and its line.
  std::unordered_map<std::string, std::pair<size_t, size_t>> first;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    try {
      JudgmentRecord r = judgment_from_json(json::parse(line));
      auto [it, inserted] = first.emplace(r.pair_id, std::make_pair(records.size(), lineno));
      if (!inserted) {
        const JudgmentRecord& f = records[it->second.first];
        if (f.sent_a != r.sent_a || f.sent_b != r.sent_b) {
          errors.push_back(located(source, lineno,
                                   "pair '" + r.pair_id + "' lists sentences '" + r.sent_a +
                                       "', '" + r.sent_b + "' but line " +
                                       std::to_string(it->second.second) + " lists '" + f.sent_a +
                                       "', '" + f.sent_b + "'"));
        }
      }
      records.push_back(std::move(r));
    } catch (const json::parse_error& e) {
      errors.push_back(located(source, lineno, std::string("malformed JSON: ") + e.what()));
    } catch (const std::exception& e) {
      errors.push_back(located(source, lineno, e.what()));
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return records;
}

Lexicon read_lexicon(std::istream& in, std::string_view source) {
  Lexicon lex;
  std::vector<std::string> errors;
  std::string line;
  size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_csv(t);
    if (!header_seen) {
      header_seen = true;
      if (fields != std::vector<std::string>{"word", "aoa_rating", "n_syllables"}) {
        errors.push_back(located(source, lineno, "expected header 'word,aoa_rating,n_syllables'"));
      }
      continue;
    }
    if (fields.size() != 3 || fields[0].empty()) {
      errors.push_back(located(source, lineno, "expected 3 fields: word,aoa_rating,n_syllables"));
      continue;
    }
    LexiconEntry entry;
    try {
      size_t pos = 0;
      entry.aoa = std::stod(fields[1], &pos);
      if (pos != fields[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      errors.push_back(located(source, lineno, "field 'aoa_rating': not a number"));
      continue;
    }
    try {
      size_t pos = 0;
      entry.syllables = std::stoi(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      errors.push_back(located(source, lineno, "field 'n_syllables': not an integer"));
      continue;
    }
    try {
      lex.add(fields[0], entry);
    } catch (const ValidationError& e) {
      errors.push_back(located(source, lineno, e.what()));
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return lex;
}

WordSet read_wordlist(std::istream& in, WordRole role) {
  WordSet set;
  set.role = role;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    set.words.insert(ascii_lower(t));
  }
  return set;
}

std::vector<SentenceRecord> load_sentences(const std::filesystem::path& path,
                                           const ValidationOptions& options,
                                           std::vector<std::string>* warnings) {
  auto in = open_or_throw(path);
  return read_sentences(in, path.string(), options, warnings);
}

std::vector<JudgmentRecord> load_judgments(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_judgments(in, path.string());
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_lexicon(in, path.string());
}

WordSet load_wordlist(const std::filesystem::path& path, WordRole role) {
  auto in = open_or_throw(path);
  return read_wordlist(in, role);
}

void write_sentences(std::ostream& out, std::span<const SentenceRecord> records) {
  for (const auto& r : records) out << sentence_to_json_line(r) << '\n';
}

void write_judgments(std::ostream& out, std::span<const JudgmentRecord> records) {
  for (const auto& r : records) out << judgment_to_json_line(r) << '\n';
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  out << "word,aoa_rating,n_syllables\n";
  for (const auto& [word, e] : lexicon.entries()) {
    out << word << ',' << format_double(e.aoa) << ',' << e.syllables << '\n';
  }
}

void write_wordlist(std::ostream& out, const WordSet& words) {
  out << (words.role == WordRole::kDaleChall ? "# dale-chall\n" : "# stopwords\n");
  for (const auto& w : words.words) out << w << '\n';
}

// ---------------------------------------------------------------------------
// Pair generation and splitting

std::vector<SentencePair> generate_pairs(std::span<const SentenceRecord> sentences, uint64_t seed,
                                         int blocks) {
  if (blocks < 1) throw PreconditionError("generate_pairs: blocks must be >= 1");
  std::vector<std::vector<std::string>> bins(kNumGradeBins);
  for (const auto& s : sentences) {
    if (s.grade_bin < 1 || s.grade_bin > kNumGradeBins) {
      throw ValidationError("sentence '" + s.id + "': grade_bin outside 1..6");
    }
    bins[s.grade_bin - 1].push_back(s.id);
  }
  size_t largest = 0;
  for (const auto& b : bins) largest = std::max(largest, b.size());
  for (int b = 0; b < kNumGradeBins; ++b) {
    if (bins[b].empty() || bins[b].size() < largest) {
      throw ValidationError("generate_pairs: bin " + std::to_string(b + 1) + " has " +
                            std::to_string(bins[b].size()) + " sentences; every bin needs " +
                            std::to_string(std::max<size_t>(largest, 1)));
    }
  }
  const size_t per_bin = largest;
  if (per_bin % static_cast<size_t>(blocks) != 0) {
    throw ValidationError("generate_pairs: " + std::to_string(per_bin) +
                          " sentences per bin cannot be cut into " + std::to_string(blocks) +
                          " blocks");
  }
  const size_t per_block = per_bin / blocks;

  Rng rng(seed);
  for (auto& b : bins) rng.shuffle(std::span<std::string>(b));

  std::vector<SentencePair> pairs;
  pairs.reserve(per_bin * kNumGradeBins * (kNumGradeBins - 1) / 2);
  std::vector<size_t> perm(per_block);
  for (int i = 0; i < kNumGradeBins; ++i) {
    for (int j = i + 1; j < kNumGradeBins; ++j) {
      for (int g = 0; g < blocks; ++g) {
        std::iota(perm.begin(), perm.end(), size_t{0});
        rng.shuffle(std::span<size_t>(perm));
        for (size_t k = 0; k < per_block; ++k) {
          const auto& a = bins[i][g * per_block + k];
          const auto& b = bins[j][g * per_block + perm[k]];
          SentencePair p;
          if (rng.bernoulli(0.5)) {
            p.sent_a = a;
            p.sent_b = b;
          } else {
            p.sent_a = b;
            p.sent_b = a;
          }
          pairs.push_back(std::move(p));
        }
      }
    }
  }
  const int width = std::max<int>(4, std::to_string(pairs.size()).size());
  for (size_t k = 0; k < pairs.size(); ++k) {
    std::string num = std::to_string(k + 1);
    pairs[k].pair_id = "p" + std::string(width - num.size(), '0') + num;
  }
  return pairs;
}

std::vector<SentencePair> pairs_from_judgments(std::span<const JudgmentRecord> judgments) {
  std::vector<SentencePair> pairs;
  std::unordered_map<std::string, size_t> index;
  for (const auto& j : judgments) {
    if (j.is_gold) continue;
    auto [it, inserted] = index.emplace(j.pair_id, pairs.size());
    if (inserted) {
      pairs.push_back({j.pair_id, j.sent_a, j.sent_b});
      continue;
    }
    const auto& p = pairs[it->second];
    if (p.sent_a != j.sent_a || p.sent_b != j.sent_b) {
      throw ValidationError("pair '" + j.pair_id +
                            "' lists different sentences or a different order across judgments");
    }
  }
  return pairs;
}

namespace {

struct PairGraph {
  std::vector<std::string> ids;  // sorted
  std::unordered_map<std::string, size_t> index;
  std::vector<std::vector<size_t>> adj;
  std::vector<std::pair<size_t, size_t>> edges;
};

PairGraph build_graph(std::span<const SentencePair> pairs) {
  PairGraph g;
  for (const auto& p : pairs) {
    g.ids.push_back(p.sent_a);
    g.ids.push_back(p.sent_b);
  }
  std::sort(g.ids.begin(), g.ids.end());
  g.ids.erase(std::unique(g.ids.begin(), g.ids.end()), g.ids.end());
  for (size_t i = 0; i < g.ids.size(); ++i) g.index[g.ids[i]] = i;
  g.adj.resize(g.ids.size());
  for (const auto& p : pairs) {
    const size_t a = g.index[p.sent_a];
    const size_t b = g.index[p.sent_b];
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
    g.edges.emplace_back(a, b);
  }
  return g;
}

std::vector<std::vector<size_t>> components(const PairGraph& g) {
  std::vector<int> comp(g.ids.size(), -1);
  std::vector<std::vector<size_t>> out;
  for (size_t s = 0; s < g.ids.size(); ++s) {
    if (comp[s] >= 0) continue;
    out.emplace_back();
    std::vector<size_t> stack{s};
    comp[s] = static_cast<int>(out.size() - 1);
    while (!stack.empty()) {
      const size_t u = stack.back();
      stack.pop_back();
      out.back().push_back(u);
      for (size_t v : g.adj[u]) {
        if (comp[v] < 0) {
          comp[v] = comp[s];
          stack.push_back(v);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

}  // namespace

Split split_by_sentence(std::span<const SentencePair> pairs, const SplitOptions& options) {
  if (!(options.fraction > 0.0 && options.fraction < 1.0)) {
    throw PreconditionError("split_by_sentence: fraction must be in (0, 1)");
  }
  if (pairs.empty()) throw PreconditionError("split_by_sentence: no pairs");
  const PairGraph g = build_graph(pairs);
  const auto comps = components(g);
  const size_t n = g.ids.size();
  const auto target_sentences =
      static_cast<size_t>(std::llround(options.fraction * static_cast<double>(n)));
  const auto target_pairs =
      static_cast<size_t>(std::llround(options.fraction * static_cast<double>(pairs.size())));

  std::vector<char> best_held;
  size_t best_pairs = 0;
  size_t best_sentences = 0;
  long best_score = 0;
  bool have_best = false;

  const int attempts = std::max(1, options.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Rng rng(derive_seed(options.seed, static_cast<uint64_t>(attempt)));
    std::vector<char> held(n, 0);
    size_t count = 0;
    std::vector<size_t> order(comps.size());
    std::iota(order.begin(), order.end(), size_t{0});
    rng.shuffle(std::span<size_t>(order));
    for (size_t c : order) {
      if (count + comps[c].size() <= target_sentences) {
        for (size_t u : comps[c]) held[u] = 1;
        count += comps[c].size();
      }
    }
    // Top up by breadth-first growth so the extra sentences stay connected.
    while (count < target_sentences) {
      std::vector<size_t> free_nodes;
      for (size_t u = 0; u < n; ++u) {
        if (!held[u]) free_nodes.push_back(u);
      }
      std::vector<size_t> queue{free_nodes[rng.uniform_int(free_nodes.size())]};
      held[queue[0]] = 1;
      ++count;
      for (size_t qi = 0; qi < queue.size() && count < target_sentences; ++qi) {
        std::vector<size_t> nbrs = g.adj[queue[qi]];
        rng.shuffle(std::span<size_t>(nbrs));
        for (size_t v : nbrs) {
          if (count >= target_sentences) break;
          if (!held[v]) {
            held[v] = 1;
            ++count;
            queue.push_back(v);
          }
        }
      }
    }
    size_t test_pairs = 0;
    for (const auto& [a, b] : g.edges) test_pairs += (held[a] && held[b]);
    const long score = -static_cast<long>(test_pairs > target_pairs ? test_pairs - target_pairs
                                                                    : target_pairs - test_pairs);
    if (!have_best || score > best_score) {
      have_best = true;
      best_score = score;
      best_held = held;
      best_pairs = test_pairs;
      best_sentences = count;
    }
    if (test_pairs == target_pairs && count == target_sentences) break;
  }

  if (options.require_target &&
      (best_pairs != target_pairs || best_sentences != target_sentences)) {
    throw Error("split_by_sentence: target of " + std::to_string(target_pairs) +
                " test pairs over " + std::to_string(target_sentences) +
                " held-out sentences not reached after " + std::to_string(attempts) +
                " attempts; best was " + std::to_string(best_pairs) + " pairs over " +
                std::to_string(best_sentences) + " sentences");
  }

  Split split;
  for (size_t u = 0; u < n; ++u) {
    if (best_held[u]) split.held_out.push_back(g.ids[u]);
  }
  for (size_t k = 0; k < pairs.size(); ++k) {
    const bool a = best_held[g.edges[k].first];
    const bool b = best_held[g.edges[k].second];
    if (a && b) {
      split.test.push_back(pairs[k]);
    } else if (!a && !b) {
      split.train.push_back(pairs[k]);
    }
  }
  return split;
}

}  // namespace readrank
