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

#include "readrank/features.h"

#include <cmath>

#include "readrank/error.h"

namespace readrank {

namespace {

constexpr std::array<std::string_view, 10> kGroupNames = {
    "AoA",    "Syllables", "DaleChall", "ContentWord", "WordLen",
    "NgramL", "POS",       "SynTree",   "SynScore",    "SynOther",
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

std::string_view group_name(FeatureGroup group) { return kGroupNames[static_cast<size_t>(group)]; }

FeatureGroup parse_group(std::string_view name) {
  for (size_t i = 0; i < kGroupNames.size(); ++i) {
    if (kGroupNames[i] == name) return static_cast<FeatureGroup>(i);
  }
  throw PreconditionError("unknown feature group '" + std::string(name) + "'");
}

std::string_view base_feature_name(std::string_view name) {
  if (starts_with(name, "A:") || starts_with(name, "B:")) name.remove_prefix(2);
  if (starts_with(name, kContextPrefix)) name.remove_prefix(kContextPrefix.size());
  return name;
}

FeatureGroup group_of(std::string_view name) {
  const std::string_view base = base_feature_name(name);
  if (base == "aoa_avg" || base == "aoa_max" || base == "aoa_std" || base == "pct_not_in_aoa") {
    return FeatureGroup::kAoA;
  }
  if (base == "syll_avg" || base == "syll_max") return FeatureGroup::kSyllables;
  if (base == "dale_chall_pct") return FeatureGroup::kDaleChall;
  if (base == "content_word_pct") return FeatureGroup::kContentWord;
  if (base == "n_words" || base == "n_chars") return FeatureGroup::kWordLen;
  if (starts_with(base, "lm_logprob_")) return FeatureGroup::kNgramL;
  if (starts_with(base, kPosPrefix) || base == "pos_diversity") {
    return FeatureGroup::kPos;
  }
  if (starts_with(base, kSubtreePrefix)) return FeatureGroup::kSynTree;
  if (base == "parse_loglik" || base == "reranker_loglik") {
    return FeatureGroup::kSynScore;
  }
  if (base == "parse_height" || base == "parse_length") {
    return FeatureGroup::kSynOther;
  }
  throw PreconditionError("feature '" + std::string(name) + "' does not belong to a known group");
}

void FeatureVector::add(std::string name, FeatureGroup group, double value) {
  if (!std::isfinite(value)) {
    throw ValidationError("feature '" + name + "' is not finite");
  }
  if (index_.count(name)) {
    throw PreconditionError("duplicate feature name '" + name + "'");
  }
  index_.emplace(name, entries_.size());
  entries_.push_back({std::move(name), group, value});
}

void FeatureVector::accumulate(const std::string& name, FeatureGroup group, double delta) {
  auto it = index_.find(name);
  if (it == index_.end()) {
    add(name, group, delta);
  } else {
    entries_[it->second].value += delta;
  }
}

bool FeatureVector::contains(std::string_view name) const {
  return index_.count(std::string(name)) > 0;
}

std::optional<double> FeatureVector::get(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].value;
}

double FeatureVector::value_or_zero(std::string_view name) const { return get(name).value_or(0.0); }

void FeatureVector::append(const FeatureVector& other) {
  for (const auto& e : other.entries_) add(e.name, e.group, e.value);
}

FeatureVector FeatureVector::with_prefix(std::string_view prefix) const {
  FeatureVector out;
  for (const auto& e : entries_) {
    out.add(std::string(prefix) + e.name, e.group, e.value);
  }
  return out;
}

void FeatureVector::scale(double factor) {
  for (auto& e : entries_) e.value *= factor;
}

}  // namespace readrank
