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

#ifndef READRANK_FEATURES_H_
#define READRANK_FEATURES_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace readrank {

// The ten feature groups used for group-level importance.
enum class FeatureGroup {
  kAoA,
  kSyllables,
  kDaleChall,
  kContentWord,
  kWordLen,
  kNgramL,
  kPos,
  kSynTree,
  kSynScore,
  kSynOther,
};

inline constexpr std::array<FeatureGroup, 10> kAllFeatureGroups = {
    FeatureGroup::kAoA,         FeatureGroup::kSyllables, FeatureGroup::kDaleChall,
    FeatureGroup::kContentWord, FeatureGroup::kWordLen,   FeatureGroup::kNgramL,
    FeatureGroup::kPos,         FeatureGroup::kSynTree,   FeatureGroup::kSynScore,
    FeatureGroup::kSynOther,
};

std::string_view group_name(FeatureGroup group);
FeatureGroup parse_group(std::string_view name);

// Prefixes used in names.
inline constexpr std::string_view kContextPrefix = "ctx:";
inline constexpr std::string_view kPosPrefix = "pos_pct:";
inline constexpr std::string_view kSubtreePrefix = "syn:";

// Strips "A:"/"B:" and "ctx:" prefixes.
std::string_view base_feature_name(std::string_view name);

// Group of a feature from its name. Throws PreconditionError for names that
// follow no known convention.
FeatureGroup group_of(std::string_view name);

// Named, group-tagged real-valued features in insertion order.
class FeatureVector {
 public:
  struct Entry {
    std::string name;
    FeatureGroup group;
    double value;
  };

  // Throws on duplicate names or non-finite values.
  void add(std::string name, FeatureGroup group, double value);
  // Adds `delta` to an existing entry or inserts it.
  void accumulate(const std::string& name, FeatureGroup group, double delta);

  bool contains(std::string_view name) const;
  std::optional<double> get(std::string_view name) const;
  double value_or_zero(std::string_view name) const;

  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  void append(const FeatureVector& other);
  FeatureVector with_prefix(std::string_view prefix) const;
  void scale(double factor);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> index_;
};

}  // namespace readrank

#endif  // READRANK_FEATURES_H_
