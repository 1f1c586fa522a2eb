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

#ifndef READRANK_SYNFEAT_H_
#define READRANK_SYNFEAT_H_

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "readrank/error.h"
#include "readrank/features.h"

namespace readrank {

// Constituency tree. A leaf is a node without children whose label is the
// token; a preterminal is a node whose single child is a leaf.
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;

  bool is_leaf() const { return children.empty(); }
  bool is_preterminal() const { return children.size() == 1 && children[0].is_leaf(); }
  bool operator==(const ParseTree&) const = default;
};

class TreeSyntaxError : public ValidationError {
 public:
  TreeSyntaxError(const std::string& message, size_t offset)
      : ValidationError(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Parses "(LABEL child ...)" notation. An unlabeled outer bracket around a
// single tree, as in "( (S ...) )", is unwrapped.
ParseTree read_bracketed(std::string_view text);
std::string to_bracketed(const ParseTree& tree);

std::vector<std::string> tree_leaves(const ParseTree& tree);
std::vector<std::string> preterminal_tags(const ParseTree& tree);

// Productions "LHS -> RHS1 RHS2 ..." of every node above the preterminals.
std::vector<std::string> productions(const ParseTree& tree);

// pos_pct:<TAG> per tag plus pos_diversity.
FeatureVector pos_features(const ParseTree& tree);

// Height in non-token levels: 0 for a preterminal.
int syntactic_height(const ParseTree& node);

// Bracketed form of the subtree rooted at `node`, truncated `depth` levels
// below it, with token leaves removed. Nodes at the cut or with no
// non-token children print as bare labels.
std::string truncated_subtree(const ParseTree& node, int depth);

// syn:<canonical> occurrence counts. A depth-d subtree is rooted at every
// node whose syntactic height is at least d.
FeatureVector subtree_features(const ParseTree& tree,
                               std::span<const int> depths = std::span<const int>());

struct TreeShape {
  int height = 0;  // edges on the longest root-to-preterminal path
  int length = 0;  // number of preterminals
};
TreeShape tree_shape(const ParseTree& tree);

// Relative-frequency PCFG over unlexicalized productions.
class Pcfg {
 public:
  static constexpr double kDefaultFloor = -13.815510557964274;  // ln(1e-6)

  // Natural-log probability; unseen rules get the floor.
  double log_prob(const std::string& lhs, const std::string& rhs) const;
  double floor_logprob() const { return floor_; }
  const std::map<std::string, std::map<std::string, double>>& rules() const { return rules_; }

  void save(std::ostream& out) const;
  static Pcfg load(std::istream& in);

 private:
  friend Pcfg estimate_pcfg(std::span<const ParseTree>, double);
  std::map<std::string, std::map<std::string, double>> rules_;
  double floor_ = kDefaultFloor;
};

Pcfg estimate_pcfg(std::span<const ParseTree> trees, double floor_logprob = Pcfg::kDefaultFloor);

// Sum of the log probabilities of the tree's productions.
double tree_logprob(const Pcfg& pcfg, const ParseTree& tree);

// One bracketed tree per non-empty line; '#' lines are comments.
std::vector<ParseTree> read_treebank(std::istream& in);

}  // namespace readrank

#endif  // READRANK_SYNFEAT_H_
