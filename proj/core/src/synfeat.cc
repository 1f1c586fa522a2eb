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

#include "readrank/synfeat.h"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>

#include "json.hpp"
#include "readrank/format.h"

namespace readrank {

namespace {

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  ParseTree read_top() {
    skip_space();
    if (pos_ >= text_.size()) throw TreeSyntaxError("empty tree", pos_);
    ParseTree tree = read_node();
    skip_space();
    if (pos_ != text_.size()) {
      throw TreeSyntaxError("trailing characters after tree", pos_);
    }
    // "( (S ...) )" wrapper.
    if (tree.label.empty()) {
      if (tree.children.size() != 1 || tree.children[0].is_leaf()) {
        throw TreeSyntaxError("unlabeled constituent", 0);
      }
      ParseTree inner = std::move(tree.children[0]);
      return inner;
    }
    return tree;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string read_atom() {
    const size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  ParseTree read_node() {
    const size_t open = pos_;
    if (text_[pos_] != '(') throw TreeSyntaxError("expected '('", pos_);
    ++pos_;
    skip_space();
    if (pos_ >= text_.size()) throw TreeSyntaxError("unbalanced '('", open);
    ParseTree node;
    if (text_[pos_] != '(' && text_[pos_] != ')') node.label = read_atom();
    const bool top_wrapper = node.label.empty() && depth_ == 0;
    if (node.label.empty() && !top_wrapper) {
      throw TreeSyntaxError("constituent without a label", open);
    }
    ++depth_;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) throw TreeSyntaxError("unbalanced '('", open);
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (text_[pos_] == '(') {
        node.children.push_back(read_node());
      } else {
        const size_t at = pos_;
        ParseTree leaf;
        leaf.label = read_atom();
        if (!node.children.empty()) {
          throw TreeSyntaxError("token must be the only child of its tag", at);
        }
        node.children.push_back(std::move(leaf));
        skip_space();
        if (pos_ < text_.size() && text_[pos_] != ')') {
          throw TreeSyntaxError("token must be the only child of its tag", pos_);
        }
      }
    }
    --depth_;
    if (node.children.empty()) throw TreeSyntaxError("empty constituent", open);
    return node;
  }

  std::string_view text_;
  size_t pos_ = 0;
  int depth_ = 0;
};

void print(const ParseTree& t, std::string& out) {
  if (t.is_leaf()) {
    out += t.label;
    return;
  }
  out += '(';
  out += t.label;
  for (const auto& c : t.children) {
    out += ' ';
    print(c, out);
  }
  out += ')';
}

template <typename Fn>
void visit(const ParseTree& t, Fn&& fn) {
  fn(t);
  for (const auto& c : t.children) visit(c, fn);
}

bool has_syntactic_children(const ParseTree& t) { return !t.is_leaf() && !t.is_preterminal(); }

std::string rhs_of(const ParseTree& t) {
  std::string rhs;
  for (size_t i = 0; i < t.children.size(); ++i) {
    if (i) rhs += ' ';
    rhs += t.children[i].label;
  }
  return rhs;
}

void truncated(const ParseTree& t, int depth, std::string& out) {
  if (depth == 0 || !has_syntactic_children(t)) {
    out += t.label;
    return;
  }
  out += '(';
  out += t.label;
  for (const auto& c : t.children) {
    out += ' ';
    truncated(c, depth - 1, out);
  }
  out += ')';
}

int longest_path(const ParseTree& t) {
  if (t.is_preterminal() || t.is_leaf()) return 0;
  int best = 0;
  for (const auto& c : t.children) best = std::max(best, longest_path(c));
  return best + 1;
}

}  // namespace

ParseTree read_bracketed(std::string_view text) { return BracketReader(text).read_top(); }

std::string to_bracketed(const ParseTree& tree) {
  std::string out;
  print(tree, out);
  return out;
}

std::vector<std::string> tree_leaves(const ParseTree& tree) {
  std::vector<std::string> out;
  visit(tree, [&](const ParseTree& n) {
    if (n.is_leaf()) out.push_back(n.label);
  });
  return out;
}

std::vector<std::string> preterminal_tags(const ParseTree& tree) {
  std::vector<std::string> out;
  visit(tree, [&](const ParseTree& n) {
    if (n.is_preterminal()) out.push_back(n.label);
  });
  return out;
}

std::vector<std::string> productions(const ParseTree& tree) {
  std::vector<std::string> out;
  visit(tree, [&](const ParseTree& n) {
    if (has_syntactic_children(n)) out.push_back(n.label + " -> " + rhs_of(n));
  });
  return out;
}

FeatureVector pos_features(const ParseTree& tree) {
  std::map<std::string, int> counts;
  int total = 0;
  for (const auto& tag : preterminal_tags(tree)) {
    ++counts[tag];
    ++total;
  }
  FeatureVector v;
  v.add("pos_diversity", FeatureGroup::kPos, static_cast<double>(counts.size()));
  for (const auto& [tag, c] : counts) {
    v.add(std::string(kPosPrefix) + tag, FeatureGroup::kPos, static_cast<double>(c) / total);
  }
  return v;
}

int syntactic_height(const ParseTree& node) {
  if (!has_syntactic_children(node)) return 0;
  int best = 0;
  for (const auto& c : node.children) best = std::max(best, syntactic_height(c));
  return best + 1;
}

std::string truncated_subtree(const ParseTree& node, int depth) {
  std::string out;
  truncated(node, depth, out);
  return out;
}

FeatureVector subtree_features(const ParseTree& tree, std::span<const int> depths) {
  static constexpr int kDefaultDepths[] = {1, 2, 3};
  if (depths.empty()) depths = kDefaultDepths;
  std::map<std::string, int> counts;
  visit(tree, [&](const ParseTree& n) {
    if (n.is_leaf()) return;
    const int h = syntactic_height(n);
    for (int d : depths) {
      if (d >= 1 && h >= d) ++counts[truncated_subtree(n, d)];
    }
  });
  FeatureVector v;
  for (const auto& [shape, c] : counts) {
    v.add(std::string(kSubtreePrefix) + shape, FeatureGroup::kSynTree, c);
  }
  return v;
}

TreeShape tree_shape(const ParseTree& tree) {
  TreeShape s;
  s.height = longest_path(tree);
  s.length = static_cast<int>(preterminal_tags(tree).size());
  return s;
}

double Pcfg::log_prob(const std::string& lhs, const std::string& rhs) const {
  auto it = rules_.find(lhs);
  if (it == rules_.end()) return floor_;
  auto jt = it->second.find(rhs);
  return jt == it->second.end() ? floor_ : jt->second;
}

void Pcfg::save(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["format"] = "readrank-pcfg";
  j["version"] = 1;
  j["floor_logprob"] = floor_;
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const auto& [lhs, rhss] : rules_) {
    for (const auto& [rhs, lp] : rhss) rules.push_back({lhs, rhs, lp});
  }
  j["rules"] = std::move(rules);
  out << j.dump() << '\n';
}

Pcfg Pcfg::load(std::istream& in) {
  try {
    nlohmann::json j;
    in >> j;
    if (j.at("format").get<std::string>() != "readrank-pcfg") {
      throw ValidationError("pcfg: unsupported format");
    }
    Pcfg p;
    p.floor_ = j.at("floor_logprob").get<double>();
    for (const auto& r : j.at("rules")) {
      p.rules_[r.at(0).get<std::string>()][r.at(1).get<std::string>()] = r.at(2).get<double>();
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("pcfg: ") + e.what());
  }
}

Pcfg estimate_pcfg(std::span<const ParseTree> trees, double floor_logprob) {
  if (trees.empty()) throw PreconditionError("estimate_pcfg: empty treebank");
  std::map<std::string, std::map<std::string, long>> counts;
  for (const auto& t : trees) {
    visit(t, [&](const ParseTree& n) {
      if (has_syntactic_children(n)) ++counts[n.label][rhs_of(n)];
    });
  }
  Pcfg p;
  p.floor_ = floor_logprob;
  for (const auto& [lhs, rhss] : counts) {
    long total = 0;
    for (const auto& [rhs, c] : rhss) total += c;
    for (const auto& [rhs, c] : rhss) {
      p.rules_[lhs][rhs] = std::log(static_cast<double>(c) / static_cast<double>(total));
    }
  }
  return p;
}

double tree_logprob(const Pcfg& pcfg, const ParseTree& tree) {
  double total = 0.0;
  visit(tree, [&](const ParseTree& n) {
    if (has_syntactic_children(n)) total += pcfg.log_prob(n.label, rhs_of(n));
  });
  return total;
}

std::vector<ParseTree> read_treebank(std::istream& in) {
  std::vector<ParseTree> trees;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty() || line.front() == '#') continue;
    try {
      trees.push_back(read_bracketed(line));
    } catch (const TreeSyntaxError& e) {
      throw ValidationError("treebank line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trees;
}

}  // namespace readrank
