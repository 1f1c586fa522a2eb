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

#ifndef READRANK_RANKING_H_
#define READRANK_RANKING_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace readrank {

// A total order over sentence ids, most difficult first (rank 1).
class Ranking {
 public:
  Ranking() = default;
  // `order` must not repeat ids; `scores` may be empty or cover every id.
  Ranking(std::vector<std::string> order, std::map<std::string, double> scores = {});

  const std::vector<std::string>& order() const { return order_; }
  size_t size() const { return order_.size(); }
  bool contains(std::string_view id) const;
  int rank_index(std::string_view id) const;  // 1-based
  double score(std::string_view id) const;    // 0 when absent
  const std::map<std::string, double, std::less<>>& scores() const { return scores_; }

 private:
  std::vector<std::string> order_;
  std::map<std::string, double, std::less<>> scores_;
  std::map<std::string, int, std::less<>> index_;
};

// Row of the ranking CSV "rank,sentence_id,mean_rank,mean_mu,mean_sigma".
struct RankedSentence {
  int rank = 0;
  std::string sentence_id;
  double mean_rank = 0.0;
  double mean_mu = 0.0;
  double mean_sigma = 0.0;
};

struct AggregateRanking {
  std::vector<RankedSentence> rows;  // rank order
  Ranking ranking() const;           // scores are mean_mu
};

// Lines starting with '#' are comments (used for the config echo).
void write_ranking_csv(std::ostream& out, const AggregateRanking& ranking,
                       std::string_view comment = {});
AggregateRanking read_ranking_csv(std::istream& in, std::string_view source);

}  // namespace readrank

#endif  // READRANK_RANKING_H_
