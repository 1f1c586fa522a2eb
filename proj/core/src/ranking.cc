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

#include "readrank/ranking.h"

#include <istream>
#include <ostream>

#include "readrank/error.h"
#include "readrank/format.h"

namespace readrank {

Ranking::Ranking(std::vector<std::string> order, std::map<std::string, double> scores)
    : order_(std::move(order)) {
  for (size_t i = 0; i < order_.size(); ++i) {
    if (!index_.emplace(order_[i], static_cast<int>(i) + 1).second) {
      throw PreconditionError("ranking repeats id '" + order_[i] + "'");
    }
  }
  for (auto& [id, s] : scores) {
    if (!index_.count(id)) {
      throw PreconditionError("ranking score for unknown id '" + id + "'");
    }
    scores_.emplace(id, s);
  }
}

bool Ranking::contains(std::string_view id) const { return index_.find(id) != index_.end(); }

int Ranking::rank_index(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw PreconditionError("ranking has no id '" + std::string(id) + "'");
  }
  return it->second;
}

double Ranking::score(std::string_view id) const {
  auto it = scores_.find(id);
  return it == scores_.end() ? 0.0 : it->second;
}

Ranking AggregateRanking::ranking() const {
  std::vector<std::string> order;
  std::map<std::string, double> scores;
  for (const auto& r : rows) {
    order.push_back(r.sentence_id);
    scores[r.sentence_id] = r.mean_mu;
  }
  return Ranking(std::move(order), std::move(scores));
}

void write_ranking_csv(std::ostream& out, const AggregateRanking& ranking,
                       std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "rank,sentence_id,mean_rank,mean_mu,mean_sigma\n";
  for (const auto& r : ranking.rows) {
    out << r.rank << ',' << r.sentence_id << ',' << format_double(r.mean_rank) << ','
        << format_double(r.mean_mu) << ',' << format_double(r.mean_sigma) << '\n';
  }
}

AggregateRanking read_ranking_csv(std::istream& in, std::string_view source) {
  AggregateRanking out;
  std::string line;
  size_t lineno = 0;
  bool header = false;
  std::vector<std::string> errors;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split_csv(t);
    if (!header) {
      header = true;
      if (f !=
          std::vector<std::string>{"rank", "sentence_id", "mean_rank", "mean_mu", "mean_sigma"}) {
        errors.push_back(std::string(source) + ":" + std::to_string(lineno) +
                         ": expected header rank,sentence_id,mean_rank,mean_mu,mean_sigma");
        break;
      }
      continue;
    }
    try {
      if (f.size() != 5) throw std::invalid_argument("expected 5 fields");
      RankedSentence r;
      r.rank = std::stoi(f[0]);
      r.sentence_id = f[1];
      r.mean_rank = std::stod(f[2]);
      r.mean_mu = std::stod(f[3]);
      r.mean_sigma = std::stod(f[4]);
      out.rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      errors.push_back(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  for (size_t i = 0; i < out.rows.size(); ++i) {
    if (out.rows[i].rank != static_cast<int>(i) + 1) {
      throw ValidationError(std::string(source) + ": ranks must run 1..n in order");
    }
  }
  return out;
}

}  // namespace readrank
