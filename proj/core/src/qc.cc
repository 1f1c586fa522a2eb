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

#include "readrank/qc.h"

#include <algorithm>
#include <array>
#include <map>
#include <ostream>
#include <set>
#include <unordered_set>
#include <utility>

#include "readrank/error.h"
#include "readrank/format.h"
#include "readrank/parallel.h"

namespace readrank {

std::string_view penalty_mode_name(PenaltyMode mode) {
  return mode == PenaltyMode::kModalShare ? "modal_share" : "flat";
}

PenaltyMode parse_penalty_mode(std::string_view name) {
  if (name == "modal_share") return PenaltyMode::kModalShare;
  if (name == "flat") return PenaltyMode::kFlat;
  throw ValidationError("unknown penalty mode '" + std::string(name) +
                        "' (expected modal_share or flat)");
}

std::optional<double> gold_accuracy(std::span<const JudgmentRecord> worker_judgments) {
  int answered = 0;
  int correct = 0;
  for (const auto& j : worker_judgments) {
    if (!j.is_gold || !j.gold_answer) continue;
    ++answered;
    if (j.choice == *j.gold_answer) ++correct;
  }
  if (answered == 0) return std::nullopt;
  return static_cast<double>(correct) / answered;
}

namespace {

using QuestionKey = std::pair<std::string, Order>;

struct QuestionTally {
  std::array<int, 3> votes{};  // indexed by Choice
  int total = 0;
  // Modal choice, or -1 when the top count is shared.
  int modal() const {
    int best = 0;
    for (int c = 1; c < 3; ++c) {
      if (votes[c] > votes[best]) best = c;
    }
    for (int c = 0; c < 3; ++c) {
      if (c != best && votes[c] == votes[best]) return -1;
    }
    return best;
  }
};

std::map<QuestionKey, QuestionTally> tally_questions(std::span<const JudgmentRecord> judgments) {
  std::map<QuestionKey, QuestionTally> tallies;
  for (const auto& j : judgments) {
    if (j.is_gold) continue;
    auto& t = tallies[{j.pair_id, j.presentation_order}];
    ++t.votes[static_cast<int>(j.choice)];
    ++t.total;
  }
  return tallies;
}

double worker_rate(std::string_view worker_id, std::span<const JudgmentRecord> judgments,
                   const std::map<QuestionKey, QuestionTally>& tallies, PenaltyMode mode) {
  double penalty = 0.0;
  int answered = 0;
  for (const auto& j : judgments) {
    if (j.is_gold || j.worker_id != worker_id) continue;
    ++answered;
    const auto& t = tallies.at({j.pair_id, j.presentation_order});
    const int modal = t.modal();
    if (modal < 0 || modal == static_cast<int>(j.choice)) continue;
    penalty += mode == PenaltyMode::kFlat ? 1.0 : static_cast<double>(t.votes[modal]) / t.total;
  }
  return answered == 0 ? 0.0 : penalty / answered;
}

}  // namespace

double weighted_disagreement(std::string_view worker_id,
                             std::span<const JudgmentRecord> all_judgments, PenaltyMode mode) {
  return worker_rate(worker_id, all_judgments, tally_questions(all_judgments), mode);
}

std::vector<WorkerStats> compute_worker_stats(std::span<const JudgmentRecord> judgments,
                                              TaskMode mode, const QcOptions& options,
                                              unsigned workers) {
  if (!(options.gold_threshold >= 0 && options.gold_threshold <= 1)) {
    throw PreconditionError("qc: gold threshold must be in [0, 1]");
  }
  const auto tallies = tally_questions(judgments);
  std::map<std::string, std::vector<JudgmentRecord>> by_worker;
  for (const auto& j : judgments) by_worker[j.worker_id].push_back(j);

  std::vector<WorkerStats> stats;
  stats.reserve(by_worker.size());
  for (const auto& [id, own] : by_worker) {
    WorkerStats s;
    s.worker_id = id;
    for (const auto& j : own) {
      if (j.is_gold) {
        if (!j.gold_answer) continue;
        ++s.n_gold;
        if (j.choice == *j.gold_answer) ++s.n_gold_correct;
      } else {
        ++s.n_answered;
      }
    }
    stats.push_back(std::move(s));
  }
  const double threshold = options.disagreement_threshold(mode);
  parallel_for(stats.size(), workers, [&](size_t i) {
    auto& s = stats[i];
    const auto& own = by_worker.at(s.worker_id);
    s.gold_accuracy = gold_accuracy(own);
    s.weighted_disagreement = worker_rate(s.worker_id, own, tallies, options.penalty);
    const bool gold_ok =
        !options.gold_gate || !s.gold_accuracy || *s.gold_accuracy >= options.gold_threshold;
    s.retained = gold_ok && s.weighted_disagreement < threshold;
  });
  return stats;
}

std::vector<JudgmentRecord> apply_filter(std::span<const JudgmentRecord> judgments,
                                         std::span<const WorkerStats> stats) {
  std::unordered_set<std::string> removed;
  for (const auto& s : stats) {
    if (!s.retained) removed.insert(s.worker_id);
  }
  std::vector<JudgmentRecord> kept;
  kept.reserve(judgments.size());
  for (const auto& j : judgments) {
    if (!removed.count(j.worker_id)) kept.push_back(j);
  }
  return kept;
}

QcResult filter_workers(std::span<const JudgmentRecord> judgments, TaskMode mode,
                        const QcOptions& options, unsigned workers) {
  QcResult result;
  result.workers = compute_worker_stats(judgments, mode, options, workers);
  result.retained = apply_filter(judgments, result.workers);
  for (const auto& j : judgments) {
    if (!j.is_gold) ++result.total_judgments;
  }
  int kept_non_gold = 0;
  for (const auto& j : result.retained) {
    if (!j.is_gold) ++kept_non_gold;
  }
  result.removed_judgments = result.total_judgments - kept_non_gold;
  result.removal_fraction =
      result.total_judgments == 0
          ? 0.0
          : static_cast<double>(result.removed_judgments) / result.total_judgments;
  for (const auto& s : result.workers) {
    if (!s.gold_accuracy) {
      result.warnings.push_back("worker '" + s.worker_id +
                                "' answered no gold questions; gold gate not applied");
    }
  }
  return result;
}

void write_qc_report(std::ostream& out, std::span<const WorkerStats> stats,
                     std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "worker_id,n_answered,n_gold,gold_accuracy,weighted_disagreement,retained\n";
  for (const auto& s : stats) {
    out << s.worker_id << ',' << s.n_answered << ',' << s.n_gold << ','
        << (s.gold_accuracy ? format_double(*s.gold_accuracy) : std::string()) << ','
        << format_double(s.weighted_disagreement) << ',' << (s.retained ? "true" : "false") << '\n';
  }
}

}  // namespace readrank
