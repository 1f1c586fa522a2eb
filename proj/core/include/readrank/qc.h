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

#ifndef READRANK_QC_H_
#define READRANK_QC_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "readrank/corpus.h"

namespace readrank {

enum class PenaltyMode {
  kModalShare,  // penalty = modal vote share of the question
  kFlat,        // penalty = 1 per disagreement
};

std::string_view penalty_mode_name(PenaltyMode mode);
PenaltyMode parse_penalty_mode(std::string_view name);

struct QcOptions {
  double gold_threshold = 0.85;           // retained when accuracy >= threshold
  double sentence_only_threshold = 0.15;  // removed when rate >= threshold
  double in_passage_threshold = 0.17;
  PenaltyMode penalty = PenaltyMode::kModalShare;
  bool gold_gate = true;

  double disagreement_threshold(TaskMode mode) const {
    return mode == TaskMode::kSentenceOnly ? sentence_only_threshold : in_passage_threshold;
  }
};

struct WorkerStats {
  std::string worker_id;
  int n_answered = 0;  // non-gold judgments
  int n_gold = 0;
  int n_gold_correct = 0;
  std::optional<double> gold_accuracy;  // absent when no gold was answered
  double weighted_disagreement = 0.0;
  bool retained = true;
};

// Correct gold answers over gold questions answered; nullopt when none.
// Judgments without is_gold are ignored.
std::optional<double> gold_accuracy(std::span<const JudgmentRecord> worker_judgments);

// A question is a (pair_id, presentation_order) cell; only non-gold
// judgments count. Returns 0 when the worker answered no non-gold question.
double weighted_disagreement(std::string_view worker_id,
                             std::span<const JudgmentRecord> all_judgments,
                             PenaltyMode mode = PenaltyMode::kModalShare);

struct QcResult {
  std::vector<JudgmentRecord> retained;  // all judgments of retained workers
  std::vector<WorkerStats> workers;      // sorted by worker_id
  double removal_fraction = 0.0;         // removed / total non-gold judgments
  int removed_judgments = 0;
  int total_judgments = 0;
  std::vector<std::string> warnings;
};

std::vector<WorkerStats> compute_worker_stats(std::span<const JudgmentRecord> judgments,
                                              TaskMode mode, const QcOptions& options,
                                              unsigned workers = 1);

// Drops every judgment whose worker is marked not retained in `stats`.
// Workers absent from `stats` are kept.
std::vector<JudgmentRecord> apply_filter(std::span<const JudgmentRecord> judgments,
                                         std::span<const WorkerStats> stats);

QcResult filter_workers(std::span<const JudgmentRecord> judgments, TaskMode mode,
                        const QcOptions& options = {}, unsigned workers = 1);

void write_qc_report(std::ostream& out, std::span<const WorkerStats> stats,
                     std::string_view comment = {});

}  // namespace readrank

#endif  // READRANK_QC_H_
