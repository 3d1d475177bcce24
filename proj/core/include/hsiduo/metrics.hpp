// Copyright 2026 The hsiduo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hsiduo {

/// K x K counts; rows are true classes, columns predicted classes. Classes
/// are zero-based here (class label c maps to index c-1).
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t n_classes);
  /// Row-major counts; throws MetricError unless square and non-negative.
  static ConfusionMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  void add(std::size_t truth, std::size_t predicted, std::int64_t count = 1);

  std::size_t n_classes() const { return n_; }
  std::int64_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n_ + predicted]; }
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(std::size_t k) const;
  std::int64_t col_sum(std::size_t k) const;
  std::vector<std::vector<std::int64_t>> rows() const;

 private:
  std::size_t n_;
  std::vector<std::int64_t> counts_;
};

/// trace / total. Throws MetricError on an empty matrix.
double overall_accuracy(const ConfusionMatrix& m);
/// m[c,c] / rowsum_c; throws MetricError naming the first empty class.
std::vector<double> per_class_accuracy(const ConfusionMatrix& m);
double average_accuracy(const ConfusionMatrix& m);
/// Cohen's kappa, evaluated in integer arithmetic up to one final division.
double kappa(const ConfusionMatrix& m);

struct TrialMetrics {
  double oa = 0.0;
  double aa = 0.0;
  double kappa = 0.0;
  std::vector<double> per_class;
};

TrialMetrics trial_metrics(const ConfusionMatrix& m);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // population
  double best = 0.0; // value in the best (max-OA) trial
};

struct TrialReport {
  std::size_t n = 0;
  MetricSummary oa;
  MetricSummary aa;
  MetricSummary kappa;
  std::size_t best_trial = 0;
  std::vector<double> best_per_class;
};

/// Mean and population std per metric; "best" is the trial with the highest
/// OA (first one on ties). Throws MetricError on an empty list.
TrialReport aggregate_trials(const std::vector<TrialMetrics>& trials);

/// Evaluation report JSON:
/// {classes, confusion, per_class, oa, aa, kappa, trials: {n, oa: {mean, std, best}, aa, kappa}}.
/// `confusion` and the top-level metrics describe the best trial.
std::string eval_report_json(const std::vector<std::string>& class_names, const ConfusionMatrix& best_confusion,
                             const TrialReport& report);

}  // namespace hsiduo
