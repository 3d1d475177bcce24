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

#include "hsiduo/metrics.hpp"

#include <cmath>
#include <string>

#include "hsiduo/error.hpp"
#include "json.hpp"

namespace hsiduo {

ConfusionMatrix::ConfusionMatrix(std::size_t n_classes) : n_(n_classes), counts_(n_classes * n_classes, 0) {}

ConfusionMatrix ConfusionMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  ConfusionMatrix m(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size()) throw MetricError("confusion matrix must be square");
    for (std::size_t c = 0; c < rows.size(); ++c) m.add(r, c, rows[r][c]);
  }
  return m;
}

void ConfusionMatrix::add(std::size_t truth, std::size_t predicted, std::int64_t count) {
  if (truth >= n_ || predicted >= n_) {
    throw MetricError("class index out of range for " + std::to_string(n_) + " classes");
  }
  if (count < 0) throw MetricError("confusion counts must be non-negative");
  counts_[truth * n_ + predicted] += count;
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t t = 0;
  for (std::size_t k = 0; k < n_; ++k) t += at(k, k);
  return t;
}

std::int64_t ConfusionMatrix::row_sum(std::size_t k) const {
  std::int64_t t = 0;
  for (std::size_t c = 0; c < n_; ++c) t += at(k, c);
  return t;
}

std::int64_t ConfusionMatrix::col_sum(std::size_t k) const {
  std::int64_t t = 0;
  for (std::size_t r = 0; r < n_; ++r) t += at(r, k);
  return t;
}

std::vector<std::vector<std::int64_t>> ConfusionMatrix::rows() const {
  std::vector<std::vector<std::int64_t>> out(n_, std::vector<std::int64_t>(n_));
  for (std::size_t r = 0; r < n_; ++r) {
    for (std::size_t c = 0; c < n_; ++c) out[r][c] = at(r, c);
  }
  return out;
}

double overall_accuracy(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total <= 0) throw MetricError("overall accuracy of an empty confusion matrix");
  return static_cast<double>(m.trace()) / static_cast<double>(total);
}

std::vector<double> per_class_accuracy(const ConfusionMatrix& m) {
  std::vector<double> acc(m.n_classes());
  for (std::size_t k = 0; k < m.n_classes(); ++k) {
    const auto row = m.row_sum(k);
    if (row <= 0) throw MetricError("class " + std::to_string(k + 1) + " has no evaluated samples");
    acc[k] = static_cast<double>(m.at(k, k)) / static_cast<double>(row);
  }
  return acc;
}

double average_accuracy(const ConfusionMatrix& m) {
  const auto acc = per_class_accuracy(m);
  if (acc.empty()) throw MetricError("average accuracy of a matrix without classes");
  double sum = 0.0;
  for (double a : acc) sum += a;
  return sum / static_cast<double>(acc.size());
}

double kappa(const ConfusionMatrix& m) {
  const auto n = m.total();
  if (n <= 0) throw MetricError("kappa of an empty confusion matrix");
  // kappa = (n*trace - sum r_c c_c) / (n^2 - sum r_c c_c), exact in integers
  // (64-bit products hold for up to ~3e9 samples).
  std::int64_t chance = 0;
  for (std::size_t k = 0; k < m.n_classes(); ++k) chance += m.row_sum(k) * m.col_sum(k);
  const std::int64_t num = n * m.trace() - chance;
  const std::int64_t den = n * n - chance;
  if (den == 0) return 1.0;  // p_e == 1, which forces p_o == 1
  return static_cast<double>(num) / static_cast<double>(den);
}

TrialMetrics trial_metrics(const ConfusionMatrix& m) {
  TrialMetrics t;
  t.oa = overall_accuracy(m);
  t.per_class = per_class_accuracy(m);
  t.aa = average_accuracy(m);
  t.kappa = kappa(m);
  return t;
}

namespace {

MetricSummary summarize(const std::vector<TrialMetrics>& trials, double TrialMetrics::*field, std::size_t best) {
  MetricSummary s;
  const double n = static_cast<double>(trials.size());
  for (const auto& t : trials) s.mean += t.*field;
  s.mean /= n;
  double ss = 0.0;
  for (const auto& t : trials) ss += (t.*field - s.mean) * (t.*field - s.mean);
  s.std = std::sqrt(ss / n);
  s.best = trials[best].*field;
  return s;
}

}  // namespace

TrialReport aggregate_trials(const std::vector<TrialMetrics>& trials) {
  if (trials.empty()) throw MetricError("cannot aggregate an empty list of trials");
  TrialReport r;
  r.n = trials.size();
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (trials[i].oa > trials[r.best_trial].oa) r.best_trial = i;
  }
  r.oa = summarize(trials, &TrialMetrics::oa, r.best_trial);
  r.aa = summarize(trials, &TrialMetrics::aa, r.best_trial);
  r.kappa = summarize(trials, &TrialMetrics::kappa, r.best_trial);
  r.best_per_class = trials[r.best_trial].per_class;
  return r;
}

std::string eval_report_json(const std::vector<std::string>& class_names, const ConfusionMatrix& best_confusion,
                             const TrialReport& report) {
  using nlohmann::json;
  auto summary = [](const MetricSummary& s) { return json{{"mean", s.mean}, {"std", s.std}, {"best", s.best}}; };
  const json j = {
      {"classes", class_names},
      {"confusion", best_confusion.rows()},
      {"per_class", report.best_per_class},
      {"oa", report.oa.best},
      {"aa", report.aa.best},
      {"kappa", report.kappa.best},
      {"trials",
       {{"n", report.n},
        {"best_trial", report.best_trial},
        {"oa", summary(report.oa)},
        {"aa", summary(report.aa)},
        {"kappa", summary(report.kappa)}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace hsiduo
