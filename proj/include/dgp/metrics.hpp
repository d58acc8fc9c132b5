// Copyright 2026 The dgp-vgae Authors. All Rights Reserved.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "dgp/error.hpp"

namespace dgp {

struct ScoredPairs {
  std::vector<double> positives;
  std::vector<double> negatives;
};

namespace detail {

inline void require_both_sides(const ScoredPairs& s) {
  if (s.positives.empty() || s.negatives.empty())
    throw Error(ErrorCode::EmptySide, "metric needs at least one positive and one negative score");
}

/// (score, is_positive) sorted descending by score; at equal scores
/// negatives come first.
inline std::vector<std::pair<double, bool>> ranked_descending(const ScoredPairs& s) {
  std::vector<std::pair<double, bool>> all;
  all.reserve(s.positives.size() + s.negatives.size());
  for (double v : s.positives) all.emplace_back(v, true);
  for (double v : s.negatives) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return !a.second && b.second;
  });
  return all;
}

}  // namespace detail

/// Mann-Whitney AUC via mid-rank sums; ties count one half.
inline double roc_auc(const ScoredPairs& s) {
  detail::require_both_sides(s);
  std::vector<std::pair<double, bool>> all;
  all.reserve(s.positives.size() + s.negatives.size());
  for (double v : s.positives) all.emplace_back(v, true);
  for (double v : s.negatives) all.emplace_back(v, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  // Ranks are 1-based; a tie group spanning [i, j) gets rank (i + 1 + j) / 2.
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::size_t pos_in_group = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      if (all[j].second) ++pos_in_group;
      ++j;
    }
    pos_rank_sum += static_cast<double>(pos_in_group) * (static_cast<double>(i + 1 + j) / 2.0);
    i = j;
  }
  const auto np = static_cast<double>(s.positives.size());
  const auto nn = static_cast<double>(s.negatives.size());
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

/// Mean of precision@k over the ranks k of the positives, with ties broken
/// pessimistically (negatives ranked ahead of positives at equal score).
inline double average_precision(const ScoredPairs& s) {
  detail::require_both_sides(s);
  const auto ranked = detail::ranked_descending(s);
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (!ranked[k].second) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return sum / static_cast<double>(s.positives.size());
}

struct MetricSummary {
  double mean = 0.0;
  double std_error = 0.0;
};

struct RunSummary {
  std::vector<double> auc;
  std::vector<double> ap;
  MetricSummary auc_summary;
  MetricSummary ap_summary;
  /// Set when only one run was aggregated, so stderr is reported as 0.
  bool single_run = false;
};

inline MetricSummary summarize(std::span<const double> values) {
  MetricSummary m;
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return m;
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return m;
  double ss = 0.0;
  for (double v : values) ss += (v - m.mean) * (v - m.mean);
  m.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return m;
}

/// Mean and standard error (sample std, n-1 denominator, over sqrt(n)).
inline RunSummary aggregate_runs(std::vector<double> auc, std::vector<double> ap) {
  if (auc.empty() || auc.size() != ap.size())
    throw Error(ErrorCode::InvalidParams, "aggregate_runs needs matching, non-empty AUC and AP lists");
  RunSummary r;
  r.auc_summary = summarize(auc);
  r.ap_summary = summarize(ap);
  r.single_run = auc.size() == 1;
  r.auc = std::move(auc);
  r.ap = std::move(ap);
  return r;
}

}  // namespace dgp
