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

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "dgp/error.hpp"
#include "dgp/rng.hpp"

namespace dgp {

/// Writes Vose alias tables for `weights` into `prob` / `alias` (same length).
/// Weights must be non-negative with a positive sum.
inline void build_alias(std::span<const double> weights, std::span<double> prob, std::span<std::uint32_t> alias) {
  const std::size_t n = weights.size();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (n == 0 || !(total > 0.0)) throw Error(ErrorCode::InvalidParams, "alias table needs a positive weight sum");
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    prob[i] = weights[i] * static_cast<double>(n) / total;
    alias[i] = static_cast<std::uint32_t>(i);
    (prob[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    alias[s] = l;
    prob[l] = (prob[l] + prob[s]) - 1.0;
    if (prob[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) prob[i] = 1.0;
  for (std::uint32_t i : small) prob[i] = 1.0;
}

inline std::size_t sample_alias(std::span<const double> prob, std::span<const std::uint32_t> alias, Rng& rng) {
  const std::size_t i = rng.uniform_int(prob.size());
  return rng.uniform() < prob[i] ? i : alias[i];
}

/// O(1) sampler from a fixed discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights) : prob_(weights.size()), alias_(weights.size()) {
    build_alias(weights, prob_, alias_);
  }

  std::size_t size() const noexcept { return prob_.size(); }
  std::size_t sample(Rng& rng) const { return sample_alias(prob_, alias_, rng); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace dgp
