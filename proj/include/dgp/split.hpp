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
#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dgp/error.hpp"
#include "dgp/graph.hpp"
#include "dgp/rng.hpp"

namespace dgp {

enum class SplitPolicy { General, Bipartite };

inline constexpr std::string_view to_string(SplitPolicy p) {
  return p == SplitPolicy::General ? "general" : "bipartite";
}

using EdgeSet = std::unordered_set<Edge, EdgeHash>;

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  friend bool operator==(const SplitRatios&, const SplitRatios&) = default;
};

/// Positive edges partitioned three ways plus one sampled negative per
/// validation and test positive. All lists are sorted.
struct EdgeSplit {
  std::vector<Edge> train_edges;
  std::vector<Edge> val_pos;
  std::vector<Edge> val_neg;
  std::vector<Edge> test_pos;
  std::vector<Edge> test_neg;
  SplitPolicy policy = SplitPolicy::General;
  SplitRatios ratios;
  std::uint64_t seed = 0;
  std::size_t num_nodes = 0;

  friend bool operator==(const EdgeSplit&, const EdgeSplit&) = default;
};

/// Minimum number of eligible positives for a split to be meaningful.
inline constexpr std::size_t kMinSplitEdges = 10;

/// Negative pairs are rejection-sampled unless the requested pairs would
/// fill more than this share of the candidate space.
inline constexpr double kDenseFillThreshold = 0.9;

namespace detail {

inline bool eligible(const Graph& g, const Edge& e, SplitPolicy policy) {
  if (e.is_self_loop()) return false;
  return policy == SplitPolicy::General || g.is_cross_type(e.u, e.v);
}

}  // namespace detail

/// Uniform non-edge pairs that avoid `exclude`. Under Bipartite, only
/// disease-gene pairs are drawn. Result is sorted.
inline std::vector<Edge> sample_negatives(const Graph& g, std::size_t count, SplitPolicy policy,
                                          const EdgeSet& exclude, std::uint64_t seed) {
  if (count == 0) return {};
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> diseases, genes;
  std::uint64_t space = 0;
  if (policy == SplitPolicy::Bipartite) {
    const auto idx = bipartite_index(g);
    diseases = idx.diseases;
    genes = idx.genes;
    space = static_cast<std::uint64_t>(diseases.size()) * genes.size();
  } else {
    space = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  }

  const auto in_space = [&](const Edge& e) { return detail::eligible(g, e, policy); };
  std::uint64_t taken = 0;
  for (const Edge& e : g.edges())
    if (in_space(e)) ++taken;
  for (const Edge& e : exclude)
    if (in_space(e) && !g.has_edge(e.u, e.v)) ++taken;
  const std::uint64_t available = space - taken;
  if (count > available)
    throw Error(ErrorCode::ExhaustedSpace, "requested " + std::to_string(count) + " negatives, only " +
                                               std::to_string(available) + " available");

  const auto rejected = [&](const Edge& e) { return g.has_edge(e.u, e.v) || exclude.contains(e); };
  Rng rng(seed);
  std::vector<Edge> out;
  out.reserve(count);

  if (static_cast<double>(taken + count) > kDenseFillThreshold * static_cast<double>(space)) {
    std::vector<Edge> pool;
    if (policy == SplitPolicy::Bipartite) {
      for (NodeId d : diseases)
        for (NodeId gi : genes)
          if (const Edge e = Edge::make(d, gi); !rejected(e)) pool.push_back(e);
    } else {
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b)
          if (const Edge e{a, b}; !rejected(e)) pool.push_back(e);
    }
    // partial Fisher-Yates
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + rng.uniform_int(pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
  } else {
    EdgeSet seen;
    while (out.size() < count) {
      Edge e;
      if (policy == SplitPolicy::Bipartite) {
        e = Edge::make(diseases[rng.uniform_int(diseases.size())], genes[rng.uniform_int(genes.size())]);
      } else {
        const auto a = static_cast<NodeId>(rng.uniform_int(n));
        const auto b = static_cast<NodeId>(rng.uniform_int(n));
        if (a == b) continue;
        e = Edge::make(a, b);
      }
      if (rejected(e) || !seen.insert(e).second) continue;
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Splits the eligible positives (all non-loop edges under General,
/// disease-gene edges under Bipartite) by shuffling and slicing: train gets
/// floor(r_train * M), val floor(r_val * M), test the remainder. Edges that
/// are not eligible stay in train.
inline EdgeSplit split_edges(const Graph& g, const SplitRatios& ratios, SplitPolicy policy, std::uint64_t seed) {
  const std::array<double, 3> r{ratios.train, ratios.val, ratios.test};
  if (std::any_of(r.begin(), r.end(), [](double x) { return !(x >= 0.0); }) ||
      std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidParams, "split ratios must be non-negative and sum to 1");
  if (policy == SplitPolicy::Bipartite && !g.is_heterogeneous())
    throw Error(ErrorCode::PolicyMismatch, "bipartite policy needs disease and gene nodes");

  EdgeSplit s;
  s.policy = policy;
  s.ratios = ratios;
  s.seed = seed;
  s.num_nodes = g.num_nodes();

  std::vector<Edge> pool;
  for (const Edge& e : g.edges()) {
    if (detail::eligible(g, e, policy)) pool.push_back(e);
    else if (!e.is_self_loop()) s.train_edges.push_back(e);
  }
  if (pool.size() < kMinSplitEdges)
    throw Error(ErrorCode::TooFewEdges, "need at least " + std::to_string(kMinSplitEdges) + " eligible edges, have " +
                                            std::to_string(pool.size()));

  Rng rng(derive_seed(seed, 0));
  rng.shuffle(std::span<Edge>(pool));
  const auto m = static_cast<double>(pool.size());
  // The 1e-9 slack keeps 0.8 * 100 from flooring to 79.
  const auto n_train = static_cast<std::size_t>(std::floor(ratios.train * m + 1e-9));
  const auto n_val = std::min(pool.size() - n_train, static_cast<std::size_t>(std::floor(ratios.val * m + 1e-9)));

  s.train_edges.insert(s.train_edges.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val_pos.assign(pool.begin() + static_cast<std::ptrdiff_t>(n_train),
                   pool.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test_pos.assign(pool.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), pool.end());
  std::sort(s.train_edges.begin(), s.train_edges.end());
  std::sort(s.val_pos.begin(), s.val_pos.end());
  std::sort(s.test_pos.begin(), s.test_pos.end());

  s.val_neg = sample_negatives(g, s.val_pos.size(), policy, {}, derive_seed(seed, 1));
  const EdgeSet val_neg_set(s.val_neg.begin(), s.val_neg.end());
  s.test_neg = sample_negatives(g, s.test_pos.size(), policy, val_neg_set, derive_seed(seed, 2));
  return s;
}

/// The graph the models are allowed to see: every node, training edges only.
inline Graph training_graph(const Graph& full, const EdgeSplit& split) {
  return Graph({full.kinds().begin(), full.kinds().end()}, split.train_edges);
}

}  // namespace dgp
