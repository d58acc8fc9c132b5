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

#include <cstdint>
#include <vector>

#include "dgp/dense.hpp"
#include "dgp/graph.hpp"
#include "dgp/rng.hpp"

namespace dgp::testing {

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(std::vector<NodeKind>(n, NodeKind::Generic), e);
}

inline Graph triangle() { return Graph(std::vector<NodeKind>(3, NodeKind::Generic), std::vector<Edge>{{0, 1}, {1, 2}, {0, 2}}); }

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph(std::vector<NodeKind>(n, NodeKind::Generic), e);
}

/// Erdős-Rényi graph; the first n_disease nodes are diseases, the next
/// n_gene genes, the rest generic.
inline Graph random_graph(std::size_t n, double p, std::uint64_t seed, std::size_t n_disease = 0,
                          std::size_t n_gene = 0) {
  Rng rng(seed);
  std::vector<NodeKind> kinds(n, NodeKind::Generic);
  for (std::size_t i = 0; i < n_disease; ++i) kinds[i] = NodeKind::Disease;
  for (std::size_t i = n_disease; i < n_disease + n_gene; ++i) kinds[i] = NodeKind::Gene;
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) e.push_back({i, j});
  return Graph(std::move(kinds), e);
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(-scale, scale);
  return m;
}

}  // namespace dgp::testing
