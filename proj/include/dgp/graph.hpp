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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dgp/error.hpp"
#include "dgp/sparse.hpp"

namespace dgp {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Disease, Gene, Generic };

inline constexpr std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Disease: return "disease";
    case NodeKind::Gene: return "gene";
    case NodeKind::Generic: return "generic";
  }
  return "generic";
}

/// Unordered node pair, stored with u <= v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static constexpr Edge make(NodeId a, NodeId b) noexcept { return a <= b ? Edge{a, b} : Edge{b, a}; }
  constexpr bool is_self_loop() const noexcept { return u == v; }

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) | e.v);
  }
};

/// Immutable undirected, unweighted graph with typed nodes.
///
/// Edges are normalized to u <= v and deduplicated at construction. The CSR
/// adjacency is symmetric and binary; a self-loop (i, i) occupies a single
/// entry on row i.
class Graph {
 public:
  Graph() = default;

  Graph(std::vector<NodeKind> kinds, std::span<const Edge> edges) : kinds_(std::move(kinds)) {
    const std::size_t n = kinds_.size();
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.u >= n || e.v >= n) throw Error(ErrorCode::IndexOutOfRange, "edge endpoint out of range");
      edges_.push_back(Edge::make(e.u, e.v));
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    build_csr();
  }

  std::size_t num_nodes() const noexcept { return kinds_.size(); }
  /// Number of distinct undirected edges, self-loops included.
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const NodeKind> kinds() const noexcept { return kinds_; }
  NodeKind kind(NodeId i) const noexcept { return kinds_[i]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const NodeId> col_idx() const noexcept { return col_idx_; }

  /// Sorted neighbors of i, including i itself when a self-loop exists.
  std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  bool has_edge(NodeId a, NodeId b) const noexcept {
    if (a >= num_nodes() || b >= num_nodes()) return false;
    const auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  bool is_cross_type(NodeId a, NodeId b) const noexcept {
    const NodeKind ka = kinds_[a], kb = kinds_[b];
    return (ka == NodeKind::Disease && kb == NodeKind::Gene) ||
           (ka == NodeKind::Gene && kb == NodeKind::Disease);
  }

  bool is_heterogeneous() const noexcept {
    const bool d = std::find(kinds_.begin(), kinds_.end(), NodeKind::Disease) != kinds_.end();
    const bool g = std::find(kinds_.begin(), kinds_.end(), NodeKind::Gene) != kinds_.end();
    return d && g;
  }

  std::size_t count_kind(NodeKind k) const noexcept {
    return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.kinds_ == b.kinds_ && a.edges_ == b.edges_;
  }

 private:
  void build_csr() {
    const std::size_t n = kinds_.size();
    std::vector<std::size_t> deg(n, 0);
    for (const Edge& e : edges_) {
      ++deg[e.u];
      if (!e.is_self_loop()) ++deg[e.v];
    }
    row_ptr_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row_ptr_[i + 1] = row_ptr_[i] + deg[i];
    col_idx_.assign(row_ptr_[n], 0);
    std::vector<std::size_t> fill(row_ptr_.begin(), row_ptr_.end() - 1);
    for (const Edge& e : edges_) {
      col_idx_[fill[e.u]++] = e.v;
      if (!e.is_self_loop()) col_idx_[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i)
      std::sort(col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]),
                col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]));
  }

  std::vector<NodeKind> kinds_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_idx_;
};

inline bool has_all_self_loops(const Graph& g) {
  for (NodeId i = 0; i < g.num_nodes(); ++i)
    if (!g.has_edge(i, i)) return false;
  return true;
}

/// Graph with (i, i) present for every node. Idempotent.
inline Graph add_self_loops(const Graph& g) {
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  for (NodeId i = 0; i < g.num_nodes(); ++i) edges.push_back({i, i});
  return Graph({g.kinds().begin(), g.kinds().end()}, edges);
}

/// Same nodes without any self-loop.
inline Graph remove_self_loops(const Graph& g) {
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (!e.is_self_loop()) edges.push_back(e);
  return Graph({g.kinds().begin(), g.kinds().end()}, edges);
}

/// Row lengths of the adjacency; a self-loop counts once.
inline std::vector<double> degree_vector(const Graph& g) {
  std::vector<double> d(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) d[i] = static_cast<double>(g.neighbors(i).size());
  return d;
}

/// D^{-1/2} A D^{-1/2} on the sparsity pattern of A.
struct NormalizedAdjacency {
  SparseCsr matrix;

  std::size_t size() const noexcept { return matrix.rows; }
};

/// Expects self-loops to be present; the caller is responsible for calling
/// add_self_loops first. Rows with no entries stay empty.
inline NormalizedAdjacency normalize_symmetric(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n);
  const auto deg = degree_vector(g);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt[i] = deg[i] > 0.0 ? 1.0 / std::sqrt(deg[i]) : 0.0;

  NormalizedAdjacency out;
  auto& m = out.matrix;
  m.rows = m.cols = n;
  m.row_ptr.assign(g.row_ptr().begin(), g.row_ptr().end());
  m.col_idx.assign(g.col_idx().begin(), g.col_idx().end());
  m.values.resize(m.col_idx.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      m.values[k] = inv_sqrt[i] * inv_sqrt[m.col_idx[k]];
  return out;
}

/// Row (disease) and column (gene) orderings of the cross-type submatrix.
/// Both lists are ascending by NodeId.
struct BipartiteIndex {
  std::vector<NodeId> diseases;
  std::vector<NodeId> genes;

  friend bool operator==(const BipartiteIndex&, const BipartiteIndex&) = default;
};

inline BipartiteIndex bipartite_index(const Graph& g) {
  if (!g.is_heterogeneous())
    throw Error(ErrorCode::HomogeneousGraph, "graph needs at least one disease and one gene node");
  BipartiteIndex idx;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (g.kind(i) == NodeKind::Disease) idx.diseases.push_back(i);
    else if (g.kind(i) == NodeKind::Gene) idx.genes.push_back(i);
  }
  return idx;
}

}  // namespace dgp
