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


#include <gtest/gtest.h>

#include <algorithm>

#include "dgp/ingest.hpp"
#include "dgp/split.hpp"
#include "fixtures.hpp"

namespace dgp {
namespace {

Graph general_graph_with_edges(std::size_t m) {
  // A path plus chords, exactly m edges on 40 nodes.
  std::vector<Edge> e;
  for (NodeId i = 0; i < 40 && e.size() < m; ++i)
    for (NodeId j = i + 1; j < 40 && e.size() < m; j += 3) e.push_back({i, j});
  return Graph(std::vector<NodeKind>(40, NodeKind::Generic), e);
}

/// Heterogeneous graph with cross edges plus a few same-type edges.
Graph mixed_graph() {
  auto g = synth_bipartite_sbm({15, 20, 2, 0.5, 0.1, 9}).graph;
  std::vector<Edge> e(g.edges().begin(), g.edges().end());
  e.push_back({0, 1});
  e.push_back({15, 16});
  e.push_back({20, 30});
  return Graph({g.kinds().begin(), g.kinds().end()}, e);
}

EdgeSet as_set(const std::vector<Edge>& v) { return EdgeSet(v.begin(), v.end()); }

void check_invariants(const Graph& g, const EdgeSplit& s) {
  EdgeSet all_pos;
  for (const auto* part : {&s.train_edges, &s.val_pos, &s.test_pos})
    for (const Edge& e : *part) {
      EXPECT_TRUE(g.has_edge(e.u, e.v));
      EXPECT_TRUE(all_pos.insert(e).second) << "duplicated positive";
    }
  std::size_t non_loop = 0;
  for (const Edge& e : g.edges()) non_loop += !e.is_self_loop();
  EXPECT_EQ(all_pos.size(), non_loop);

  EXPECT_EQ(s.val_neg.size(), s.val_pos.size());
  EXPECT_EQ(s.test_neg.size(), s.test_pos.size());
  EdgeSet negs;
  for (const auto* part : {&s.val_neg, &s.test_neg})
    for (const Edge& e : *part) {
      EXPECT_FALSE(g.has_edge(e.u, e.v));
      EXPECT_FALSE(e.is_self_loop());
      EXPECT_TRUE(negs.insert(e).second) << "duplicated negative";
    }
  if (s.policy == SplitPolicy::Bipartite) {
    for (const auto* part : {&s.val_pos, &s.val_neg, &s.test_pos, &s.test_neg})
      for (const Edge& e : *part) EXPECT_TRUE(g.is_cross_type(e.u, e.v));
  }

  const Graph train = training_graph(g, s);
  EXPECT_EQ(train.num_nodes(), g.num_nodes());
  for (const auto* part : {&s.val_pos, &s.test_pos})
    for (const Edge& e : *part) EXPECT_FALSE(train.has_edge(e.u, e.v));
  for (const Edge& e : s.train_edges) EXPECT_TRUE(train.has_edge(e.u, e.v));
}

TEST(SplitEdges, HundredEdgesEightyTenTen) {
  const Graph g = general_graph_with_edges(100);
  ASSERT_EQ(g.num_edges(), 100u);
  const auto s = split_edges(g, {}, SplitPolicy::General, 1);
  EXPECT_EQ(s.train_edges.size(), 80u);
  EXPECT_EQ(s.val_pos.size(), 10u);
  EXPECT_EQ(s.test_pos.size(), 10u);
  check_invariants(g, s);
}

TEST(SplitEdges, AllTrain) {
  const Graph g = general_graph_with_edges(50);
  const auto s = split_edges(g, {1.0, 0.0, 0.0}, SplitPolicy::General, 1);
  EXPECT_EQ(s.train_edges.size(), 50u);
  EXPECT_TRUE(s.val_pos.empty() && s.test_pos.empty() && s.val_neg.empty() && s.test_neg.empty());
}

TEST(SplitEdges, Deterministic) {
  const Graph g = mixed_graph();
  EXPECT_EQ(split_edges(g, {}, SplitPolicy::Bipartite, 5), split_edges(g, {}, SplitPolicy::Bipartite, 5));
  EXPECT_NE(split_edges(g, {}, SplitPolicy::Bipartite, 5), split_edges(g, {}, SplitPolicy::Bipartite, 6));
}

TEST(SplitEdges, InvariantsAcrossSeedsAndPolicies) {
  const Graph mixed = mixed_graph();
  const Graph generic = testing::random_graph(30, 0.2, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    check_invariants(mixed, split_edges(mixed, {}, SplitPolicy::Bipartite, seed));
    check_invariants(mixed, split_edges(mixed, {}, SplitPolicy::General, seed));
    check_invariants(generic, split_edges(generic, {0.6, 0.2, 0.2}, SplitPolicy::General, seed));
  }
}

TEST(SplitEdges, BipartiteKeepsSameTypeEdgesInTrain) {
  const Graph g = mixed_graph();
  const auto s = split_edges(g, {}, SplitPolicy::Bipartite, 2);
  const EdgeSet train = as_set(s.train_edges);
  EXPECT_TRUE(train.contains(Edge{0, 1}));
  EXPECT_TRUE(train.contains(Edge{15, 16}));
  EXPECT_TRUE(train.contains(Edge{20, 30}));
}

TEST(SplitEdges, SelfLoopsAreNotSplit) {
  const Graph g = add_self_loops(general_graph_with_edges(30));
  const auto s = split_edges(g, {}, SplitPolicy::General, 3);
  for (const auto* part : {&s.train_edges, &s.val_pos, &s.test_pos})
    for (const Edge& e : *part) EXPECT_FALSE(e.is_self_loop());
  EXPECT_EQ(s.train_edges.size() + s.val_pos.size() + s.test_pos.size(), 30u);
}

TEST(SplitEdges, Errors) {
  const auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::BadFormat;
  };
  EXPECT_EQ(code_of([] { split_edges(general_graph_with_edges(9), {}, SplitPolicy::General, 0); }),
            ErrorCode::TooFewEdges);
  EXPECT_EQ(code_of([] { split_edges(general_graph_with_edges(50), {}, SplitPolicy::Bipartite, 0); }),
            ErrorCode::PolicyMismatch);
  EXPECT_EQ(code_of([] { split_edges(general_graph_with_edges(50), {0.5, 0.2, 0.2}, SplitPolicy::General, 0); }),
            ErrorCode::InvalidParams);
  EXPECT_EQ(code_of([] { split_edges(general_graph_with_edges(50), {1.1, -0.1, 0.0}, SplitPolicy::General, 0); }),
            ErrorCode::InvalidParams);
}

TEST(SampleNegatives, CompleteGraphIsExhausted) {
  try {
    sample_negatives(testing::complete_graph(5), 1, SplitPolicy::General, {}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExhaustedSpace);
  }
}

TEST(SampleNegatives, EmptyGraphGivesEveryPair) {
  const Graph g(std::vector<NodeKind>(4, NodeKind::Generic), {});
  const auto neg = sample_negatives(g, 6, SplitPolicy::General, {}, 0);
  EXPECT_EQ(neg, (std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
}

TEST(SampleNegatives, BipartiteRemainder) {
  // Diseases 0, 1; genes 2, 3, 4; non-edges (0, 4) and (1, 2).
  const std::vector<NodeKind> kinds{NodeKind::Disease, NodeKind::Disease, NodeKind::Gene, NodeKind::Gene,
                                    NodeKind::Gene};
  const Graph g(kinds, std::vector<Edge>{{0, 2}, {0, 3}, {1, 3}, {1, 4}});
  EXPECT_EQ(sample_negatives(g, 2, SplitPolicy::Bipartite, {}, 11), (std::vector<Edge>{{0, 4}, {1, 2}}));
  EXPECT_THROW(sample_negatives(g, 3, SplitPolicy::Bipartite, {}, 11), Error);
  const EdgeSet exclude{Edge{0, 4}};
  EXPECT_EQ(sample_negatives(g, 1, SplitPolicy::Bipartite, exclude, 11), (std::vector<Edge>{{1, 2}}));
}

TEST(SampleNegatives, SparseRegimeAvoidsEdgesAndExclusions) {
  const Graph g = testing::random_graph(60, 0.1, 8);
  const auto first = sample_negatives(g, 50, SplitPolicy::General, {}, 1);
  const EdgeSet exclude = as_set(first);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto neg = sample_negatives(g, 100, SplitPolicy::General, exclude, seed);
    EXPECT_EQ(neg.size(), 100u);
    EXPECT_EQ(as_set(neg).size(), 100u);
    for (const Edge& e : neg) {
      EXPECT_FALSE(g.has_edge(e.u, e.v));
      EXPECT_FALSE(exclude.contains(e));
      EXPECT_NE(e.u, e.v);
    }
  }
}

}  // namespace
}  // namespace dgp
