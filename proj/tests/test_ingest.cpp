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
#include <cmath>
#include <sstream>

#include "dgp/ingest.hpp"

namespace dgp {
namespace {

ParsedGraph parse(const std::string& text, KindRule rule = KindByColumn{}) {
  std::istringstream in(text);
  return parse_edge_list(in, ColumnSpec{}, rule);
}

std::vector<std::size_t> degree_multiset(const Graph& g) {
  std::vector<std::size_t> d;
  for (NodeId i = 0; i < g.num_nodes(); ++i) d.push_back(g.neighbors(i).size());
  std::sort(d.begin(), d.end());
  return d;
}

TEST(ParseEdgeList, TwoRecords) {
  const auto p = parse("D1\tG1\nD1\tG2\n");
  EXPECT_EQ(p.graph.num_nodes(), 3u);
  EXPECT_EQ(p.graph.num_edges(), 2u);
  EXPECT_EQ(p.ids.kind(p.ids.at("D1")), NodeKind::Disease);
  EXPECT_EQ(p.ids.kind(p.ids.at("G2")), NodeKind::Gene);
}

TEST(ParseEdgeList, CommentsBlanksWhitespaceAndDuplicates) {
  const auto p = parse("# header\n\n  D1 , G1 \nD1,G1\n#D9,G9\nD2,G1\n");
  EXPECT_EQ(p.graph.num_nodes(), 3u);
  EXPECT_EQ(p.graph.num_edges(), 2u);
  EXPECT_TRUE(p.ids.find("D1").has_value());
  EXPECT_FALSE(p.ids.find("D9").has_value());
}

TEST(ParseEdgeList, LabelsAreCaseSensitive) {
  const auto p = parse("D1\tbrca1\nD1\tBRCA1\n");
  EXPECT_EQ(p.graph.num_nodes(), 3u);
}

TEST(ParseEdgeList, HeaderOnlyIsEmptyInput) {
  try {
    parse("# disease\tgene\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(ParseEdgeList, OneColumnLineReportsLineNumber) {
  try {
    parse("# header\nD1\tG1\nD2\n");
    FAIL();
  } catch (const MalformedLineError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedLine);
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseEdgeList, KindConflictIsMalformed) {
  EXPECT_THROW(parse("X\tY\nY\tZ\n"), MalformedLineError);
}

TEST(ParseEdgeList, KindByPrefix) {
  const KindByPrefix rule{{{"C", NodeKind::Disease}, {"G", NodeKind::Gene}}, NodeKind::Generic};
  const auto p = parse("C001\tG7\nG7\tX1\n", rule);
  EXPECT_EQ(p.ids.kind(p.ids.at("C001")), NodeKind::Disease);
  EXPECT_EQ(p.ids.kind(p.ids.at("G7")), NodeKind::Gene);
  EXPECT_EQ(p.ids.kind(p.ids.at("X1")), NodeKind::Generic);
}

TEST(ParseEdgeList, PermutedLinesGiveIsomorphicGraphs) {
  std::vector<std::string> lines;
  Rng rng(3);
  for (int k = 0; k < 60; ++k)
    lines.push_back("D" + std::to_string(rng.uniform_int(8)) + "\tG" + std::to_string(rng.uniform_int(15)));
  const auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& l : v) s += l + "\n";
    return s;
  };
  const auto a = parse(join(lines));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto shuffled = lines;
    Rng r(seed);
    r.shuffle(std::span<std::string>(shuffled));
    const auto b = parse(join(shuffled));
    EXPECT_EQ(b.graph.num_nodes(), a.graph.num_nodes());
    EXPECT_EQ(b.graph.num_edges(), a.graph.num_edges());
    EXPECT_EQ(degree_multiset(b.graph), degree_multiset(a.graph));
    for (const Edge& e : a.graph.edges())
      EXPECT_TRUE(b.graph.has_edge(b.ids.at(a.ids.label(e.u)), b.ids.at(a.ids.label(e.v))));
  }
}

constexpr const char* kToyBiosnap =
    "# Disease ID\tDisease Name\tGene ID\n"
    "C0001\tasthma\t1017\n"
    "C0001\tasthma\t7157\n"
    "C0002\tgout\t7157\n";

TEST(LoadBiosnap, ToyFileCounts) {
  std::istringstream in(kToyBiosnap);
  const auto p = load_biosnap_dg(in);
  EXPECT_EQ(p.graph.count_kind(NodeKind::Disease), 2u);
  EXPECT_EQ(p.graph.count_kind(NodeKind::Gene), 2u);
  EXPECT_EQ(p.graph.num_edges(), 3u);
  EXPECT_EQ(p.ids.kind(p.ids.at("C0002")), NodeKind::Disease);
  EXPECT_EQ(p.ids.kind(p.ids.at("7157")), NodeKind::Gene);
  EXPECT_FALSE(p.ids.find("asthma").has_value());
}

TEST(LoadBiosnap, SwappedKindsKeepEdges) {
  std::istringstream a_in(kToyBiosnap), b_in(kToyBiosnap);
  const auto a = load_biosnap_dg(a_in);
  const auto b = load_biosnap_dg(b_in, true);
  EXPECT_TRUE(std::ranges::equal(a.graph.edges(), b.graph.edges()));
  for (NodeId i = 0; i < a.graph.num_nodes(); ++i) {
    const NodeKind ka = a.graph.kind(i), kb = b.graph.kind(i);
    EXPECT_EQ(kb, ka == NodeKind::Disease ? NodeKind::Gene : NodeKind::Disease);
  }
}

TEST(Sbm, CompleteBipartite) {
  const auto p = synth_bipartite_sbm({5, 7, 1, 1.0, 0.0, 4});
  EXPECT_EQ(p.graph.num_nodes(), 12u);
  EXPECT_EQ(p.graph.num_edges(), 35u);
}

TEST(Sbm, EmptyGraph) {
  const auto p = synth_bipartite_sbm({5, 7, 1, 0.0, 0.0, 4});
  EXPECT_EQ(p.graph.num_edges(), 0u);
  EXPECT_EQ(p.graph.num_nodes(), 12u);
}

TEST(Sbm, EdgeCountWithinThreeSigma) {
  // 200 same-block pairs at 0.5 and 200 cross-block pairs at 0.05.
  const double mean = 0.5 * 200 + 0.05 * 200;
  const double sigma = std::sqrt(200 * 0.5 * 0.5 + 200 * 0.05 * 0.95);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto p = synth_bipartite_sbm({20, 20, 2, 0.5, 0.05, seed});
    EXPECT_LE(std::abs(static_cast<double>(p.graph.num_edges()) - mean), 3.0 * sigma) << "seed " << seed;
  }
}

TEST(Sbm, DeterministicAndCrossTypeOnly) {
  const SbmParams params{30, 25, 3, 0.4, 0.1, 77};
  const auto a = synth_bipartite_sbm(params);
  const auto b = synth_bipartite_sbm(params);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.ids.labels(), b.ids.labels());
  for (const Edge& e : a.graph.edges()) EXPECT_TRUE(a.graph.is_cross_type(e.u, e.v));
}

TEST(Sbm, InvalidParams) {
  EXPECT_THROW(synth_bipartite_sbm({5, 5, 1, 0.1, 0.2, 0}), Error);
  EXPECT_THROW(synth_bipartite_sbm({5, 5, 0, 0.5, 0.1, 0}), Error);
  EXPECT_THROW(synth_bipartite_sbm({2, 5, 3, 0.5, 0.1, 0}), Error);
  EXPECT_THROW(synth_bipartite_sbm({5, 5, 1, 1.5, 0.1, 0}), Error);
}

}  // namespace
}  // namespace dgp
