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
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dgp/error.hpp"
#include "dgp/graph.hpp"
#include "dgp/rng.hpp"

namespace dgp {

/// Bijection between node labels and dense ids, with a kind per label.
class IdMap {
 public:
  std::size_t size() const noexcept { return labels_.size(); }

  const std::string& label(NodeId id) const { return labels_.at(id); }
  NodeKind kind(NodeId id) const { return kinds_.at(id); }
  const std::vector<NodeKind>& kinds() const noexcept { return kinds_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<NodeId> find(std::string_view label) const {
    const auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeId at(std::string_view label) const {
    if (auto id = find(label)) return *id;
    throw Error(ErrorCode::UnknownLabel, std::string(label));
  }

  /// Returns the id for `label`, inserting it with `kind` if new. Returns
  /// nullopt when the label already exists under a different kind.
  std::optional<NodeId> intern(const std::string& label, NodeKind kind) {
    const auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(labels_.size()));
    if (inserted) {
      labels_.push_back(label);
      kinds_.push_back(kind);
    } else if (kinds_[it->second] != kind) {
      return std::nullopt;
    }
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<NodeKind> kinds_;
  std::unordered_map<std::string, NodeId> index_;
};

struct ColumnSpec {
  static constexpr std::size_t kLastColumn = std::numeric_limits<std::size_t>::max();

  std::size_t source = 0;
  /// kLastColumn selects the final field of each line.
  std::size_t target = 1;
};

struct KindByColumn {
  NodeKind source = NodeKind::Disease;
  NodeKind target = NodeKind::Gene;
};

/// First matching prefix wins; unmatched labels get `fallback`.
struct KindByPrefix {
  std::vector<std::pair<std::string, NodeKind>> prefixes;
  NodeKind fallback = NodeKind::Generic;
};

using KindRule = std::variant<KindByColumn, KindByPrefix>;

struct ParsedGraph {
  Graph graph;
  IdMap ids;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Splits on tabs when the line has any, otherwise on commas.
inline std::vector<std::string_view> split_fields(std::string_view line) {
  const char delim = line.find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline NodeKind kind_for(const KindRule& rule, std::string_view label, bool is_source) {
  if (const auto* by_col = std::get_if<KindByColumn>(&rule)) return is_source ? by_col->source : by_col->target;
  const auto& by_prefix = std::get<KindByPrefix>(rule);
  for (const auto& [prefix, kind] : by_prefix.prefixes)
    if (label.starts_with(prefix)) return kind;
  return by_prefix.fallback;
}

}  // namespace detail

/// Reads a line-oriented edge list. Blank lines and lines starting with '#'
/// are skipped; labels are trimmed and compared exactly.
inline ParsedGraph parse_edge_list(std::istream& in, const ColumnSpec& columns, const KindRule& rule) {
  ParsedGraph out;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::split_fields(line);
    const std::size_t src_col = columns.source;
    const std::size_t dst_col = columns.target == ColumnSpec::kLastColumn ? fields.size() - 1 : columns.target;
    if (fields.size() < 2 || src_col >= fields.size() || dst_col >= fields.size() || src_col == dst_col)
      throw MalformedLineError(line_no, "expected at least two columns");
    const std::string src(detail::trim(fields[src_col]));
    const std::string dst(detail::trim(fields[dst_col]));
    if (src.empty() || dst.empty()) throw MalformedLineError(line_no, "empty label");
    const auto a = out.ids.intern(src, detail::kind_for(rule, src, true));
    const auto b = out.ids.intern(dst, detail::kind_for(rule, dst, false));
    if (!a || !b) throw MalformedLineError(line_no, "label appears with two different node kinds");
    edges.push_back(Edge::make(*a, *b));
  }
  if (edges.empty()) throw Error(ErrorCode::EmptyInput, "no edge records");
  out.graph = Graph(out.ids.kinds(), edges);
  return out;
}

/// Disease-gene association TSV: disease id in the first column, gene id
/// in the last (the public miner file carries a disease-name column between
/// them). `swap_kinds` reads the first column as genes instead.
inline ParsedGraph load_biosnap_dg(std::istream& in, bool swap_kinds = false) {
  KindByColumn rule;
  if (swap_kinds) std::swap(rule.source, rule.target);
  return parse_edge_list(in, ColumnSpec{0, ColumnSpec::kLastColumn}, rule);
}

struct SbmParams {
  std::size_t n_disease = 40;
  std::size_t n_gene = 40;
  std::size_t blocks = 2;
  double p_in = 0.5;
  double p_out = 0.05;
  std::uint64_t seed = 0;
};

inline void validate(const SbmParams& p) {
  const bool ok = p.blocks >= 1 && p.n_disease >= p.blocks && p.n_gene >= p.blocks && p.p_out >= 0.0 &&
                  p.p_out <= p.p_in && p.p_in <= 1.0;
  if (!ok) throw Error(ErrorCode::InvalidParams, "SBM requires blocks >= 1, counts >= blocks, 0 <= p_out <= p_in <= 1");
}

/// Block of the k-th node of a kind with n members: contiguous ranges.
inline std::size_t sbm_block(std::size_t k, std::size_t n, std::size_t blocks) { return k * blocks / n; }

/// Planted-partition bipartite graph. Diseases take ids [0, n_disease),
/// genes follow. Only disease-gene edges are generated.
inline ParsedGraph synth_bipartite_sbm(const SbmParams& p) {
  validate(p);
  ParsedGraph out;
  for (std::size_t i = 0; i < p.n_disease; ++i) out.ids.intern("D" + std::to_string(i), NodeKind::Disease);
  for (std::size_t j = 0; j < p.n_gene; ++j) out.ids.intern("G" + std::to_string(j), NodeKind::Gene);
  Rng rng(p.seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < p.n_disease; ++i) {
    const std::size_t bi = sbm_block(i, p.n_disease, p.blocks);
    for (std::size_t j = 0; j < p.n_gene; ++j) {
      const double prob = bi == sbm_block(j, p.n_gene, p.blocks) ? p.p_in : p.p_out;
      if (rng.uniform() < prob)
        edges.push_back(Edge::make(static_cast<NodeId>(i), static_cast<NodeId>(p.n_disease + j)));
    }
  }
  out.graph = Graph(out.ids.kinds(), edges);
  return out;
}

}  // namespace dgp
