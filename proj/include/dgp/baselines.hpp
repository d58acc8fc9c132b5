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

// Random-walk embedding baselines: DeepWalk (uniform walks) and node2vec
// (second-order biased walks), both trained with skip-gram and negative
// sampling and scored with an inner-product + sigmoid decoder.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "dgp/alias.hpp"
#include "dgp/dense.hpp"
#include "dgp/error.hpp"
#include "dgp/graph.hpp"
#include "dgp/ingest.hpp"
#include "dgp/rng.hpp"

namespace dgp {

struct WalkConfig {
  std::size_t num_walks = 10;
  std::size_t walk_length = 80;
  std::size_t window = 10;
  /// Return parameter.
  double p = 1.0;
  /// In-out parameter.
  double q = 1.0;
  std::uint64_t seed = 0;

  bool is_uniform() const noexcept { return p == 1.0 && q == 1.0; }
};

inline void validate(const WalkConfig& c) {
  if (c.num_walks < 1 || c.walk_length < 1 || c.window < 1)
    throw Error(ErrorCode::InvalidParams, "walk counts must be >= 1");
  if (!(c.p > 0.0) || !(c.q > 0.0)) throw Error(ErrorCode::InvalidParams, "p and q must be > 0");
}

using Walk = std::vector<NodeId>;
using WalkCorpus = std::vector<Walk>;

/// Which transition sampler the walker uses. Auto picks uniform sampling
/// when p = q = 1 (the distributions coincide) and alias tables otherwise.
enum class TransitionSampler { Auto, FirstOrder, SecondOrder };

/// node2vec transition sampler over a graph without self-loops.
///
/// Second-order tables are precomputed per directed edge (prev -> cur):
/// neighbor x of cur gets weight 1/p if x == prev, 1 if x is adjacent to
/// prev, 1/q otherwise.
class Node2VecWalker {
 public:
  Node2VecWalker(const Graph& g, const WalkConfig& cfg, TransitionSampler sampler = TransitionSampler::Auto)
      : graph_(remove_self_loops(g)), cfg_(cfg) {
    validate(cfg);
    second_order_ = sampler == TransitionSampler::SecondOrder ||
                    (sampler == TransitionSampler::Auto && !cfg.is_uniform());
    if (second_order_) build_edge_tables();
  }

  const Graph& graph() const noexcept { return graph_; }
  bool second_order() const noexcept { return second_order_; }

  /// Unnormalized node2vec weight of stepping from cur to next after prev.
  double transition_weight(NodeId prev, NodeId next) const {
    if (next == prev) return 1.0 / cfg_.p;
    if (graph_.has_edge(prev, next)) return 1.0;
    return 1.0 / cfg_.q;
  }

  NodeId first_step(NodeId cur, Rng& rng) const {
    const auto nb = graph_.neighbors(cur);
    return nb[rng.uniform_int(nb.size())];
  }

  /// Next node given the previous edge prev -> cur. cur must have neighbors.
  NodeId step(NodeId prev, NodeId cur, Rng& rng) const {
    const auto nb = graph_.neighbors(cur);
    if (!second_order_) return nb[rng.uniform_int(nb.size())];
    const std::size_t e = edge_slot(prev, cur);
    const std::size_t off = edge_offset_[e];
    const std::span<const double> prob(prob_.data() + off, nb.size());
    const std::span<const std::uint32_t> alias(alias_.data() + off, nb.size());
    return nb[sample_alias(prob, alias, rng)];
  }

  /// Walk of at most walk_length nodes; stops early at an isolated node.
  Walk walk(NodeId start, Rng& rng) const {
    Walk w;
    w.reserve(cfg_.walk_length);
    w.push_back(start);
    while (w.size() < cfg_.walk_length) {
      const NodeId cur = w.back();
      if (graph_.neighbors(cur).empty()) break;
      w.push_back(w.size() == 1 ? first_step(cur, rng) : step(w[w.size() - 2], cur, rng));
    }
    return w;
  }

 private:
  /// CSR slot of the directed edge prev -> cur.
  std::size_t edge_slot(NodeId prev, NodeId cur) const {
    const auto nb = graph_.neighbors(prev);
    const auto it = std::lower_bound(nb.begin(), nb.end(), cur);
    return graph_.row_ptr()[prev] + static_cast<std::size_t>(it - nb.begin());
  }

  void build_edge_tables() {
    const auto col = graph_.col_idx();
    edge_offset_.resize(col.size() + 1, 0);
    for (std::size_t k = 0; k < col.size(); ++k) edge_offset_[k + 1] = edge_offset_[k] + graph_.neighbors(col[k]).size();
    prob_.resize(edge_offset_.back());
    alias_.resize(edge_offset_.back());
    std::vector<double> weights;
    for (NodeId prev = 0; prev < graph_.num_nodes(); ++prev) {
      for (std::size_t k = graph_.row_ptr()[prev]; k < graph_.row_ptr()[prev + 1]; ++k) {
        const NodeId cur = col[k];
        const auto nb = graph_.neighbors(cur);
        weights.clear();
        for (NodeId x : nb) weights.push_back(transition_weight(prev, x));
        const std::size_t off = edge_offset_[k];
        build_alias(weights, std::span<double>(prob_.data() + off, nb.size()),
                    std::span<std::uint32_t>(alias_.data() + off, nb.size()));
      }
    }
  }

  Graph graph_;
  WalkConfig cfg_;
  bool second_order_ = false;
  std::vector<std::size_t> edge_offset_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// num_walks rounds; each round visits every node once in a shuffled order.
/// Every walk draws from its own stream derived from (seed, round, start),
/// so the corpus does not depend on generation order.
inline WalkCorpus generate_walks(const Graph& g, const WalkConfig& cfg,
                                 TransitionSampler sampler = TransitionSampler::Auto) {
  const Node2VecWalker walker(g, cfg, sampler);
  const std::size_t n = g.num_nodes();
  WalkCorpus corpus;
  corpus.reserve(n * cfg.num_walks);
  Rng order_rng(derive_seed(cfg.seed, 0));
  std::vector<NodeId> order(n);
  for (std::size_t r = 0; r < cfg.num_walks; ++r) {
    for (NodeId i = 0; i < n; ++i) order[i] = i;
    order_rng.shuffle(std::span<NodeId>(order));
    for (NodeId start : order) {
      Rng walk_rng(derive_seed(cfg.seed, 1 + r * n + start));
      corpus.push_back(walker.walk(start, walk_rng));
    }
  }
  return corpus;
}

/// Whitespace-separated labels, one walk per line.
inline void write_corpus(std::ostream& out, const WalkCorpus& corpus, const IdMap& ids) {
  for (const Walk& w : corpus) {
    for (std::size_t k = 0; k < w.size(); ++k) out << (k ? " " : "") << ids.label(w[k]);
    out << '\n';
  }
}

struct SgnsConfig {
  std::size_t dim = 128;
  std::size_t negatives = 5;
  std::size_t epochs = 1;
  double step_size = 0.025;
  std::size_t window = 10;
  std::uint64_t seed = 0;
};

struct Embeddings {
  DenseMatrix table;

  friend bool operator==(const Embeddings&, const Embeddings&) = default;
};

/// Skip-gram with negative sampling over all (center, context) pairs within
/// `window`. Plain SGD with a linearly decaying step; negatives are drawn
/// from the corpus unigram distribution raised to 3/4. Returns the
/// input-side vectors.
inline Embeddings train_sgns(const WalkCorpus& corpus, std::size_t num_nodes, const SgnsConfig& cfg) {
  std::size_t tokens = 0;
  std::vector<double> counts(num_nodes, 0.0);
  for (const Walk& w : corpus) {
    tokens += w.size();
    for (NodeId v : w) {
      if (v >= num_nodes) throw Error(ErrorCode::IndexOutOfRange, "walk node id");
      counts[v] += 1.0;
    }
  }
  if (tokens == 0) throw Error(ErrorCode::EmptyCorpus, "no walks to train on");
  if (cfg.dim < 1 || cfg.window < 1) throw Error(ErrorCode::InvalidParams, "dim and window must be >= 1");

  Rng rng(cfg.seed);
  const auto d = cfg.dim;
  Embeddings emb{DenseMatrix(num_nodes, d)};
  for (double& v : emb.table.values()) v = (rng.uniform() - 0.5) / static_cast<double>(d);
  if (cfg.epochs == 0) return emb;

  DenseMatrix context(num_nodes, d);
  std::vector<double> noise_weights(num_nodes);
  for (std::size_t v = 0; v < num_nodes; ++v) noise_weights[v] = std::pow(counts[v], 0.75);
  const AliasTable noise(noise_weights);

  std::vector<double> grad_in(d);
  const double total = static_cast<double>(tokens * cfg.epochs);
  std::size_t processed = 0;
  const auto window = static_cast<std::ptrdiff_t>(cfg.window);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const Walk& w : corpus) {
      const auto len = static_cast<std::ptrdiff_t>(w.size());
      for (std::ptrdiff_t c = 0; c < len; ++c, ++processed) {
        const double lr = cfg.step_size * std::max(1e-4, 1.0 - static_cast<double>(processed) / total);
        auto in = emb.table.row(w[c]);
        for (std::ptrdiff_t o = std::max<std::ptrdiff_t>(0, c - window); o <= std::min(len - 1, c + window); ++o) {
          if (o == c) continue;
          std::fill(grad_in.begin(), grad_in.end(), 0.0);
          const NodeId positive = w[o];
          for (std::size_t s = 0; s <= cfg.negatives; ++s) {
            NodeId target = positive;
            double label = 1.0;
            if (s > 0) {
              target = static_cast<NodeId>(noise.sample(rng));
              if (target == positive) continue;
              label = 0.0;
            }
            auto out = context.row(target);
            const double g = (label - sigmoid(dot(in, out))) * lr;
            for (std::size_t k = 0; k < d; ++k) grad_in[k] += g * out[k];
            for (std::size_t k = 0; k < d; ++k) out[k] += g * in[k];
          }
          for (std::size_t k = 0; k < d; ++k) in[k] += grad_in[k];
        }
      }
    }
  }
  check_finite(emb.table, "sgns embeddings");
  return emb;
}

inline double score_logit(const Embeddings& emb, NodeId i, NodeId j) {
  if (i >= emb.table.rows() || j >= emb.table.rows()) throw Error(ErrorCode::IndexOutOfRange, "score_pair: node id");
  return dot(emb.table.row(i), emb.table.row(j));
}

/// sigmoid(e_i · e_j)
inline double score_pair(const Embeddings& emb, NodeId i, NodeId j) { return sigmoid(score_logit(emb, i, j)); }

}  // namespace dgp
