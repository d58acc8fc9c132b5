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

// Variational graph auto-encoder with a two-layer GCN encoder and an
// inner-product decoder, plus the constrained variant whose reconstruction
// term only covers disease-gene pairs.
//
// Node features are the identity, so the first GCN layer is Ã·W0 with W0
// holding one row per node. Gradients are written out by hand for this fixed
// architecture:
//
//   P  = Ã W0             H  = relu(P)          Hd = H ⊙ mask
//   AH = Ã Hd             mu = AH W_mu          ls = AH W_sigma
//   z  = mu + exp(ls) ⊙ eps
//   loss = BCE(z zᵀ | targets) + kl_weight · KL(mu, ls)

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dgp/adam.hpp"
#include "dgp/dense.hpp"
#include "dgp/error.hpp"
#include "dgp/graph.hpp"
#include "dgp/metrics.hpp"
#include "dgp/rng.hpp"
#include "dgp/sparse.hpp"
#include "dgp/split.hpp"

namespace dgp {

enum class Objective { Vgae, Cvgae };

inline constexpr std::string_view to_string(Objective o) { return o == Objective::Vgae ? "vgae" : "cvgae"; }

/// Positive-class weight in the reconstruction BCE. Automatic mode uses
/// (#entries - #positives) / #positives of the current target set.
struct PosWeight {
  bool automatic = true;
  double value = 1.0;

  static PosWeight fixed(double w) { return {false, w}; }
};

struct VgaeConfig {
  std::size_t hidden_dim = 200;
  std::size_t latent_dim = 20;
  double keep_prob = 0.5;
  AdamHyper adam{};
  /// Full-batch epochs. A literal reading of the original two-iteration
  /// schedule is epochs = 2.
  std::size_t epochs = 200;
  /// Unset means 1 / N.
  std::optional<double> kl_weight;
  PosWeight pos_weight{};
  std::uint64_t seed = 0;

  double effective_kl_weight(std::size_t num_nodes) const {
    return kl_weight ? *kl_weight : 1.0 / static_cast<double>(num_nodes);
  }
};

inline void validate(const VgaeConfig& c) {
  if (c.hidden_dim < 1 || c.latent_dim < 1) throw Error(ErrorCode::InvalidParams, "dimensions must be >= 1");
  if (!(c.keep_prob > 0.0 && c.keep_prob <= 1.0)) throw Error(ErrorCode::InvalidKeepProb, "keep_prob not in (0, 1]");
  if (c.kl_weight && !(*c.kl_weight >= 0.0)) throw Error(ErrorCode::InvalidParams, "kl_weight must be >= 0");
  if (!c.pos_weight.automatic && !(c.pos_weight.value > 0.0))
    throw Error(ErrorCode::InvalidParams, "fixed pos_weight must be > 0");
}

/// Encoder weights. The first layer is shared by the mean and log-std heads.
struct VgaeParams {
  DenseMatrix w0;
  DenseMatrix w1_mu;
  DenseMatrix w1_sigma;

  friend bool operator==(const VgaeParams&, const VgaeParams&) = default;
};

inline VgaeParams init_params(std::size_t num_nodes, const VgaeConfig& c, Rng& rng) {
  VgaeParams p;
  p.w0 = glorot_uniform(num_nodes, c.hidden_dim, rng);
  p.w1_mu = glorot_uniform(c.hidden_dim, c.latent_dim, rng);
  p.w1_sigma = glorot_uniform(c.hidden_dim, c.latent_dim, rng);
  return p;
}

struct LatentSample {
  DenseMatrix mu;
  DenseMatrix log_sigma;
  DenseMatrix z;
  DenseMatrix epsilon;
};

/// The two random draws of a training forward pass. Holding them fixed makes
/// the forward pass a deterministic function of the weights.
struct EncoderNoise {
  /// Inverted-dropout mask on the hidden layer; empty means no dropout.
  DenseMatrix dropout_mask;
  /// Reparametrization noise; empty means z = mu.
  DenseMatrix epsilon;
};

inline EncoderNoise draw_noise(std::size_t num_nodes, const VgaeConfig& c, Rng& rng) {
  EncoderNoise noise;
  noise.dropout_mask = dropout_mask(num_nodes, c.hidden_dim, c.keep_prob, rng);
  noise.epsilon = sample_standard_normal(num_nodes, c.latent_dim, rng);
  return noise;
}

/// Forward intermediates needed by backward().
struct EncoderTrace {
  DenseMatrix pre_hidden;
  DenseMatrix hidden_dropped;
  DenseMatrix aggregated;
  /// Empty when no dropout was applied.
  DenseMatrix dropout_mask;
  LatentSample latent;
};

/// z = mu + exp(log_sigma) ⊙ epsilon
inline DenseMatrix reparametrize_with(const DenseMatrix& mu, const DenseMatrix& log_sigma, const DenseMatrix& epsilon) {
  detail::require_shape(mu.same_shape(log_sigma) && mu.same_shape(epsilon), "reparametrize");
  DenseMatrix z(mu.rows(), mu.cols());
  auto zv = z.values();
  auto m = mu.values();
  auto ls = log_sigma.values();
  auto e = epsilon.values();
  for (std::size_t k = 0; k < zv.size(); ++k) zv[k] = m[k] + std::exp(ls[k]) * e[k];
  return z;
}

struct Reparametrized {
  DenseMatrix z;
  DenseMatrix epsilon;
};

inline Reparametrized reparametrize(const DenseMatrix& mu, const DenseMatrix& log_sigma, Rng& rng) {
  detail::require_shape(mu.same_shape(log_sigma), "reparametrize");
  DenseMatrix eps = sample_standard_normal(mu.rows(), mu.cols(), rng);
  DenseMatrix z = reparametrize_with(mu, log_sigma, eps);
  return {std::move(z), std::move(eps)};
}

inline EncoderTrace encode_trace(const NormalizedAdjacency& adj, const VgaeParams& p, const EncoderNoise& noise) {
  const std::size_t n = adj.size();
  detail::require_shape(p.w0.rows() == n, "encode: W0 rows != node count");
  detail::require_shape(p.w1_mu.rows() == p.w0.cols() && p.w1_sigma.rows() == p.w0.cols(), "encode: W1 rows");
  detail::require_shape(p.w1_mu.same_shape(p.w1_sigma), "encode: W1 heads differ");

  EncoderTrace t;
  t.pre_hidden = spmm(adj.matrix, p.w0);
  DenseMatrix hidden = relu(t.pre_hidden);
  if (!noise.dropout_mask.empty()) {
    detail::require_shape(noise.dropout_mask.same_shape(hidden), "encode: dropout mask");
    t.hidden_dropped = dropout_backward(hidden, noise.dropout_mask);
    t.dropout_mask = noise.dropout_mask;
  } else {
    t.hidden_dropped = std::move(hidden);
  }
  t.aggregated = spmm(adj.matrix, t.hidden_dropped);
  t.latent.mu = matmul(t.aggregated, p.w1_mu);
  t.latent.log_sigma = matmul(t.aggregated, p.w1_sigma);
  if (!noise.epsilon.empty()) {
    t.latent.epsilon = noise.epsilon;
    t.latent.z = reparametrize_with(t.latent.mu, t.latent.log_sigma, t.latent.epsilon);
  } else {
    t.latent.epsilon = DenseMatrix(t.latent.mu.rows(), t.latent.mu.cols());
    t.latent.z = t.latent.mu;
  }
  return t;
}

/// Runs the encoder. With train_mode off there is no dropout and z = mu.
inline LatentSample encode(const NormalizedAdjacency& adj, const VgaeParams& p, const VgaeConfig& c, Rng& rng,
                           bool train_mode) {
  EncoderNoise noise;
  if (train_mode) noise = draw_noise(adj.size(), c, rng);
  return encode_trace(adj, p, noise).latent;
}

inline double decode_logit(const DenseMatrix& z, NodeId i, NodeId j) {
  if (i >= z.rows() || j >= z.rows()) throw Error(ErrorCode::IndexOutOfRange, "decode: node id");
  return dot(z.row(i), z.row(j));
}

inline double decode_probability(const DenseMatrix& z, NodeId i, NodeId j) { return sigmoid(decode_logit(z, i, j)); }

inline std::vector<double> decode_logits(const DenseMatrix& z, std::span<const Edge> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) out.push_back(decode_logit(z, e.u, e.v));
  return out;
}

/// Σ ½(exp(2 ls) + mu² − 1 − 2 ls) over all entries: KL(q ‖ N(0, I)).
inline double kl_gaussian(const DenseMatrix& mu, const DenseMatrix& log_sigma) {
  detail::require_shape(mu.same_shape(log_sigma), "kl_gaussian");
  auto m = mu.values();
  auto ls = log_sigma.values();
  double s = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) s += 0.5 * (std::exp(2.0 * ls[k]) + m[k] * m[k] - 1.0 - 2.0 * ls[k]);
  return s;
}

struct LossBreakdown {
  double total = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
};

/// The adjacency entries the decoder is asked to reconstruct.
///
/// Full: every ordered pair (i, j) of the N×N adjacency, diagonal = 1.
/// Cross: every (disease, gene) pair of the bipartite submatrix, once each.
class ReconstructionTarget {
 public:
  static ReconstructionTarget full(const Graph& adjacency) {
    ReconstructionTarget t(adjacency, Objective::Vgae);
    const std::size_t n = adjacency.num_nodes();
    std::size_t off_diagonal = 0;
    for (const Edge& e : adjacency.edges())
      if (!e.is_self_loop()) ++off_diagonal;
    t.entries_ = n * n;
    t.positives_ = 2 * off_diagonal + n;
    return t;
  }

  static ReconstructionTarget cross(const Graph& adjacency, BipartiteIndex index) {
    ReconstructionTarget t(adjacency, Objective::Cvgae);
    t.index_ = std::move(index);
    t.entries_ = t.index_.diseases.size() * t.index_.genes.size();
    for (const Edge& e : adjacency.edges())
      if (adjacency.is_cross_type(e.u, e.v)) ++t.positives_;
    return t;
  }

  Objective objective() const noexcept { return objective_; }
  const Graph& adjacency() const noexcept { return *adjacency_; }
  const BipartiteIndex& index() const noexcept { return index_; }
  std::size_t entries() const noexcept { return entries_; }
  std::size_t positives() const noexcept { return positives_; }

  double auto_pos_weight() const noexcept {
    if (positives_ == 0) return 1.0;
    return static_cast<double>(entries_ - positives_) / static_cast<double>(positives_);
  }

 private:
  ReconstructionTarget(const Graph& adjacency, Objective o) : adjacency_(&adjacency), objective_(o) {}

  const Graph* adjacency_;
  Objective objective_;
  BipartiteIndex index_;
  std::size_t entries_ = 0;
  std::size_t positives_ = 0;
};

struct LossOptions {
  double kl_weight = 0.0;
  PosWeight pos_weight{};
};

namespace detail {

/// Weighted BCE on a logit and its derivative w.r.t. the logit.
struct BceTerm {
  double loss;
  double grad;
};

inline BceTerm weighted_bce(double logit, bool positive, double pos_weight) {
  if (positive) return {pos_weight * softplus(-logit), pos_weight * (sigmoid(logit) - 1.0)};
  return {softplus(logit), sigmoid(logit)};
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

}  // namespace detail

/// Mean weighted BCE over the target entries. When `grad_z` is non-null it
/// receives d(reconstruction)/dz.
inline double reconstruction_loss(const DenseMatrix& z, const ReconstructionTarget& target, double pos_weight,
                                  DenseMatrix* grad_z) {
  const Graph& adj = target.adjacency();
  detail::require_shape(z.rows() == adj.num_nodes(), "reconstruction: z rows != node count");
  if (grad_z) *grad_z = DenseMatrix(z.rows(), z.cols());
  if (target.entries() == 0) return 0.0;
  const double inv_m = 1.0 / static_cast<double>(target.entries());
  double sum = 0.0;

  if (target.objective() == Objective::Vgae) {
    // Logits are symmetric, so visit j >= i and count off-diagonal pairs twice.
    const std::size_t n = z.rows();
    for (NodeId i = 0; i < n; ++i) {
      const auto nb = adj.neighbors(i);
      auto it = std::lower_bound(nb.begin(), nb.end(), i);
      const auto zi = z.row(i);
      for (NodeId j = i; j < n; ++j) {
        while (it != nb.end() && *it < j) ++it;
        const bool positive = (i == j) || (it != nb.end() && *it == j);
        const auto zj = z.row(j);
        const auto term = detail::weighted_bce(dot(zi, zj), positive, pos_weight);
        const double mult = i == j ? 1.0 : 2.0;
        sum += mult * term.loss;
        if (grad_z) {
          const double g = 2.0 * term.grad * inv_m;
          detail::axpy(g, zj, grad_z->row(i));
          if (i != j) detail::axpy(g, zi, grad_z->row(j));
        }
      }
    }
  } else {
    const auto& idx = target.index();
    for (NodeId d : idx.diseases) {
      const auto zd = z.row(d);
      for (NodeId gene : idx.genes) {
        const auto zg = z.row(gene);
        const auto term = detail::weighted_bce(dot(zd, zg), adj.has_edge(d, gene), pos_weight);
        sum += term.loss;
        if (grad_z) {
          const double g = term.grad * inv_m;
          detail::axpy(g, zg, grad_z->row(d));
          detail::axpy(g, zd, grad_z->row(gene));
        }
      }
    }
  }
  return sum * inv_m;
}

inline double resolve_pos_weight(const PosWeight& pw, const ReconstructionTarget& t) {
  return pw.automatic ? t.auto_pos_weight() : pw.value;
}

inline LossBreakdown compute_loss(const LatentSample& s, const ReconstructionTarget& target, const LossOptions& opt) {
  LossBreakdown l;
  l.reconstruction = reconstruction_loss(s.z, target, resolve_pos_weight(opt.pos_weight, target), nullptr);
  l.kl = kl_gaussian(s.mu, s.log_sigma);
  l.total = l.reconstruction + opt.kl_weight * l.kl;
  return l;
}

/// Negative ELBO with the full adjacency (self-loops on the diagonal) as
/// reconstruction target.
inline LossBreakdown loss_vgae(const LatentSample& s, const Graph& adjacency, const LossOptions& opt) {
  return compute_loss(s, ReconstructionTarget::full(adjacency), opt);
}

/// Negative ELBO with only the disease × gene submatrix as reconstruction
/// target. The KL term is unchanged.
inline LossBreakdown loss_cvgae(const LatentSample& s, const Graph& adjacency, const BipartiteIndex& index,
                                const LossOptions& opt) {
  return compute_loss(s, ReconstructionTarget::cross(adjacency, index), opt);
}

/// Reverse pass from d(reconstruction)/dz through the reparametrization, the
/// KL term and both GCN layers.
inline VgaeParams backward(const NormalizedAdjacency& adj, const VgaeParams& p, const EncoderTrace& t,
                           const DenseMatrix& grad_z, double kl_weight) {
  const auto& lat = t.latent;
  DenseMatrix grad_mu = grad_z;
  DenseMatrix grad_ls(grad_z.rows(), grad_z.cols());
  {
    auto gm = grad_mu.values();
    auto gl = grad_ls.values();
    auto gz = grad_z.values();
    auto m = lat.mu.values();
    auto ls = lat.log_sigma.values();
    auto eps = lat.epsilon.values();
    for (std::size_t k = 0; k < gm.size(); ++k) {
      const double sigma = std::exp(ls[k]);
      gm[k] += kl_weight * m[k];
      gl[k] = gz[k] * sigma * eps[k] + kl_weight * (sigma * sigma - 1.0);
    }
  }

  VgaeParams g;
  g.w1_mu = matmul_tn(t.aggregated, grad_mu);
  g.w1_sigma = matmul_tn(t.aggregated, grad_ls);
  const DenseMatrix grad_agg = add(matmul_nt(grad_mu, p.w1_mu), matmul_nt(grad_ls, p.w1_sigma));
  DenseMatrix grad_hidden = spmm_tn(adj.matrix, grad_agg);
  if (!t.dropout_mask.empty()) grad_hidden = dropout_backward(grad_hidden, t.dropout_mask);
  const DenseMatrix grad_pre = relu_backward(grad_hidden, t.pre_hidden);
  g.w0 = spmm_tn(adj.matrix, grad_pre);
  return g;
}

/// Loss and weight gradients for fixed noise. The building block of both
/// training and gradient checking.
struct LossAndGrad {
  LossBreakdown loss;
  VgaeParams grad;
};

inline LossAndGrad loss_and_gradient(const NormalizedAdjacency& adj, const VgaeParams& p, const EncoderNoise& noise,
                                     const ReconstructionTarget& target, const LossOptions& opt) {
  const EncoderTrace t = encode_trace(adj, p, noise);
  LossAndGrad out;
  DenseMatrix grad_z;
  out.loss.reconstruction = reconstruction_loss(t.latent.z, target, resolve_pos_weight(opt.pos_weight, target), &grad_z);
  out.loss.kl = kl_gaussian(t.latent.mu, t.latent.log_sigma);
  out.loss.total = out.loss.reconstruction + opt.kl_weight * out.loss.kl;
  out.grad = backward(adj, p, t, grad_z, opt.kl_weight);
  return out;
}

struct EpochRecord {
  std::size_t epoch = 0;
  LossBreakdown loss;
  double val_auc = 0.0;
  double val_ap = 0.0;
};

struct TrainResult {
  VgaeParams params;
  std::vector<EpochRecord> history;
  /// 1-based epoch whose params were returned; 0 means the initialization.
  std::size_t selected_epoch = 0;
};

/// Everything derived from the training edges that the encoder and the loss
/// need. Built once per run.
struct TrainingView {
  Graph adjacency;
  NormalizedAdjacency normalized;

  TrainingView(const Graph& full, const EdgeSplit& split)
      : adjacency(add_self_loops(training_graph(full, split))), normalized(normalize_symmetric(adjacency)) {}
};

inline ScoredPairs score_split(const DenseMatrix& z, std::span<const Edge> pos, std::span<const Edge> neg) {
  return {decode_logits(z, pos), decode_logits(z, neg)};
}

/// Full-batch training: one noise draw, one loss/backward and one Adam step
/// per epoch. Returns the params of the epoch with the best validation AUC
/// (ties keep the earlier epoch), or the last epoch when there is no
/// validation set.
inline TrainResult train(const Graph& full, const EdgeSplit& split, const VgaeConfig& c, Objective objective) {
  validate(c);
  if (objective == Objective::Cvgae && (!full.is_heterogeneous() || split.policy != SplitPolicy::Bipartite))
    throw Error(ErrorCode::PolicyMismatch, "cvgae needs a heterogeneous graph and a bipartite split");

  const std::size_t n = full.num_nodes();
  const TrainingView view(full, split);
  const ReconstructionTarget target = objective == Objective::Vgae
                                          ? ReconstructionTarget::full(view.adjacency)
                                          : ReconstructionTarget::cross(view.adjacency, bipartite_index(full));
  const LossOptions opt{c.effective_kl_weight(n), c.pos_weight};

  Rng rng(c.seed);
  TrainResult result;
  result.params = init_params(n, c, rng);
  if (c.epochs == 0) return result;

  const bool has_val = !split.val_pos.empty() && !split.val_neg.empty();
  VgaeParams params = result.params;
  double best_auc = -1.0;
  AdamState adam{c.adam, {}, {}, 0};
  Rng eval_rng = rng.split(1);

  for (std::size_t epoch = 1; epoch <= c.epochs; ++epoch) {
    const EncoderNoise noise = draw_noise(n, c, rng);
    const LossAndGrad lg = loss_and_gradient(view.normalized, params, noise, target, opt);
    if (!std::isfinite(lg.loss.total)) throw Error(ErrorCode::NonFiniteValue, "loss at epoch " + std::to_string(epoch));
    const std::vector<ParamGrad> tensors{{params.w0, lg.grad.w0}, {params.w1_mu, lg.grad.w1_mu},
                                         {params.w1_sigma, lg.grad.w1_sigma}};
    adam_step(tensors, adam);

    EpochRecord rec{epoch, lg.loss, 0.0, 0.0};
    if (has_val) {
      const LatentSample eval = encode(view.normalized, params, c, eval_rng, false);
      const ScoredPairs sp = score_split(eval.z, split.val_pos, split.val_neg);
      rec.val_auc = roc_auc(sp);
      rec.val_ap = average_precision(sp);
      if (rec.val_auc > best_auc) {
        best_auc = rec.val_auc;
        result.params = params;
        result.selected_epoch = epoch;
      }
    }
    result.history.push_back(rec);
  }
  if (!has_val) {
    result.params = std::move(params);
    result.selected_epoch = c.epochs;
  }
  return result;
}

}  // namespace dgp
