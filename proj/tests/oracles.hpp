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

// Test-only reference implementations. Each one recomputes a quantity the
// slow, obvious way (dense loops, brute-force enumeration, finite
// differences) and deliberately shares no code path with the library
// beyond the plain DenseMatrix container.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dgp/dense.hpp"
#include "dgp/graph.hpp"

namespace dgp::oracle {

inline std::vector<std::vector<double>> dense_adjacency(const Graph& g, bool unit_diagonal) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1.0;
  if (unit_diagonal)
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

/// D^{-1/2} A D^{-1/2} from a dense 0/1 matrix with unit diagonal.
inline std::vector<std::vector<double>> dense_normalized(const Graph& g) {
  auto a = dense_adjacency(g, true);
  const std::size_t n = a.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i] += a[i][j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] /= std::sqrt(d[i] * d[j]);
  return a;
}

inline DenseMatrix dense_product(const std::vector<std::vector<double>>& a, const DenseMatrix& b) {
  DenseMatrix out(a.size(), b.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < b.rows(); ++k) s += a[i][k] * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

/// mu of the two-layer GCN with identity features, no dropout:
/// Ã relu(Ã W0) W_mu, all in dense loops.
inline DenseMatrix gcn_mean(const Graph& g, const DenseMatrix& w0, const DenseMatrix& w_mu) {
  const auto a = dense_normalized(g);
  DenseMatrix h = dense_product(a, w0);
  for (double& v : h.values()) v = v > 0.0 ? v : 0.0;
  return naive_matmul(dense_product(a, h), w_mu);
}

/// log(1 + e^t), split on the sign of t so neither branch overflows or
/// cancels.
inline double log_one_plus_exp(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

/// -[w y log σ(x) + (1 - y) log(1 - σ(x))], using -log σ(x) = log(1 + e^-x)
/// and -log(1 - σ(x)) = log(1 + e^x).
inline double bce(double logit, double target, double pos_weight) {
  return pos_weight * target * log_one_plus_exp(-logit) + (1.0 - target) * log_one_plus_exp(logit);
}

inline double logit(const DenseMatrix& z, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < z.cols(); ++k) s += z(i, k) * z(j, k);
  return s;
}

/// Mean BCE over all N² ordered pairs of the unit-diagonal adjacency.
inline double full_reconstruction(const DenseMatrix& z, const Graph& g, double pos_weight) {
  const auto a = dense_adjacency(g, true);
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += bce(logit(z, i, j), a[i][j], pos_weight);
  return s / static_cast<double>(n * n);
}

/// Mean BCE over pairs (i, j) with mask(i, j) true, using the dense
/// adjacency as target. With mask = "i disease and j gene" this is the
/// cross-type reconstruction.
inline double masked_reconstruction(const DenseMatrix& z, const Graph& g, double pos_weight,
                                    const std::function<bool(std::size_t, std::size_t)>& mask) {
  const auto a = dense_adjacency(g, true);
  const std::size_t n = a.size();
  double s = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (mask(i, j)) {
        s += bce(logit(z, i, j), a[i][j], pos_weight);
        ++count;
      }
  return count ? s / static_cast<double>(count) : 0.0;
}

inline double kl(const DenseMatrix& mu, const DenseMatrix& log_sigma) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.rows(); ++i)
    for (std::size_t k = 0; k < mu.cols(); ++k) {
      const double m = mu(i, k), ls = log_sigma(i, k);
      const double var = std::exp(ls) * std::exp(ls);
      s += 0.5 * (var + m * m - 1.0 - std::log(var));
    }
  return s;
}

/// Fraction of (pos, neg) pairs ordered correctly, ties counting 1/2.
inline double auc_pairs(const std::vector<double>& pos, const std::vector<double>& neg) {
  double s = 0.0;
  for (double p : pos)
    for (double n : neg) s += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  return s / static_cast<double>(pos.size() * neg.size());
}

/// Precision at each positive's rank, where a positive is ranked after every
/// higher score and every negative with an equal score.
inline double ap_direct(const std::vector<double>& pos, const std::vector<double>& neg) {
  std::vector<double> sorted_pos = pos;
  std::sort(sorted_pos.begin(), sorted_pos.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t idx = 0; idx < sorted_pos.size(); ++idx) {
    const double v = sorted_pos[idx];
    std::size_t above_or_tied_neg = 0, above_pos = 0, tied_pos_before = 0;
    for (double n : neg)
      if (n >= v) ++above_or_tied_neg;
    for (std::size_t k = 0; k < sorted_pos.size(); ++k) {
      if (sorted_pos[k] > v) ++above_pos;
      else if (sorted_pos[k] == v && k < idx) ++tied_pos_before;
    }
    const double hits = static_cast<double>(above_pos + tied_pos_before + 1);
    const double rank = hits + static_cast<double>(above_or_tied_neg);
    s += hits / rank;
  }
  return s / static_cast<double>(pos.size());
}

/// Central difference of f with respect to every entry of x.
inline DenseMatrix finite_difference(DenseMatrix& x, const std::function<double()>& f, double h = 1e-5) {
  DenseMatrix g(x.rows(), x.cols());
  auto xv = x.values();
  auto gv = g.values();
  for (std::size_t k = 0; k < xv.size(); ++k) {
    const double orig = xv[k];
    xv[k] = orig + h;
    const double up = f();
    xv[k] = orig - h;
    const double down = f();
    xv[k] = orig;
    gv[k] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Largest elementwise |a - b| / max(|a|, |b|, floor). The floor keeps
/// entries whose true gradient is ~0 from dividing roundoff by ~0.
inline double max_relative_error(const DenseMatrix& a, const DenseMatrix& b, double floor = 1e-6) {
  double worst = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) {
    const double denom = std::max({std::abs(av[k]), std::abs(bv[k]), floor});
    worst = std::max(worst, std::abs(av[k] - bv[k]) / denom);
  }
  return worst;
}

}  // namespace dgp::oracle
