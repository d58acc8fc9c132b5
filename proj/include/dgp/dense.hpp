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
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "dgp/error.hpp"
#include "dgp/rng.hpp"

namespace dgp {

/// Row-major matrix of doubles with value semantics.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw Error(ErrorCode::ShapeMismatch, "ragged initializer");
      std::copy(row.begin(), row.end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
      ++i;
    }
    return m;
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  bool same_shape(const DenseMatrix& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

namespace detail {
inline void require_shape(bool ok, const char* op) {
  if (!ok) throw Error(ErrorCode::ShapeMismatch, op);
}
}  // namespace detail

inline void check_finite(const DenseMatrix& m, const std::string& what) {
  if (!m.all_finite()) throw Error(ErrorCode::NonFiniteValue, what + " contains NaN or Inf");
}

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// a * b
inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_shape(a.cols() == b.rows(), "matmul: a.cols != b.rows");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

/// a^T * b
inline DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_shape(a.rows() == b.rows(), "matmul_tn: a.rows != b.rows");
  DenseMatrix out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto a_row = a.row(k);
    const auto b_row = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = a_row[i];
      if (aki == 0.0) continue;
      auto out_row = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aki * b_row[j];
    }
  }
  return out;
}

/// a * b^T
inline DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_shape(a.cols() == b.cols(), "matmul_nt: a.cols != b.cols");
  DenseMatrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  return out;
}

inline DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_shape(a.same_shape(b), "add");
  DenseMatrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += bv[k];
  return out;
}

inline DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
  detail::require_shape(a.same_shape(b), "hadamard");
  DenseMatrix out = a;
  auto o = out.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] *= bv[k];
  return out;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

// Scalar activations. sigmoid branches on sign so exp never overflows.

inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1 + e^x)
inline double softplus(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// log(sigmoid(x)) = -softplus(-x)
inline double log_sigmoid(double x) noexcept { return -softplus(-x); }

inline DenseMatrix relu(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (double& v : out.values()) v = std::max(0.0, v);
  return out;
}

/// Gradient through relu given the pre-activation input. The subgradient at 0 is 0.
inline DenseMatrix relu_backward(const DenseMatrix& grad_out, const DenseMatrix& pre) {
  detail::require_shape(grad_out.same_shape(pre), "relu_backward");
  DenseMatrix out = grad_out;
  auto o = out.values();
  auto p = pre.values();
  for (std::size_t k = 0; k < o.size(); ++k)
    if (!(p[k] > 0.0)) o[k] = 0.0;
  return out;
}

inline DenseMatrix sigmoid(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (double& v : out.values()) v = sigmoid(v);
  return out;
}

/// Gradient through sigmoid given its output s: grad * s * (1 - s).
inline DenseMatrix sigmoid_backward(const DenseMatrix& grad_out, const DenseMatrix& out) {
  detail::require_shape(grad_out.same_shape(out), "sigmoid_backward");
  DenseMatrix g = grad_out;
  auto gv = g.values();
  auto s = out.values();
  for (std::size_t k = 0; k < gv.size(); ++k) gv[k] *= s[k] * (1.0 - s[k]);
  return g;
}

struct DropoutResult {
  DenseMatrix output;
  /// 0 for dropped entries, 1/keep_p for survivors.
  DenseMatrix mask;
};

/// Draws an inverted-dropout mask without applying it.
inline DenseMatrix dropout_mask(std::size_t rows, std::size_t cols, double keep_p, Rng& rng) {
  if (!(keep_p > 0.0 && keep_p <= 1.0))
    throw Error(ErrorCode::InvalidKeepProb, "keep probability must be in (0, 1]");
  DenseMatrix mask(rows, cols, 1.0);
  if (keep_p == 1.0) return mask;
  const double scale = 1.0 / keep_p;
  for (double& v : mask.values()) v = rng.bernoulli(keep_p) ? scale : 0.0;
  return mask;
}

inline DropoutResult dropout(const DenseMatrix& m, double keep_p, Rng& rng) {
  DenseMatrix mask = dropout_mask(m.rows(), m.cols(), keep_p, rng);
  if (keep_p == 1.0) return {m, std::move(mask)};
  return {hadamard(m, mask), std::move(mask)};
}

inline DenseMatrix dropout_backward(const DenseMatrix& grad_out, const DenseMatrix& mask) {
  return hadamard(grad_out, mask);
}

inline DenseMatrix sample_standard_normal(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
inline DenseMatrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  for (double& v : m.values()) v = rng.uniform(-limit, limit);
  return m;
}

}  // namespace dgp
