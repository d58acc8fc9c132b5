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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dgp/dense.hpp"
#include "dgp/error.hpp"

namespace dgp {

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within each row.
struct SparseCsr {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return values.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t r) const noexcept {
    return {col_idx.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  std::span<const double> row_values(std::size_t r) const noexcept {
    return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }

  /// Stored value at (r, c), or 0 when (r, c) is outside the pattern.
  double at(std::size_t r, std::size_t c) const noexcept {
    const auto cols_r = row_cols(r);
    std::size_t lo = 0, hi = cols_r.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cols_r[mid] < c) lo = mid + 1;
      else hi = mid;
    }
    return (lo < cols_r.size() && cols_r[lo] == c) ? values[row_ptr[r] + lo] : 0.0;
  }

  friend bool operator==(const SparseCsr&, const SparseCsr&) = default;
};

inline bool is_well_formed(const SparseCsr& a) {
  if (a.row_ptr.size() != a.rows + 1 || a.row_ptr.front() != 0 || a.row_ptr.back() != a.nnz())
    return false;
  if (a.col_idx.size() != a.values.size()) return false;
  for (std::size_t r = 0; r < a.rows; ++r) {
    if (a.row_ptr[r] > a.row_ptr[r + 1]) return false;
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      if (a.col_idx[k] >= a.cols || !std::isfinite(a.values[k])) return false;
      if (k > a.row_ptr[r] && a.col_idx[k - 1] >= a.col_idx[k]) return false;
    }
  }
  return true;
}

/// Keeps every nonzero of `d`.
inline SparseCsr to_csr(const DenseMatrix& d) {
  SparseCsr a;
  a.rows = d.rows();
  a.cols = d.cols();
  a.row_ptr.assign(1, 0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (d(i, j) != 0.0) {
        a.col_idx.push_back(static_cast<std::uint32_t>(j));
        a.values.push_back(d(i, j));
      }
    }
    a.row_ptr.push_back(a.values.size());
  }
  return a;
}

inline DenseMatrix to_dense(const SparseCsr& a) {
  DenseMatrix d(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) d(i, a.col_idx[k]) = a.values[k];
  return d;
}

inline SparseCsr sparse_identity(std::size_t n) {
  SparseCsr a;
  a.rows = a.cols = n;
  a.row_ptr.resize(n + 1);
  a.col_idx.resize(n);
  a.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) a.row_ptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) a.col_idx[i] = static_cast<std::uint32_t>(i);
  return a;
}

/// a * b, accumulated in stored column order for a fixed summation sequence.
inline DenseMatrix spmm(const SparseCsr& a, const DenseMatrix& b) {
  detail::require_shape(a.cols == b.rows(), "spmm: a.cols != b.rows");
  DenseMatrix out(a.rows, b.cols());
  for (std::size_t i = 0; i < a.rows; ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const double v = a.values[k];
      const auto b_row = b.row(a.col_idx[k]);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += v * b_row[j];
    }
  }
  return out;
}

/// a^T * b. Backward of spmm with respect to its dense operand.
inline DenseMatrix spmm_tn(const SparseCsr& a, const DenseMatrix& b) {
  detail::require_shape(a.rows == b.rows(), "spmm_tn: a.rows != b.rows");
  DenseMatrix out(a.cols, b.cols());
  for (std::size_t i = 0; i < a.rows; ++i) {
    const auto b_row = b.row(i);
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const double v = a.values[k];
      auto out_row = out.row(a.col_idx[k]);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += v * b_row[j];
    }
  }
  return out;
}

}  // namespace dgp
