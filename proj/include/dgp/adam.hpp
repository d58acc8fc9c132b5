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
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dgp/dense.hpp"
#include "dgp/error.hpp"

namespace dgp {

struct AdamHyper {
  double step_size = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators, one pair per parameter tensor, allocated on the
/// first step.
struct AdamState {
  AdamHyper hyper;
  std::vector<DenseMatrix> first_moment;
  std::vector<DenseMatrix> second_moment;
  std::int64_t step = 0;
};

struct ParamGrad {
  std::reference_wrapper<DenseMatrix> param;
  std::reference_wrapper<const DenseMatrix> grad;
};

/// Bias-corrected Adam update. All gradients are validated before any
/// parameter is touched, so a failed step leaves params and state intact.
inline void adam_step(std::span<const ParamGrad> tensors, AdamState& state) {
  for (const auto& pg : tensors) {
    detail::require_shape(pg.param.get().same_shape(pg.grad.get()), "adam_step: param/grad shape");
    if (!pg.grad.get().all_finite()) throw Error(ErrorCode::NonFiniteGradient, "adam_step");
  }
  if (state.step == 0 && state.first_moment.empty()) {
    for (const auto& pg : tensors) {
      state.first_moment.emplace_back(pg.param.get().rows(), pg.param.get().cols());
      state.second_moment.emplace_back(pg.param.get().rows(), pg.param.get().cols());
    }
  }
  detail::require_shape(state.first_moment.size() == tensors.size(), "adam_step: tensor count");
  for (std::size_t t = 0; t < tensors.size(); ++t)
    detail::require_shape(state.first_moment[t].same_shape(tensors[t].param.get()), "adam_step: state shape");

  const auto& h = state.hyper;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(h.beta1, t);
  const double bc2 = 1.0 - std::pow(h.beta2, t);

  for (std::size_t idx = 0; idx < tensors.size(); ++idx) {
    auto p = tensors[idx].param.get().values();
    auto g = tensors[idx].grad.get().values();
    auto m = state.first_moment[idx].values();
    auto v = state.second_moment[idx].values();
    for (std::size_t k = 0; k < p.size(); ++k) {
      m[k] = h.beta1 * m[k] + (1.0 - h.beta1) * g[k];
      v[k] = h.beta2 * v[k] + (1.0 - h.beta2) * g[k] * g[k];
      const double m_hat = m[k] / bc1;
      const double v_hat = v[k] / bc2;
      p[k] -= h.step_size * m_hat / (std::sqrt(v_hat) + h.epsilon);
    }
  }
}

}  // namespace dgp
