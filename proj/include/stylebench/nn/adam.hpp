#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "stylebench/util/errors.hpp"

namespace stylebench::nn {

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment accumulators for one parameter tensor.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  uint64_t t = 0;

  explicit AdamState(size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// theta <- theta - lr * m_hat / (sqrt(v_hat) + eps), bias-corrected with the
// post-increment step counter.
inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
                      const AdamHyper& hp) {
  if (params.size() != grads.size()) throw DataError("adam_step: shape mismatch");
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.t = 0;
  }
  state.t += 1;
  const double bc1 = 1.0 - std::pow(hp.beta1, double(state.t));
  const double bc2 = 1.0 - std::pow(hp.beta2, double(state.t));
  double* __restrict m = state.m.data();
  double* __restrict v = state.v.data();
  double* __restrict p = params.data();
  const double* __restrict g = grads.data();
  for (size_t i = 0; i < params.size(); ++i) {
    m[i] = hp.beta1 * m[i] + (1.0 - hp.beta1) * g[i];
    v[i] = hp.beta2 * v[i] + (1.0 - hp.beta2) * g[i] * g[i];
    const double m_hat = m[i] / bc1;
    const double v_hat = v[i] / bc2;
    p[i] -= hp.lr * m_hat / (std::sqrt(v_hat) + hp.eps);
  }
}

}  // namespace stylebench::nn
